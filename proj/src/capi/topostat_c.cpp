/*  topostat
 *  ========
 *  Copyright (C) 2026 The topostat Authors
 *
 *  Licensed under the Apache License, Version 2.0 (the "License");
 *  you may not use this file except in compliance with the License.
 *  You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 *  Unless required by applicable law or agreed to in writing, software
 *  distributed under the License is distributed on an "AS IS" BASIS,
 *  WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 *  See the License for the specific language governing permissions and
 *  limitations under the License.
 */

#include "topostat/topostat.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <string>

#include <json.hpp>

#include "topostat/error.hpp"
#include "topostat/inference.hpp"
#include "topostat/io.hpp"
#include "topostat/metrics.hpp"
#include "topostat/parallel.hpp"
#include "topostat/ph.hpp"
#include "topostat/simulate.hpp"
#include "topostat/vectorize.hpp"

using json = nlohmann::json;
namespace ts = topostat;

struct ts_cloud {
  ts::PointCloud value;
};
struct ts_volume {
  ts::BinaryVolume value;
};
struct ts_diagram {
  ts::PersistenceDiagram value;
};
struct ts_image {
  ts::PersistenceImage value;
};
struct ts_test_result {
  ts::TestResultGrid value;
};

namespace {

thread_local std::string t_last_error;

struct NullArgument {};

template <class T>
void require(const T* p) {
  if (!p) throw NullArgument{};
}

// Runs fn and converts exceptions to status codes.
template <class F>
ts_status guarded(F&& fn) noexcept {
  try {
    fn();
    t_last_error.clear();
    return TS_OK;
  } catch (const ts::Error& e) {
    t_last_error = e.what();
    return static_cast<ts_status>(e.code());
  } catch (const NullArgument&) {
    t_last_error = "null handle or output pointer";
    return TS_INVALID_ARGUMENT;
  } catch (const json::exception& e) {
    t_last_error = std::string("bad JSON: ") + e.what();
    return TS_INVALID_INPUT;
  } catch (const std::bad_alloc&) {
    t_last_error = "out of memory";
    return TS_INTERNAL;
  } catch (const std::exception& e) {
    t_last_error = e.what();
    return TS_INTERNAL;
  } catch (...) {
    t_last_error = "unknown failure";
    return TS_INTERNAL;
  }
}

template <class Handle, class Value>
void emit(Handle** out, Value&& v) {
  *out = new Handle{std::forward<Value>(v)};
}

ts::WeightKind to_weight(ts_weight w) {
  switch (w) {
    case TS_WEIGHT_CONSTANT: return ts::WeightKind::Constant;
    case TS_WEIGHT_SOFT_ARCTAN: return ts::WeightKind::SoftArctan;
    case TS_WEIGHT_HARD_ARCTAN: return ts::WeightKind::HardArctan;
    case TS_WEIGHT_LINEAR: return ts::WeightKind::Linear;
  }
  ts::fail(ts::ErrorCode::InvalidInput, "unknown weight");
}

ts::GridSpec to_grid(const ts_grid& g) {
  ts::GridSpec s{g.b_min, g.b_max, g.p_min, g.p_max, g.nx, g.ny};
  s.validate();
  return s;
}

ts_grid from_grid(const ts::GridSpec& g) { return {g.b_min, g.b_max, g.p_min, g.p_max, g.nx, g.ny}; }

ts::DiagramMetric to_metric(ts_metric m, double p) {
  if (m != TS_METRIC_WASSERSTEIN && m != TS_METRIC_BOTTLENECK) ts::fail(ts::ErrorCode::InvalidInput, "unknown metric");
  return {m == TS_METRIC_BOTTLENECK ? ts::MetricKind::Bottleneck : ts::MetricKind::Wasserstein, p};
}

std::vector<ts::PersistenceDiagram> gather(const ts_diagram* const* diagrams, std::size_t count) {
  require(diagrams);
  std::vector<ts::PersistenceDiagram> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    require(diagrams[k]);
    out.push_back(diagrams[k]->value);
  }
  return out;
}

ts::RockSpec to_rock(const ts_rock_spec& s) {
  ts::RockSpec r{s.seeds, s.dispersion, s.sigma1, s.sigma2, s.threshold, s.width, s.height};
  r.validate();
  return r;
}

// ---- JSON configuration ----

json number(double v) { return std::isfinite(v) ? json(v) : json(ts::io::format_double(v)); }

double as_number(const json& j) { return j.is_string() ? ts::io::parse_double(j.get<std::string>()) : j.get<double>(); }

template <class T>
void read_key(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

void read_number(const json& j, const char* key, double& out) {
  if (j.contains(key)) out = as_number(j.at(key));
}

ts::WeightKind weight_of(const json& j) {
  const auto w = ts::parse_weight(j.get<std::string>());
  if (!w) ts::fail(ts::ErrorCode::InvalidInput, "unknown weight '" + j.get<std::string>() + "'");
  return *w;
}

ts::FilterStatistic filter_of(const json& j) {
  const auto s = j.get<std::string>();
  if (s == "mean") return ts::FilterStatistic::OverallMean;
  if (s == "sd") return ts::FilterStatistic::OverallSd;
  ts::fail(ts::ErrorCode::InvalidInput, "unknown filter '" + s + "' (mean or sd)");
}

ts::Adjustment adjustment_of(const json& j) {
  const auto s = j.get<std::string>();
  if (s == "qvalue") return ts::Adjustment::QValue;
  if (s == "bh") return ts::Adjustment::BenjaminiHochberg;
  ts::fail(ts::ErrorCode::InvalidInput, "unknown adjustment '" + s + "' (qvalue or bh)");
}

ts::DiagramMetric metric_of(const json& j) {
  ts::DiagramMetric m;
  const auto kind = j.value("kind", std::string("wasserstein"));
  if (kind == "bottleneck")
    m.kind = ts::MetricKind::Bottleneck;
  else if (kind != "wasserstein")
    ts::fail(ts::ErrorCode::InvalidInput, "unknown metric '" + kind + "'");
  read_number(j, "p", m.p);
  return m;
}

json metric_json(const ts::DiagramMetric& m) {
  return {{"kind", m.kind == ts::MetricKind::Bottleneck ? "bottleneck" : "wasserstein"}, {"p", m.p}};
}

ts::ShapeSpec shape_of(const json& j, ts::ShapeSpec spec) {
  if (j.contains("kind")) {
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "one_circle") {
      spec = ts::ShapeSpec::one_circle(1.0, spec.n_points);
    } else if (kind == "two_circles") {
      spec = ts::ShapeSpec::two_circles(0.9, 1.1, spec.n_points);
    } else {
      ts::fail(ts::ErrorCode::InvalidInput, "unknown shape '" + kind + "'");
    }
  }
  read_key(j, "radii", spec.radii);
  read_key(j, "n_points", spec.n_points);
  spec.validate();
  return spec;
}

json shape_json(const ts::ShapeSpec& s) {
  return {{"kind", s.kind == ts::ShapeKind::OneCircle ? "one_circle" : "two_circles"},
          {"radii", s.radii},
          {"n_points", s.n_points}};
}

ts::RockSpec rock_of(const json& j) {
  ts::RockSpec r;
  read_key(j, "M", r.seeds);
  read_key(j, "S", r.dispersion);
  read_key(j, "sigma1", r.sigma1);
  read_key(j, "sigma2", r.sigma2);
  read_key(j, "t", r.threshold);
  read_key(j, "width", r.width);
  read_key(j, "height", r.height);
  r.validate();
  return r;
}

json rock_json(const ts::RockSpec& r) {
  return {{"M", r.seeds},        {"S", r.dispersion}, {"sigma1", r.sigma1}, {"sigma2", r.sigma2},
          {"t", r.threshold},    {"width", r.width},  {"height", r.height}};
}

json grid_json(const ts::GridSpec& g) {
  return {{"b_min", g.b_min}, {"b_max", g.b_max}, {"p_min", g.p_min}, {"p_max", g.p_max}, {"nx", g.nx}, {"ny", g.ny}};
}

ts::GridSpec grid_of(const json& j, ts::GridSpec g) {
  read_key(j, "b_min", g.b_min);
  read_key(j, "b_max", g.b_max);
  read_key(j, "p_min", g.p_min);
  read_key(j, "p_max", g.p_max);
  read_key(j, "nx", g.nx);
  read_key(j, "ny", g.ny);
  g.validate();
  return g;
}

std::uint64_t seed_of(const json& j) {
  if (!j.contains("seed")) ts::fail(ts::ErrorCode::InvalidInput, "experiment configuration needs a seed");
  return j.at("seed").get<std::uint64_t>();
}

char* duplicate(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

json power_run(const json& in) {
  ts::PowerConfig c;
  c.seed = seed_of(in);
  if (in.contains("group_a")) c.group_a = shape_of(in["group_a"], c.group_a);
  if (in.contains("group_b")) c.group_b = shape_of(in["group_b"], c.group_b);
  read_key(in, "sigmas", c.sigmas);
  if (in.contains("weights")) {
    c.weights.clear();
    for (const auto& w : in["weights"]) c.weights.push_back(weight_of(w));
  }
  if (in.contains("filters")) {
    c.filters.clear();
    for (const auto& f : in["filters"]) c.filters.push_back(filter_of(f));
  }
  read_key(in, "thresholds", c.thresholds);
  read_key(in, "reps", c.reps);
  read_key(in, "n_per_group", c.n_per_group);
  read_key(in, "alpha", c.alpha);
  if (in.contains("rips")) {
    read_key(in["rips"], "max_dim", c.rips.max_dim);
    read_key(in["rips"], "max_scale", c.rips.max_scale);
  }
  read_key(in, "homology_dim", c.homology_dim);
  if (in.contains("grid")) c.grid = grid_of(in["grid"], c.grid);
  read_key(in, "bandwidth", c.bandwidth);
  read_number(in, "inf_cap", c.inf_cap);
  read_number(in, "corner_cap", c.corner_cap);
  if (in.contains("adjustment")) c.adjustment = adjustment_of(in["adjustment"]);
  read_key(in, "lambda", c.lambda);
  read_key(in, "permutation_reps", c.permutation_reps);
  read_key(in, "permutation_shuffles", c.permutation_shuffles);
  if (in.contains("permutation_metric")) c.permutation_metric = metric_of(in["permutation_metric"]);

  json cfg = {{"group_a", shape_json(c.group_a)},
              {"group_b", shape_json(c.group_b)},
              {"sigmas", c.sigmas},
              {"weights", json::array()},
              {"filters", json::array()},
              {"thresholds", c.thresholds},
              {"reps", c.reps},
              {"n_per_group", c.n_per_group},
              {"alpha", c.alpha},
              {"seed", c.seed},
              {"rips", {{"max_dim", c.rips.max_dim}, {"max_scale", c.rips.max_scale}}},
              {"homology_dim", c.homology_dim},
              {"grid", grid_json(c.grid)},
              {"bandwidth", c.bandwidth},
              {"inf_cap", number(c.inf_cap)},
              {"corner_cap", number(c.corner_cap)},
              {"adjustment", std::string(ts::to_string(c.adjustment))},
              {"lambda", c.lambda},
              {"permutation_reps", c.permutation_reps},
              {"permutation_shuffles", c.permutation_shuffles},
              {"permutation_metric", metric_json(c.permutation_metric)}};
  for (auto w : c.weights) cfg["weights"].push_back(std::string(ts::to_string(w)));
  for (auto f : c.filters) cfg["filters"].push_back(std::string(ts::to_string(f)));

  json rows = json::array();
  for (const auto& r : ts::power_experiment(c)) {
    json row = {{"method", r.method},         {"sigma", r.sigma}, {"threshold", r.threshold},
                {"reps", r.reps},             {"rejections", r.rejections},
                {"power", r.power},           {"std_error", r.std_error}};
    row["weight"] = r.weight ? json(std::string(ts::to_string(*r.weight))) : json(nullptr);
    row["filter"] = r.filter ? json(std::string(ts::to_string(*r.filter))) : json(nullptr);
    rows.push_back(std::move(row));
  }
  return {{"config", cfg}, {"rows", rows}};
}

json scenario_run(const json& in) {
  ts::ScenarioConfig c;
  c.seed = seed_of(in);
  if (in.contains("group_a")) c.group_a = rock_of(in["group_a"]);
  if (in.contains("group_b")) c.group_b = rock_of(in["group_b"]);
  read_key(in, "n_per_group", c.n_per_group);
  if (in.contains("weights")) {
    c.weights.clear();
    for (const auto& w : in["weights"]) c.weights.push_back(weight_of(w));
  }
  if (in.contains("filter")) c.filter = filter_of(in["filter"]);
  read_key(in, "threshold", c.threshold);
  read_key(in, "resolution", c.resolution);
  read_key(in, "dims", c.dims);
  read_key(in, "shuffles", c.shuffles);
  if (in.contains("metric")) c.metric = metric_of(in["metric"]);
  if (in.contains("adjustment")) c.adjustment = adjustment_of(in["adjustment"]);
  read_key(in, "lambda", c.lambda);

  json cfg = {{"group_a", rock_json(c.group_a)},
              {"group_b", rock_json(c.group_b)},
              {"n_per_group", c.n_per_group},
              {"weights", json::array()},
              {"filter", std::string(ts::to_string(c.filter))},
              {"threshold", c.threshold},
              {"resolution", c.resolution},
              {"dims", c.dims},
              {"shuffles", c.shuffles},
              {"metric", metric_json(c.metric)},
              {"adjustment", std::string(ts::to_string(c.adjustment))},
              {"lambda", c.lambda},
              {"seed", c.seed}};
  for (auto w : c.weights) cfg["weights"].push_back(std::string(ts::to_string(w)));

  const auto result = ts::scenario_experiment(c);
  json dims = json::array();
  for (const auto& d : result.dims) {
    json entry = {{"dim", d.dim}, {"grid", grid_json(d.grid)}, {"inf_cap", number(d.inf_cap)}};
    json tests = json::array();
    for (const auto& [w, grid_result] : d.tests)
      tests.push_back({{"weight", std::string(ts::to_string(w))},
                       {"min_q", grid_result.min_q()},
                       {"tested", grid_result.tested()},
                       {"pi0", grid_result.pi0}});
    entry["tests"] = tests;
    if (d.permutation)
      entry["permutation"] = {{"p", d.permutation->p},
                              {"unshuffled_loss", d.permutation->unshuffled_loss},
                              {"shuffles", d.permutation->shuffled_losses.size()},
                              {"exhaustive", d.permutation->exhaustive}};
    else
      entry["permutation"] = nullptr;
    dims.push_back(std::move(entry));
  }
  return {{"config", cfg},
          {"porosity_a", result.porosity_a},
          {"porosity_b", result.porosity_b},
          {"dims", dims}};
}

}  // namespace

extern "C" {

const char* ts_status_name(ts_status status) {
  switch (status) {
    case TS_OK: return "ok";
    case TS_INVALID_ARGUMENT: return "invalid-argument";
    case TS_INTERNAL: return "internal";
    default: break;
  }
  if (status >= TS_INVALID_INPUT && status <= TS_IO) return ts::to_string(static_cast<ts::ErrorCode>(status)).data();
  return "unknown";
}

const char* ts_last_error(void) { return t_last_error.c_str(); }

const char* ts_version(void) { return "0.1.0"; }

void ts_set_threads(size_t n) { ts::set_thread_count(n); }

size_t ts_get_threads(void) { return ts::thread_count(); }

void ts_string_free(char* s) { std::free(s); }

// ---- point clouds ----

ts_status ts_cloud_create(size_t dim, size_t n, const double* coords, ts_cloud** out) {
  return guarded([&] {
    require(out);
    if (n * dim > 0) require(coords);
    emit(out, ts::PointCloud(dim, std::vector<double>(coords, coords + n * dim)));
  });
}

ts_status ts_cloud_read_csv(const char* path, int skip_header, ts_cloud** out) {
  return guarded([&] {
    require(path);
    require(out);
    emit(out, ts::io::read_point_cloud_csv(path, skip_header != 0));
  });
}

ts_status ts_cloud_write_csv(const ts_cloud* cloud, const char* path) {
  return guarded([&] {
    require(cloud);
    require(path);
    ts::io::write_point_cloud_csv(path, cloud->value);
  });
}

size_t ts_cloud_size(const ts_cloud* cloud) { return cloud ? cloud->value.size() : 0; }
size_t ts_cloud_dim(const ts_cloud* cloud) { return cloud ? cloud->value.dim() : 0; }
const double* ts_cloud_coords(const ts_cloud* cloud) { return cloud ? cloud->value.coords().data() : nullptr; }
void ts_cloud_free(ts_cloud* cloud) { delete cloud; }

ts_status ts_sample_shape(int kind, double r1, double r2, size_t n, double sigma, uint64_t seed, ts_cloud** out) {
  return guarded([&] {
    require(out);
    ts::ShapeSpec spec;
    if (kind == 0)
      spec = ts::ShapeSpec::one_circle(r1, n, sigma);
    else if (kind == 1)
      spec = ts::ShapeSpec::two_circles(r1, r2, n, sigma);
    else
      ts::fail(ts::ErrorCode::InvalidInput, "shape kind must be 0 (one circle) or 1 (two circles)");
    spec.validate();
    emit(out, ts::sample_shape(spec, seed));
  });
}

// ---- volumes ----

ts_status ts_volume_create(size_t ndim, const size_t* extents, const uint8_t* phase, ts_volume** out) {
  return guarded([&] {
    require(extents);
    require(phase);
    require(out);
    ts::BinaryVolume v;
    v.extents.assign(extents, extents + ndim);
    std::size_t total = ndim ? 1 : 0;
    for (auto e : v.extents) total *= e;
    v.phase.assign(phase, phase + total);
    v.validate();
    emit(out, std::move(v));
  });
}

ts_status ts_volume_read(const char* path, ts_volume** out) {
  return guarded([&] {
    require(path);
    require(out);
    emit(out, ts::io::read_volume(path));
  });
}

ts_status ts_volume_write_pgm(const ts_volume* volume, const char* path) {
  return guarded([&] {
    require(volume);
    require(path);
    ts::io::write_volume_pgm(path, volume->value);
  });
}

ts_status ts_volume_write_raw(const ts_volume* volume, const char* path) {
  return guarded([&] {
    require(volume);
    require(path);
    ts::io::write_volume_raw(path, volume->value);
  });
}

size_t ts_volume_ndim(const ts_volume* volume) { return volume ? volume->value.extents.size() : 0; }

size_t ts_volume_extent(const ts_volume* volume, size_t axis) {
  return volume && axis < volume->value.extents.size() ? volume->value.extents[axis] : 0;
}

const uint8_t* ts_volume_phase(const ts_volume* volume) { return volume ? volume->value.phase.data() : nullptr; }
double ts_volume_porosity(const ts_volume* volume) { return volume ? volume->value.porosity() : 0.0; }
void ts_volume_free(ts_volume* volume) { delete volume; }

void ts_rock_spec_default(ts_rock_spec* spec) {
  if (!spec) return;
  const ts::RockSpec r;
  *spec = {r.seeds, r.dispersion, r.sigma1, r.sigma2, r.threshold, r.width, r.height};
}

ts_status ts_pseudo_rock(const ts_rock_spec* spec, uint64_t seed, ts_volume** out) {
  return guarded([&] {
    require(spec);
    require(out);
    emit(out, ts::pseudo_rock(to_rock(*spec), seed));
  });
}

ts_status ts_sedt(const ts_volume* volume, double* out) {
  return guarded([&] {
    require(volume);
    require(out);
    const auto grid = ts::sedt(volume->value);
    std::copy(grid.values.begin(), grid.values.end(), out);
  });
}

// ---- diagrams ----

ts_status ts_diagram_create(size_t n, const int* dims, const double* births, const double* deaths,
                            ts_diagram** out) {
  return guarded([&] {
    require(out);
    std::vector<ts::Feature> features;
    if (n > 0) {
      require(dims);
      require(births);
      require(deaths);
    }
    for (std::size_t k = 0; k < n; ++k) features.push_back({dims[k], births[k], deaths[k]});
    emit(out, ts::PersistenceDiagram(std::move(features)));
  });
}

ts_status ts_diagram_read_csv(const char* path, ts_diagram** out) {
  return guarded([&] {
    require(path);
    require(out);
    emit(out, ts::io::read_diagram_csv(path));
  });
}

ts_status ts_diagram_write_csv(const ts_diagram* diagram, const char* path) {
  return guarded([&] {
    require(diagram);
    require(path);
    ts::io::write_diagram_csv(path, diagram->value);
  });
}

size_t ts_diagram_size(const ts_diagram* diagram) { return diagram ? diagram->value.size() : 0; }

ts_status ts_diagram_get(const ts_diagram* diagram, size_t i, int* dim, double* birth, double* death) {
  return guarded([&] {
    require(diagram);
    if (i >= diagram->value.size()) ts::fail(ts::ErrorCode::InvalidInput, "feature index out of range");
    const auto& f = diagram->value.features()[i];
    if (dim) *dim = f.dim;
    if (birth) *birth = f.birth;
    if (death) *death = f.death;
  });
}

void ts_diagram_free(ts_diagram* diagram) { delete diagram; }

ts_status ts_rips_persistence(const ts_cloud* cloud, int max_dim, double max_scale, int hom_dim,
                              ts_diagram** out) {
  return guarded([&] {
    require(cloud);
    require(out);
    emit(out, ts::compute_persistence(ts::build_rips(cloud->value, max_dim, max_scale), hom_dim));
  });
}

ts_status ts_volume_persistence(const ts_volume* volume, int hom_dim, ts_diagram** out) {
  return guarded([&] {
    require(volume);
    require(out);
    emit(out, ts::compute_persistence(ts::build_cubical(ts::sedt(volume->value)), hom_dim));
  });
}

ts_status ts_grid_persistence(size_t ndim, const size_t* extents, const double* values, int hom_dim,
                              ts_diagram** out) {
  return guarded([&] {
    require(extents);
    require(values);
    require(out);
    ts::RealGrid grid;
    grid.extents.assign(extents, extents + ndim);
    std::size_t total = ndim ? 1 : 0;
    for (auto e : grid.extents) total *= e;
    grid.values.assign(values, values + total);
    emit(out, ts::compute_persistence(ts::build_cubical(grid), hom_dim));
  });
}

ts_status ts_betti(const ts_diagram* diagram, int k, double t, int* out) {
  return guarded([&] {
    require(diagram);
    require(out);
    *out = ts::betti_at(diagram->value, k, t);
  });
}

// ---- vectorization ----

ts_status ts_weight_parse(const char* name, ts_weight* out) {
  return guarded([&] {
    require(name);
    require(out);
    const auto w = ts::parse_weight(name);
    if (!w) ts::fail(ts::ErrorCode::InvalidInput, std::string("unknown weight '") + name + "'");
    *out = static_cast<ts_weight>(static_cast<int>(*w));
  });
}

const char* ts_weight_name(ts_weight weight) {
  switch (weight) {
    case TS_WEIGHT_CONSTANT:
    case TS_WEIGHT_SOFT_ARCTAN:
    case TS_WEIGHT_HARD_ARCTAN:
    case TS_WEIGHT_LINEAR: return ts::to_string(to_weight(weight)).data();
  }
  return "unknown";
}

ts_status ts_grid_fit(const ts_diagram* const* diagrams, size_t count, int dim, double inf_cap, size_t nx,
                      size_t ny, ts_grid* out) {
  return guarded([&] {
    require(out);
    std::vector<ts::BirthPersistence> pooled;
    for (const auto& d : gather(diagrams, count)) {
      const auto pts = ts::transform_diagram(d, dim, inf_cap);
      pooled.insert(pooled.end(), pts.begin(), pts.end());
    }
    *out = from_grid(ts::GridSpec::fit(pooled, nx, ny));
  });
}

ts_status ts_experiment_inf_cap(const ts_diagram* const* diagrams, size_t count, int dim, double* out) {
  return guarded([&] {
    require(out);
    *out = ts::experiment_inf_cap(gather(diagrams, count), dim);
  });
}

ts_status ts_persistence_image(const ts_diagram* diagram, int dim, const ts_grid* grid, ts_weight weight,
                               double h, double inf_cap, ts_image** out) {
  return guarded([&] {
    require(diagram);
    require(grid);
    require(out);
    const auto g = to_grid(*grid);
    const auto points = ts::transform_diagram(diagram->value, dim, inf_cap);
    auto image = ts::persistence_image(points, g, to_weight(weight), h > 0.0 ? h : g.default_bandwidth());
    image.dim = dim;
    image.inf_cap = inf_cap;
    emit(out, std::move(image));
  });
}

ts_status ts_binning_image(const ts_diagram* diagram, int dim, const ts_grid* grid, double inf_cap,
                           ts_image** out) {
  return guarded([&] {
    require(diagram);
    require(grid);
    require(out);
    auto image = ts::binning_vectorize(ts::transform_diagram(diagram->value, dim, inf_cap), to_grid(*grid));
    image.dim = dim;
    image.inf_cap = inf_cap;
    emit(out, std::move(image));
  });
}

ts_status ts_image_read(const char* path, ts_image** out) {
  return guarded([&] {
    require(path);
    require(out);
    emit(out, ts::io::read_image(path));
  });
}

ts_status ts_image_write(const ts_image* image, const char* path) {
  return guarded([&] {
    require(image);
    require(path);
    ts::io::write_image(path, image->value);
  });
}

ts_status ts_image_grid(const ts_image* image, ts_grid* out) {
  return guarded([&] {
    require(image);
    require(out);
    *out = from_grid(image->value.grid);
  });
}

const double* ts_image_values(const ts_image* image) { return image ? image->value.values.data() : nullptr; }
size_t ts_image_dropped(const ts_image* image) { return image ? image->value.dropped : 0; }
int ts_image_dim(const ts_image* image) { return image ? image->value.dim : 0; }
double ts_image_inf_cap(const ts_image* image) { return image ? image->value.inf_cap : ts::kInfinity; }
void ts_image_free(ts_image* image) { delete image; }

ts_status ts_render_pgm(const double* values, size_t nx, size_t ny, const char* path) {
  return guarded([&] {
    require(values);
    require(path);
    ts::io::write_pgm_render(path, std::vector<double>(values, values + nx * ny), nx, ny);
  });
}

// ---- distances ----

ts_status ts_distance(const ts_diagram* a, const ts_diagram* b, int dim, ts_metric metric, double p, double* out) {
  return guarded([&] {
    require(a);
    require(b);
    require(out);
    *out = ts::diagram_distance(a->value, b->value, dim, to_metric(metric, p));
  });
}

ts_status ts_distance_matrix(const ts_diagram* const* diagrams, size_t count, int dim, ts_metric metric, double p,
                             double* out) {
  return guarded([&] {
    require(out);
    const auto all = gather(diagrams, count);
    ts::PairwiseDistances cache(all, dim, to_metric(metric, p));
    const auto m = cache.matrix();
    std::copy(m.begin(), m.end(), out);
  });
}

// ---- inference ----

void ts_filter_config_default(ts_filter_config* config) {
  if (!config) return;
  const ts::FilterConfig d;
  *config = {TS_FILTER_MEAN, d.threshold, d.corner_cap, 0, TS_ADJUST_QVALUE, d.lambda};
}

ts_status ts_two_stage(const ts_image* const* images, size_t count, const int* labels,
                       const ts_filter_config* config, ts_test_result** out) {
  return guarded([&] {
    require(images);
    require(labels);
    require(config);
    require(out);
    ts::LabeledImageCollection c;
    for (std::size_t k = 0; k < count; ++k) {
      require(images[k]);
      c.images.push_back(images[k]->value);
      c.labels.push_back(labels[k]);
    }
    ts::FilterConfig fc;
    fc.statistic = config->filter == TS_FILTER_SD ? ts::FilterStatistic::OverallSd : ts::FilterStatistic::OverallMean;
    fc.threshold = config->threshold;
    fc.corner_cap = config->corner_cap;
    fc.test = config->welch ? ts::TestKind::Welch : ts::TestKind::Pooled;
    fc.adjustment = config->adjust == TS_ADJUST_BH ? ts::Adjustment::BenjaminiHochberg : ts::Adjustment::QValue;
    fc.lambda = config->lambda;
    emit(out, ts::two_stage_test(c, fc));
  });
}

size_t ts_result_nx(const ts_test_result* r) { return r ? r->value.nx : 0; }
size_t ts_result_ny(const ts_test_result* r) { return r ? r->value.ny : 0; }
size_t ts_result_tested(const ts_test_result* r) { return r ? r->value.tested() : 0; }
double ts_result_min_q(const ts_test_result* r) { return r ? r->value.min_q() : 1.0; }
double ts_result_pi0(const ts_test_result* r) { return r ? r->value.pi0 : 1.0; }
double ts_result_filter_cutoff(const ts_test_result* r) { return r ? r->value.filter_cutoff : 0.0; }
size_t ts_result_rejections(const ts_test_result* r, double alpha) { return r ? r->value.rejections(alpha) : 0; }

ts_status ts_result_element(const ts_test_result* r, size_t i, size_t j, ts_element_status* status,
                            double* filter_stat, double* t, double* p, double* q) {
  return guarded([&] {
    require(r);
    if (i >= r->value.nx || j >= r->value.ny) ts::fail(ts::ErrorCode::InvalidInput, "element index out of range");
    const auto& e = r->value.at(i, j);
    if (status) *status = static_cast<ts_element_status>(static_cast<int>(e.status));
    if (filter_stat) *filter_stat = e.filter_stat;
    if (t) *t = e.t;
    if (p) *p = e.p;
    if (q) *q = e.q;
  });
}

ts_status ts_result_write_csv(const ts_test_result* r, const char* path) {
  return guarded([&] {
    require(r);
    require(path);
    ts::io::write_test_result_csv(path, r->value);
  });
}

ts_status ts_result_qvalues(const ts_test_result* r, double* out) {
  return guarded([&] {
    require(r);
    require(out);
    for (std::size_t k = 0; k < r->value.elements.size(); ++k) {
      const auto& e = r->value.elements[k];
      out[k] = e.status == ts::ElementStatus::Tested ? e.q : 1.0;
    }
  });
}

void ts_result_free(ts_test_result* r) { delete r; }

ts_status ts_permutation_test(const ts_diagram* const* diagrams, size_t count, const int* labels, int dim,
                              ts_metric metric, double p, size_t shuffles, uint64_t seed,
                              ts_permutation_summary* out, double* losses) {
  return guarded([&] {
    require(labels);
    require(out);
    const auto all = gather(diagrams, count);
    const auto r = ts::permutation_test(all, std::span<const int>(labels, count), dim, to_metric(metric, p),
                                        shuffles, seed);
    *out = {r.p, r.unshuffled_loss, r.shuffled_losses.size(), r.exhaustive ? 1 : 0};
    if (losses) std::copy(r.shuffled_losses.begin(), r.shuffled_losses.end(), losses);
  });
}

ts_status ts_pooled_t(const double* x, size_t nx, const double* y, size_t ny, double* t, double* p) {
  return guarded([&] {
    require(x);
    require(y);
    const auto r = ts::pooled_t({x, nx}, {y, ny});
    if (t) *t = r.t;
    if (p) *p = r.p;
  });
}

ts_status ts_qvalues(const double* p, size_t m, double lambda, double* out) {
  return guarded([&] {
    require(p);
    require(out);
    const auto q = ts::storey_qvalues({p, m}, lambda);
    std::copy(q.begin(), q.end(), out);
  });
}

ts_status ts_bh_adjust(const double* p, size_t m, double* out) {
  return guarded([&] {
    require(p);
    require(out);
    const auto q = ts::bh_adjust({p, m});
    std::copy(q.begin(), q.end(), out);
  });
}

// ---- experiments ----

ts_status ts_power_experiment(const char* config_json, char** result_json) {
  return guarded([&] {
    require(config_json);
    require(result_json);
    *result_json = duplicate(power_run(json::parse(config_json)).dump(2));
  });
}

ts_status ts_scenario_experiment(const char* config_json, char** result_json) {
  return guarded([&] {
    require(config_json);
    require(result_json);
    *result_json = duplicate(scenario_run(json::parse(config_json)).dump(2));
  });
}

}  // extern "C"
