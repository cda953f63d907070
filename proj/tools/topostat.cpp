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

// Command-line front end. Talks to the library only through topostat.h.

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "topostat/topostat.h"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct Failure {
  ts_status status;
  std::string message;
};

void check(ts_status s) {
  if (s != TS_OK) throw Failure{s, ts_last_error()};
}

[[noreturn]] void invalid(ts_status s, const std::string& message) { throw Failure{s, message}; }

template <class T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using Cloud = std::unique_ptr<ts_cloud, Deleter<ts_cloud, ts_cloud_free>>;
using Volume = std::unique_ptr<ts_volume, Deleter<ts_volume, ts_volume_free>>;
using Diagram = std::unique_ptr<ts_diagram, Deleter<ts_diagram, ts_diagram_free>>;
using Image = std::unique_ptr<ts_image, Deleter<ts_image, ts_image_free>>;
using Result = std::unique_ptr<ts_test_result, Deleter<ts_test_result, ts_result_free>>;

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

json num(double v) { return std::isfinite(v) ? json(v) : json(fmt(v)); }

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) invalid(TS_IO, "cannot write " + path.string());
  out << text;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) invalid(TS_IO, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_json(const fs::path& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::exception& e) {
    invalid(TS_INVALID_INPUT, path.string() + ": " + e.what());
  }
}

fs::path out_dir_of(const fs::path& out) {
  return out.has_parent_path() ? out.parent_path() : fs::path(".");
}

void write_run(const fs::path& dir, const std::string& command, const json& config) {
  json run = {{"command", command}, {"version", ts_version()}, {"threads", ts_get_threads()}, {"config", config}};
  write_file(dir / "run.json", run.dump(2) + "\n");
}

json grid_json(const ts_grid& g) {
  return {{"b_min", g.b_min}, {"b_max", g.b_max}, {"p_min", g.p_min}, {"p_max", g.p_max}, {"nx", g.nx}, {"ny", g.ny}};
}

ts_grid grid_from(const json& j) {
  try {
    return {j.at("b_min").get<double>(), j.at("b_max").get<double>(), j.at("p_min").get<double>(),
            j.at("p_max").get<double>(), j.at("nx").get<size_t>(),    j.at("ny").get<size_t>()};
  } catch (const json::exception& e) {
    invalid(TS_INVALID_INPUT, std::string("bad grid: ") + e.what());
  }
}

ts_grid grid_from_list(const std::vector<double>& box, size_t nx, size_t ny) {
  if (box.size() != 4) invalid(TS_INVALID_INPUT, "--grid needs b_min,b_max,p_min,p_max");
  return {box[0], box[1], box[2], box[3], nx, ny};
}

double parse_real(const std::string& text) {
  if (text == "inf") return INFINITY;
  if (text == "-inf") return -INFINITY;
  double v = 0;
  const auto r = std::from_chars(text.data(), text.data() + text.size(), v);
  if (r.ec != std::errc() || r.ptr != text.data() + text.size()) invalid(TS_INVALID_INPUT, "bad number '" + text + "'");
  return v;
}

Diagram load_diagram(const fs::path& path) {
  ts_diagram* d = nullptr;
  check(ts_diagram_read_csv(path.string().c_str(), &d));
  return Diagram(d);
}

Image load_image(const fs::path& path) {
  ts_image* img = nullptr;
  check(ts_image_read(path.string().c_str(), &img));
  return Image(img);
}

ts_metric parse_metric(const std::string& s) {
  if (s == "wasserstein") return TS_METRIC_WASSERSTEIN;
  if (s == "bottleneck") return TS_METRIC_BOTTLENECK;
  invalid(TS_INVALID_INPUT, "unknown metric '" + s + "'");
}

ts_weight parse_weight(const std::string& s) {
  ts_weight w{};
  check(ts_weight_parse(s.c_str(), &w));
  return w;
}

// ---- manifests ----

struct Entry {
  fs::path path;
  int label = 0;  // remapped to 1 or 2
  std::optional<int> dim;
};

struct Manifest {
  std::vector<Entry> entries;
  std::optional<ts_grid> grid;
  json provenance;
  std::vector<json> raw_labels;
};

// Labels may be any two distinct JSON scalars; the first in sorted order
// becomes group 1.
Manifest load_manifest(const fs::path& path, bool need_two_groups) {
  const auto j = parse_json(path);
  Manifest m;
  if (!j.contains("entries") || !j["entries"].is_array() || j["entries"].empty())
    invalid(TS_INVALID_INPUT, "manifest needs a non-empty entries array");
  const auto base = path.has_parent_path() ? path.parent_path() : fs::path(".");
  std::vector<json> labels;
  for (const auto& e : j["entries"]) {
    if (!e.contains("path")) invalid(TS_INVALID_INPUT, "manifest entry without a path");
    Entry entry;
    entry.path = base / e["path"].get<std::string>();
    if (e.contains("dim")) entry.dim = e["dim"].get<int>();
    const json label = e.value("label", json(nullptr));
    if (label.is_null()) {
      if (need_two_groups) invalid(TS_INVALID_LABELS, "manifest entry without a label");
    } else if (std::find(labels.begin(), labels.end(), label) == labels.end()) {
      labels.push_back(label);
    }
    m.raw_labels.push_back(label);
    m.entries.push_back(std::move(entry));
  }
  if (need_two_groups && labels.size() != 2)
    invalid(TS_INVALID_LABELS, "manifest labels must form exactly two groups, found " + std::to_string(labels.size()));
  std::sort(labels.begin(), labels.end());
  for (std::size_t k = 0; k < m.entries.size(); ++k)
    if (!m.raw_labels[k].is_null())
      m.entries[k].label = m.raw_labels[k] == labels.front() ? 1 : 2;
  if (j.contains("grid")) m.grid = grid_from(j["grid"]);
  m.provenance = j.value("provenance", json::object());
  return m;
}

// Dimension from the flag, else from the entries, which must agree.
int resolve_dim(const Manifest& m, std::optional<int> flag) {
  std::optional<int> dim = flag;
  for (const auto& e : m.entries) {
    if (!e.dim) continue;
    if (flag) continue;
    if (dim && *dim != *e.dim) invalid(TS_INVALID_INPUT, "manifest entries mix homology dimensions");
    dim = e.dim;
  }
  if (!dim) invalid(TS_INVALID_INPUT, "no homology dimension given (--dim or manifest dim)");
  return *dim;
}

std::vector<int> labels_of(const Manifest& m) {
  std::vector<int> out;
  for (const auto& e : m.entries) out.push_back(e.label);
  return out;
}

bool is_image(const fs::path& path) {
  auto side = path;
  side += ".json";
  return fs::exists(side);
}

std::vector<const ts_diagram*> raw(const std::vector<Diagram>& v) {
  std::vector<const ts_diagram*> out;
  for (const auto& d : v) out.push_back(d.get());
  return out;
}

std::vector<const ts_image*> raw(const std::vector<Image>& v) {
  std::vector<const ts_image*> out;
  for (const auto& d : v) out.push_back(d.get());
  return out;
}

// Shared vectorization settings.
struct VectorizeOptions {
  std::string weight = "constant";
  std::string method = "image";
  size_t resolution = 40;
  size_t nx = 0, ny = 0;
  std::vector<double> grid;
  double bandwidth = 0.0;
  std::string inf_cap = "auto";

  void add(CLI::App* app) {
    app->add_option("--weight", weight, "constant, soft_arctan, hard_arctan or linear")->capture_default_str();
    app->add_option("--method", method, "image or binning")->check(CLI::IsMember({"image", "binning"}))
        ->capture_default_str();
    app->add_option("--resolution", resolution, "pixels per axis when --nx/--ny are not given")
        ->capture_default_str();
    app->add_option("--nx", nx, "birth pixels");
    app->add_option("--ny", ny, "persistence pixels");
    app->add_option("--grid", grid, "b_min,b_max,p_min,p_max (default: fitted to the inputs)")->delimiter(',');
    app->add_option("--bandwidth", bandwidth, "Gaussian bandwidth; 0 selects 1.5 pixel widths")
        ->capture_default_str();
    app->add_option("--inf-cap", inf_cap, "value replacing infinite deaths, or auto")->capture_default_str();
  }
};

struct Vectorized {
  std::vector<Image> images;
  ts_grid grid{};
  double inf_cap = 0.0;
  json config;
};

Vectorized vectorize_all(const std::vector<Diagram>& diagrams, int dim, const VectorizeOptions& o,
                         std::optional<ts_grid> manifest_grid) {
  Vectorized v;
  auto ptrs = raw(diagrams);
  if (o.inf_cap == "auto")
    check(ts_experiment_inf_cap(ptrs.data(), ptrs.size(), dim, &v.inf_cap));
  else
    v.inf_cap = parse_real(o.inf_cap);
  const size_t nx = o.nx ? o.nx : o.resolution, ny = o.ny ? o.ny : o.resolution;
  if (!o.grid.empty())
    v.grid = grid_from_list(o.grid, nx, ny);
  else if (manifest_grid)
    v.grid = *manifest_grid;
  else
    check(ts_grid_fit(ptrs.data(), ptrs.size(), dim, v.inf_cap, nx, ny, &v.grid));
  const auto w = parse_weight(o.weight);
  for (const auto& d : diagrams) {
    ts_image* img = nullptr;
    if (o.method == "binning")
      check(ts_binning_image(d.get(), dim, &v.grid, v.inf_cap, &img));
    else
      check(ts_persistence_image(d.get(), dim, &v.grid, w, o.bandwidth, v.inf_cap, &img));
    v.images.emplace_back(img);
  }
  const double h = o.bandwidth > 0 ? o.bandwidth : 1.5 * (v.grid.b_max - v.grid.b_min) / double(v.grid.nx);
  v.config = {{"dim", dim},      {"method", o.method},        {"weight", ts_weight_name(w)},
              {"bandwidth", h},  {"inf_cap", num(v.inf_cap)}, {"grid", grid_json(v.grid)}};
  return v;
}

// Matrix CSV, top row = highest persistence.
std::string matrix_csv(const double* values, size_t nx, size_t ny) {
  std::string out;
  for (size_t r = 0; r < ny; ++r) {
    const size_t j = ny - 1 - r;
    for (size_t i = 0; i < nx; ++i) {
      if (i) out += ',';
      out += fmt(values[j * nx + i]);
    }
    out += '\n';
  }
  return out;
}

// ---- subcommands ----

struct PdOptions {
  std::string input, out, complex = "rips";
  int max_dim = 2;
  double max_scale = 2.0;
  std::optional<int> dim;
  bool skip_header = false;
};

void run_pd(const PdOptions& o) {
  Diagram d;
  json config = {{"input", o.input}, {"complex", o.complex}, {"out", o.out}};
  ts_diagram* raw_d = nullptr;
  if (o.complex == "rips") {
    ts_cloud* c = nullptr;
    check(ts_cloud_read_csv(o.input.c_str(), o.skip_header, &c));
    Cloud cloud(c);
    const int hom = o.dim.value_or(o.max_dim - 1);
    check(ts_rips_persistence(cloud.get(), o.max_dim, o.max_scale, hom, &raw_d));
    config.update({{"max_dim", o.max_dim}, {"max_scale", o.max_scale}, {"dim", hom}, {"skip_header", o.skip_header}});
  } else {
    ts_volume* v = nullptr;
    check(ts_volume_read(o.input.c_str(), &v));
    Volume volume(v);
    const int hom = o.dim.value_or(int(ts_volume_ndim(volume.get())) - 1);
    check(ts_volume_persistence(volume.get(), hom, &raw_d));
    config.update({{"dim", hom}, {"filtration", "signed distance transform"}});
  }
  d.reset(raw_d);
  check(ts_diagram_write_csv(d.get(), o.out.c_str()));
  write_run(out_dir_of(o.out), "pd", config);
}

struct VectorizeCmd {
  std::vector<std::string> inputs;
  std::string manifest, out;
  std::optional<int> dim;
  VectorizeOptions v;
};

void run_vectorize(const VectorizeCmd& o) {
  std::vector<Diagram> diagrams;
  Manifest m;
  if (!o.manifest.empty()) {
    m = load_manifest(o.manifest, false);
    for (const auto& e : m.entries) diagrams.push_back(load_diagram(e.path));
  } else {
    if (o.inputs.empty()) invalid(TS_INVALID_INPUT, "give --input or --manifest");
    for (const auto& p : o.inputs) diagrams.push_back(load_diagram(p));
  }
  const int dim = o.manifest.empty() ? o.dim.value_or(1) : resolve_dim(m, o.dim);
  auto vec = vectorize_all(diagrams, dim, o.v, m.grid);

  json config = vec.config;
  config["out"] = o.out;
  if (o.manifest.empty() && o.inputs.size() == 1) {
    check(ts_image_write(vec.images[0].get(), o.out.c_str()));
    config["input"] = o.inputs[0];
    write_run(out_dir_of(o.out), "vectorize", config);
    return;
  }
  // Several inputs: a directory of images plus a manifest describing them.
  const fs::path dir = o.out;
  fs::create_directories(dir);
  json entries = json::array();
  for (size_t k = 0; k < vec.images.size(); ++k) {
    char name[32];
    std::snprintf(name, sizeof name, "image_%03zu.csv", k);
    check(ts_image_write(vec.images[k].get(), (dir / name).string().c_str()));
    json e = {{"path", name}, {"dim", dim}};
    if (!o.manifest.empty() && !m.raw_labels[k].is_null()) e["label"] = m.raw_labels[k];
    entries.push_back(std::move(e));
  }
  json manifest = {{"entries", entries}, {"grid", grid_json(vec.grid)}, {"provenance", {{"vectorize", config}}}};
  if (!o.manifest.empty()) manifest["provenance"]["source"] = m.provenance;
  write_file(dir / "manifest.json", manifest.dump(2) + "\n");
  config["inputs"] = o.manifest.empty() ? json(o.inputs) : json(nullptr);
  config["manifest"] = o.manifest;
  write_run(dir, "vectorize", config);
}

struct DistCmd {
  std::string a, b, metric = "wasserstein", out;
  int dim = 1;
  double p = 1.0;
};

void run_dist(const DistCmd& o) {
  auto da = load_diagram(o.a), db = load_diagram(o.b);
  double d = 0;
  check(ts_distance(da.get(), db.get(), o.dim, parse_metric(o.metric), o.p, &d));
  std::cout << fmt(d) << "\n";
  json config = {{"a", o.a}, {"b", o.b}, {"dim", o.dim}, {"metric", o.metric}, {"p", o.p}};
  if (!o.out.empty()) {
    write_file(o.out, json({{"distance", num(d)}}).dump(2) + "\n");
    config["out"] = o.out;
    write_run(out_dir_of(o.out), "dist", config);
  }
}

struct DistmatCmd {
  std::string manifest, metric = "wasserstein", out;
  std::optional<int> dim;
  double p = 1.0;
};

void run_distmat(const DistmatCmd& o) {
  const auto m = load_manifest(o.manifest, false);
  const int dim = resolve_dim(m, o.dim);
  std::vector<Diagram> diagrams;
  for (const auto& e : m.entries) diagrams.push_back(load_diagram(e.path));
  auto ptrs = raw(diagrams);
  const size_t n = ptrs.size();
  std::vector<double> mat(n * n);
  check(ts_distance_matrix(ptrs.data(), n, dim, parse_metric(o.metric), o.p, mat.data()));
  std::string text;
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) {
      if (j) text += ',';
      text += fmt(mat[i * n + j]);
    }
    text += '\n';
  }
  write_file(o.out, text);
  write_run(out_dir_of(o.out), "distmat",
            {{"manifest", o.manifest}, {"dim", dim}, {"metric", o.metric}, {"p", o.p}, {"out", o.out}});
}

struct TwoStageCmd {
  std::string manifest, out_dir = ".", filter = "mean", adjust = "qvalue", cap = "auto";
  double threshold = 50.0, lambda = 0.5, alpha = 0.05;
  bool welch = false;
  std::optional<int> dim;
  VectorizeOptions v;
};

void run_two_stage(const TwoStageCmd& o) {
  const auto m = load_manifest(o.manifest, true);
  json config = {{"manifest", o.manifest}, {"out_dir", o.out_dir}};
  std::vector<Image> images;
  double cap = INFINITY;
  if (is_image(m.entries.front().path)) {
    for (const auto& e : m.entries) images.push_back(load_image(e.path));
    cap = ts_image_inf_cap(images.front().get());
    config["input"] = "images";
  } else {
    std::vector<Diagram> diagrams;
    for (const auto& e : m.entries) diagrams.push_back(load_diagram(e.path));
    auto vec = vectorize_all(diagrams, resolve_dim(m, o.dim), o.v, m.grid);
    images = std::move(vec.images);
    cap = vec.inf_cap;
    config["input"] = "diagrams";
    config["vectorize"] = vec.config;
  }
  if (o.cap == "none")
    cap = INFINITY;
  else if (o.cap != "auto")
    cap = parse_real(o.cap);
  if (!(cap > 0)) cap = INFINITY;

  ts_filter_config fc;
  ts_filter_config_default(&fc);
  fc.filter = o.filter == "sd" ? TS_FILTER_SD : TS_FILTER_MEAN;
  fc.threshold = o.threshold;
  fc.corner_cap = cap;
  fc.welch = o.welch ? 1 : 0;
  fc.adjust = o.adjust == "bh" ? TS_ADJUST_BH : TS_ADJUST_QVALUE;
  fc.lambda = o.lambda;

  const auto labels = labels_of(m);
  auto ptrs = raw(images);
  ts_test_result* r = nullptr;
  check(ts_two_stage(ptrs.data(), ptrs.size(), labels.data(), &fc, &r));
  Result result(r);

  const fs::path dir = o.out_dir;
  fs::create_directories(dir);
  check(ts_result_write_csv(result.get(), (dir / "result.csv").string().c_str()));
  const size_t nx = ts_result_nx(result.get()), ny = ts_result_ny(result.get());
  std::vector<double> q(nx * ny);
  check(ts_result_qvalues(result.get(), q.data()));
  write_file(dir / "qvalues.csv", matrix_csv(q.data(), nx, ny));

  json summary = {{"m", nx * ny},
                  {"m_tested", ts_result_tested(result.get())},
                  {"min_q", ts_result_min_q(result.get())},
                  {"alpha", o.alpha},
                  {"rejections", ts_result_rejections(result.get(), o.alpha)},
                  {"pi0", ts_result_pi0(result.get())},
                  {"filter_cutoff", num(ts_result_filter_cutoff(result.get()))}};
  write_file(dir / "summary.json", summary.dump(2) + "\n");

  config.update({{"filter", o.filter},
                 {"threshold", o.threshold},
                 {"cap", num(cap)},
                 {"test", o.welch ? "welch" : "pooled"},
                 {"adjust", o.adjust},
                 {"lambda", o.lambda},
                 {"alpha", o.alpha}});
  write_run(dir, "test two-stage", config);
}

struct PermutationCmd {
  std::string manifest, out_dir = ".", metric = "wasserstein";
  std::optional<int> dim;
  double p = 1.0, alpha = 0.05;
  size_t shuffles = 200;
  uint64_t seed = 0;
};

void run_permutation(const PermutationCmd& o) {
  const auto m = load_manifest(o.manifest, true);
  const int dim = resolve_dim(m, o.dim);
  std::vector<Diagram> diagrams;
  for (const auto& e : m.entries) diagrams.push_back(load_diagram(e.path));
  auto ptrs = raw(diagrams);
  const auto labels = labels_of(m);
  ts_permutation_summary s{};
  std::vector<double> losses(o.shuffles);
  check(ts_permutation_test(ptrs.data(), ptrs.size(), labels.data(), dim, parse_metric(o.metric), o.p, o.shuffles,
                            o.seed, &s, losses.data()));
  losses.resize(s.shuffles);
  const fs::path dir = o.out_dir;
  std::string csv = "shuffle,loss\n";
  for (size_t k = 0; k < losses.size(); ++k) csv += std::to_string(k) + ',' + fmt(losses[k]) + '\n';
  write_file(dir / "losses.csv", csv);
  json summary = {{"p", s.p},
                  {"unshuffled_loss", s.unshuffled_loss},
                  {"shuffles", s.shuffles},
                  {"exhaustive", s.exhaustive != 0},
                  {"alpha", o.alpha},
                  {"reject", s.p <= o.alpha}};
  write_file(dir / "summary.json", summary.dump(2) + "\n");
  write_run(dir, "test permutation",
            {{"manifest", o.manifest}, {"dim", dim}, {"metric", o.metric}, {"p", o.p}, {"shuffles", o.shuffles},
             {"seed", o.seed}, {"alpha", o.alpha}, {"out_dir", o.out_dir}});
}

struct PointsCmd {
  std::string shape = "one_circle", out;
  std::vector<double> radii;
  size_t n = 50;
  double sigma = 0.0;
  uint64_t seed = 0;
};

void run_points(const PointsCmd& o) {
  const bool two = o.shape == "two_circles";
  std::vector<double> radii = o.radii;
  if (radii.empty()) radii = two ? std::vector<double>{0.9, 1.1} : std::vector<double>{1.0};
  if (radii.size() != (two ? 2u : 1u)) invalid(TS_INVALID_INPUT, "--radii count does not match the shape");
  ts_cloud* c = nullptr;
  check(ts_sample_shape(two ? 1 : 0, radii[0], two ? radii[1] : 0.0, o.n, o.sigma, o.seed, &c));
  Cloud cloud(c);
  if (fs::path(o.out).has_parent_path()) fs::create_directories(fs::path(o.out).parent_path());
  check(ts_cloud_write_csv(cloud.get(), o.out.c_str()));
  write_run(out_dir_of(o.out), "simulate points",
            {{"shape", o.shape}, {"radii", radii}, {"n", o.n}, {"sigma", o.sigma}, {"seed", o.seed}, {"out", o.out}});
}

struct RockCmd {
  ts_rock_spec spec{};
  std::string out;
  uint64_t seed = 0;
};

void run_rock(const RockCmd& o) {
  ts_volume* v = nullptr;
  check(ts_pseudo_rock(&o.spec, o.seed, &v));
  Volume volume(v);
  if (fs::path(o.out).has_parent_path()) fs::create_directories(fs::path(o.out).parent_path());
  if (fs::path(o.out).extension() == ".pgm")
    check(ts_volume_write_pgm(volume.get(), o.out.c_str()));
  else
    check(ts_volume_write_raw(volume.get(), o.out.c_str()));
  const auto& s = o.spec;
  write_run(out_dir_of(o.out), "simulate rock",
            {{"M", s.seeds}, {"S", s.dispersion}, {"sigma1", s.sigma1}, {"sigma2", s.sigma2}, {"t", s.threshold},
             {"width", s.width}, {"height", s.height}, {"seed", o.seed}, {"out", o.out},
             {"porosity", ts_volume_porosity(volume.get())}});
}

struct ExperimentCmd {
  std::string config, out_dir = ".";
  uint64_t seed = 0;
  std::optional<size_t> reps;
};

json run_experiment(ts_status (*fn)(const char*, char**), const ExperimentCmd& o, const char* name) {
  json cfg = o.config.empty() ? json::object() : parse_json(o.config);
  cfg["seed"] = o.seed;
  if (o.reps) cfg["reps"] = *o.reps;
  char* text = nullptr;
  check(fn(cfg.dump().c_str(), &text));
  std::unique_ptr<char, Deleter<char, ts_string_free>> holder(text);
  auto result = json::parse(text);
  write_run(o.out_dir, name, result["config"]);
  return result;
}

void run_power(const ExperimentCmd& o) {
  const auto result = run_experiment(ts_power_experiment, o, "simulate power");
  std::string csv = "method,sigma,weight,filter,threshold,reps,rejections,power,std_error\n";
  for (const auto& r : result["rows"]) {
    csv += r["method"].get<std::string>() + ',' + fmt(r["sigma"].get<double>()) + ',' +
           (r["weight"].is_null() ? "" : r["weight"].get<std::string>()) + ',' +
           (r["filter"].is_null() ? "" : r["filter"].get<std::string>()) + ',' + fmt(r["threshold"].get<double>()) +
           ',' + std::to_string(r["reps"].get<size_t>()) + ',' + std::to_string(r["rejections"].get<size_t>()) +
           ',' + fmt(r["power"].get<double>()) + ',' + fmt(r["std_error"].get<double>()) + '\n';
  }
  const fs::path dir = o.out_dir;
  write_file(dir / "power.csv", csv);
  write_file(dir / "summary.json", json({{"rows", result["rows"]}}).dump(2) + "\n");
}

void run_scenario(const ExperimentCmd& o) {
  auto result = run_experiment(ts_scenario_experiment, o, "simulate scenario");
  std::string csv = "dim,method,weight,statistic,value\n";
  for (const auto& d : result["dims"]) {
    const auto dim = std::to_string(d["dim"].get<int>());
    for (const auto& t : d["tests"])
      csv += dim + ",two-stage," + t["weight"].get<std::string>() + ",min_q," + fmt(t["min_q"].get<double>()) + '\n';
    if (!d["permutation"].is_null())
      csv += dim + ",permutation,,p," + fmt(d["permutation"]["p"].get<double>()) + '\n';
  }
  const fs::path dir = o.out_dir;
  write_file(dir / "scenario.csv", csv);
  result.erase("config");
  write_file(dir / "summary.json", result.dump(2) + "\n");
}

struct RenderCmd {
  std::string image, out;
};

void run_render(const RenderCmd& o) {
  std::vector<double> rows;
  size_t nx = 0, ny = 0;
  std::istringstream in(read_file(o.image));
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) row.push_back(parse_real(cell));
    if (nx == 0) nx = row.size();
    if (row.size() != nx) invalid(TS_INVALID_INPUT, "ragged matrix in " + o.image);
    rows.insert(rows.end(), row.begin(), row.end());
    ++ny;
  }
  if (nx == 0) invalid(TS_INVALID_INPUT, o.image + " is empty");
  // CSV rows run top to bottom; the renderer wants j = 0 at the bottom.
  std::vector<double> values(nx * ny);
  for (size_t r = 0; r < ny; ++r)
    for (size_t i = 0; i < nx; ++i) values[(ny - 1 - r) * nx + i] = rows[r * nx + i];
  check(ts_render_pgm(values.data(), nx, ny, o.out.c_str()));
  write_run(out_dir_of(o.out), "render", {{"image", o.image}, {"out", o.out}, {"nx", nx}, {"ny", ny}});
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Topological two-sample testing: persistence, vectorization, distances, inference"};
  app.require_subcommand(1);
  size_t threads = 0;
  app.add_option("--threads", threads, "worker threads (default: TOPOSTAT_THREADS or all cores)");

  PdOptions pd;
  auto* pd_cmd = app.add_subcommand("pd", "persistence diagram of a point cloud or binary volume");
  pd_cmd->add_option("--input", pd.input, "point cloud CSV, .pgm, or raw volume with .json sidecar")->required();
  pd_cmd->add_option("--complex", pd.complex, "rips or cubical")->check(CLI::IsMember({"rips", "cubical"}))
      ->capture_default_str();
  pd_cmd->add_option("--max-dim", pd.max_dim, "largest Rips simplex dimension")->capture_default_str();
  pd_cmd->add_option("--max-scale", pd.max_scale, "Rips scale limit")->capture_default_str();
  pd_cmd->add_option("--dim", pd.dim, "highest homology dimension to report");
  pd_cmd->add_flag("--skip-header", pd.skip_header, "first CSV row is a header");
  pd_cmd->add_option("--out", pd.out, "diagram CSV")->required();

  VectorizeCmd vz;
  auto* vz_cmd = app.add_subcommand("vectorize", "persistence images of diagrams on a shared grid");
  vz_cmd->add_option("--input", vz.inputs, "diagram CSV (repeatable)");
  vz_cmd->add_option("--manifest", vz.manifest, "manifest of diagrams");
  vz_cmd->add_option("--dim", vz.dim, "homology dimension");
  vz_cmd->add_option("--out", vz.out, "image CSV, or a directory for several inputs")->required();
  vz.v.add(vz_cmd);

  DistCmd dist;
  auto* dist_cmd = app.add_subcommand("dist", "distance between two diagrams");
  dist_cmd->add_option("--a", dist.a, "first diagram CSV")->required();
  dist_cmd->add_option("--b", dist.b, "second diagram CSV")->required();
  dist_cmd->add_option("--dim", dist.dim, "homology dimension")->capture_default_str();
  dist_cmd->add_option("--metric", dist.metric, "wasserstein or bottleneck")->capture_default_str();
  dist_cmd->add_option("--p", dist.p, "Wasserstein order")->capture_default_str();
  dist_cmd->add_option("--out", dist.out, "JSON output");

  DistmatCmd dm;
  auto* dm_cmd = app.add_subcommand("distmat", "pairwise distance matrix over a manifest");
  dm_cmd->add_option("--manifest", dm.manifest)->required();
  dm_cmd->add_option("--dim", dm.dim, "homology dimension");
  dm_cmd->add_option("--metric", dm.metric, "wasserstein or bottleneck")->capture_default_str();
  dm_cmd->add_option("--p", dm.p, "Wasserstein order")->capture_default_str();
  dm_cmd->add_option("--out", dm.out, "matrix CSV")->required();

  auto* test_cmd = app.add_subcommand("test", "two-group hypothesis tests");
  test_cmd->require_subcommand(1);

  TwoStageCmd ts2;
  auto* ts2_cmd = test_cmd->add_subcommand("two-stage", "filtered element-wise t-tests on persistence images");
  ts2_cmd->add_option("--manifest", ts2.manifest, "manifest of images or diagrams")->required();
  ts2_cmd->add_option("--filter", ts2.filter, "mean or sd")->check(CLI::IsMember({"mean", "sd"}))
      ->capture_default_str();
  ts2_cmd->add_option("--threshold", ts2.threshold, "filter percentile C")->capture_default_str();
  ts2_cmd->add_option("--cap", ts2.cap, "corner-mask cap: auto, none or a number")->capture_default_str();
  ts2_cmd->add_option("--adjust", ts2.adjust, "qvalue or bh")->check(CLI::IsMember({"qvalue", "bh"}))
      ->capture_default_str();
  ts2_cmd->add_option("--lambda", ts2.lambda, "tuning parameter of the pi0 estimate")->capture_default_str();
  ts2_cmd->add_option("--alpha", ts2.alpha, "level for the rejection count")->capture_default_str();
  ts2_cmd->add_flag("--welch", ts2.welch, "Welch's test instead of the pooled t-test");
  ts2_cmd->add_option("--dim", ts2.dim, "homology dimension when vectorizing diagrams");
  ts2_cmd->add_option("--out-dir", ts2.out_dir)->capture_default_str();
  ts2.v.add(ts2_cmd);

  PermutationCmd perm;
  auto* perm_cmd = test_cmd->add_subcommand("permutation", "permutation test on the joint loss");
  perm_cmd->add_option("--manifest", perm.manifest, "manifest of diagrams")->required();
  perm_cmd->add_option("--dim", perm.dim, "homology dimension");
  perm_cmd->add_option("--metric", perm.metric)->capture_default_str();
  perm_cmd->add_option("--p", perm.p, "Wasserstein order")->capture_default_str();
  perm_cmd->add_option("--N,--shuffles", perm.shuffles, "number of label shuffles")->capture_default_str();
  perm_cmd->add_option("--alpha", perm.alpha)->capture_default_str();
  perm_cmd->add_option("--seed", perm.seed)->required();
  perm_cmd->add_option("--out-dir", perm.out_dir)->capture_default_str();

  auto* sim_cmd = app.add_subcommand("simulate", "synthetic data and experiments");
  sim_cmd->require_subcommand(1);

  PointsCmd pts;
  auto* pts_cmd = sim_cmd->add_subcommand("points", "points on one or two circles");
  pts_cmd->add_option("--shape", pts.shape)->check(CLI::IsMember({"one_circle", "two_circles"}))
      ->capture_default_str();
  pts_cmd->add_option("--radii", pts.radii)->delimiter(',');
  pts_cmd->add_option("--n", pts.n)->capture_default_str();
  pts_cmd->add_option("--sigma", pts.sigma)->capture_default_str();
  pts_cmd->add_option("--seed", pts.seed)->required();
  pts_cmd->add_option("--out", pts.out)->required();

  RockCmd rock;
  ts_rock_spec_default(&rock.spec);
  auto* rock_cmd = sim_cmd->add_subcommand("rock", "2D pseudo-rock binary image");
  rock_cmd->add_option("--M", rock.spec.seeds, "seed points")->capture_default_str();
  rock_cmd->add_option("--S", rock.spec.dispersion, "dispersion points")->capture_default_str();
  rock_cmd->add_option("--sigma1", rock.spec.sigma1)->capture_default_str();
  rock_cmd->add_option("--sigma2", rock.spec.sigma2)->capture_default_str();
  rock_cmd->add_option("--t", rock.spec.threshold, "binarization threshold")->capture_default_str();
  rock_cmd->add_option("--width", rock.spec.width)->capture_default_str();
  rock_cmd->add_option("--height", rock.spec.height)->capture_default_str();
  rock_cmd->add_option("--seed", rock.seed)->required();
  rock_cmd->add_option("--out", rock.out, ".pgm, or raw bytes with a .json sidecar")->required();

  ExperimentCmd power;
  auto* power_cmd = sim_cmd->add_subcommand("power", "power table of the two-stage test on circle data");
  power_cmd->add_option("--config", power.config, "JSON configuration");
  power_cmd->add_option("--reps", power.reps, "override the replicate count");
  power_cmd->add_option("--seed", power.seed)->required();
  power_cmd->add_option("--out-dir", power.out_dir)->capture_default_str();

  ExperimentCmd scen;
  auto* scen_cmd = sim_cmd->add_subcommand("scenario", "pseudo-rock group comparison");
  scen_cmd->add_option("--config", scen.config, "JSON configuration");
  scen_cmd->add_option("--seed", scen.seed)->required();
  scen_cmd->add_option("--out-dir", scen.out_dir)->capture_default_str();

  RenderCmd render;
  auto* render_cmd = app.add_subcommand("render", "8-bit PGM of an image or q-value matrix CSV");
  render_cmd->add_option("--image", render.image)->required();
  render_cmd->add_option("--out", render.out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (threads) ts_set_threads(threads);
    if (*pd_cmd) run_pd(pd);
    else if (*vz_cmd) run_vectorize(vz);
    else if (*dist_cmd) run_dist(dist);
    else if (*dm_cmd) run_distmat(dm);
    else if (*ts2_cmd) run_two_stage(ts2);
    else if (*perm_cmd) run_permutation(perm);
    else if (*pts_cmd) run_points(pts);
    else if (*rock_cmd) run_rock(rock);
    else if (*power_cmd) run_power(power);
    else if (*scen_cmd) run_scenario(scen);
    else if (*render_cmd) run_render(render);
  } catch (const Failure& f) {
    std::string msg = f.message;
    for (auto& ch : msg)
      if (ch == '\n') ch = ' ';
    std::cerr << "error: " << ts_status_name(f.status) << ": " << msg << "\n";
    return 1;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: io: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
