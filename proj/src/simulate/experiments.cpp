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

#include <algorithm>
#include <cmath>

#include "topostat/error.hpp"
#include "topostat/parallel.hpp"
#include "topostat/simulate.hpp"

namespace topostat {

DiagramSample sample_shape_groups(const ShapeSpec& a, const ShapeSpec& b, std::size_t n_per_group,
                                  const RipsSettings& rips, std::uint64_t seed) {
  DiagramSample out;
  out.diagrams.resize(2 * n_per_group);
  out.labels.resize(2 * n_per_group);
  for (std::size_t k = 0; k < 2 * n_per_group; ++k) {
    const auto& spec = k < n_per_group ? a : b;
    const auto cloud = sample_shape(spec, mix_seed(seed, k));
    out.diagrams[k] = compute_persistence(build_rips(cloud, rips.max_dim, rips.max_scale), rips.max_dim);
    out.labels[k] = k < n_per_group ? 1 : 2;
  }
  return out;
}

LabeledImageCollection vectorize_collection(const std::vector<PersistenceDiagram>& diagrams,
                                            const std::vector<int>& labels, int dim, const GridSpec& grid,
                                            WeightKind weight, double bandwidth, double inf_cap) {
  LabeledImageCollection c;
  c.labels = labels;
  c.images.reserve(diagrams.size());
  for (const auto& d : diagrams) {
    auto img = persistence_image(transform_diagram(d, dim, inf_cap), grid, weight, bandwidth);
    img.dim = dim;
    img.inf_cap = inf_cap;
    c.images.push_back(std::move(img));
  }
  return c;
}

namespace {

PowerRow make_row(std::string method, double sigma, std::size_t reps, std::size_t rejections) {
  PowerRow row;
  row.method = std::move(method);
  row.sigma = sigma;
  row.reps = reps;
  row.rejections = rejections;
  row.power = reps ? double(rejections) / double(reps) : 0.0;
  row.std_error = reps ? std::sqrt(row.power * (1.0 - row.power) / double(reps)) : 0.0;
  return row;
}

}  // namespace

std::vector<PowerRow> power_experiment(const PowerConfig& config) {
  if (config.reps < 1) fail(ErrorCode::InvalidInput, "power experiment needs at least one replicate");
  if (config.n_per_group < 2) fail(ErrorCode::InvalidInput, "power experiment needs two clouds per group");
  config.grid.validate();

  const std::size_t nw = config.weights.size(), nf = config.filters.size(), nt = config.thresholds.size();
  std::vector<PowerRow> rows;

  for (std::size_t s = 0; s < config.sigmas.size(); ++s) {
    const double sigma = config.sigmas[s];
    ShapeSpec a = config.group_a, b = config.group_b;
    a.noise_sigma = b.noise_sigma = sigma;
    const std::uint64_t sigma_seed = mix_seed(config.seed, s);

    const std::size_t cells = nw * nf * nt;
    std::vector<std::uint8_t> reject(config.reps * cells, 0);
    const std::size_t perm_reps = std::min(config.permutation_reps, config.reps);
    std::vector<std::uint8_t> perm_reject(perm_reps, 0);

    parallel_for(config.reps, [&](std::size_t r) {
      const auto sample = sample_shape_groups(a, b, config.n_per_group, config.rips, mix_seed(sigma_seed, r));
      for (std::size_t w = 0; w < nw; ++w) {
        const auto images = vectorize_collection(sample.diagrams, sample.labels, config.homology_dim, config.grid,
                                                 config.weights[w], config.bandwidth, config.inf_cap);
        for (std::size_t f = 0; f < nf; ++f)
          for (std::size_t t = 0; t < nt; ++t) {
            FilterConfig fc;
            fc.statistic = config.filters[f];
            fc.threshold = config.thresholds[t];
            fc.corner_cap = config.corner_cap;
            fc.adjustment = config.adjustment;
            fc.lambda = config.lambda;
            const auto result = two_stage_test(images, fc);
            reject[r * cells + (w * nf + f) * nt + t] = result.rejects_any(config.alpha) ? 1 : 0;
          }
      }
      if (r < perm_reps) {
        const auto perm = permutation_test(sample.diagrams, sample.labels, config.homology_dim,
                                           config.permutation_metric, config.permutation_shuffles,
                                           mix_seed(sigma_seed ^ 0x5eedULL, r));
        perm_reject[r] = perm.p <= config.alpha ? 1 : 0;
      }
    });

    for (std::size_t w = 0; w < nw; ++w)
      for (std::size_t f = 0; f < nf; ++f)
        for (std::size_t t = 0; t < nt; ++t) {
          std::size_t hits = 0;
          for (std::size_t r = 0; r < config.reps; ++r) hits += reject[r * cells + (w * nf + f) * nt + t];
          auto row = make_row("two-stage", sigma, config.reps, hits);
          row.weight = config.weights[w];
          row.filter = config.filters[f];
          row.threshold = config.thresholds[t];
          rows.push_back(std::move(row));
        }
    if (perm_reps > 0) {
      std::size_t hits = 0;
      for (auto v : perm_reject) hits += v;
      rows.push_back(make_row("permutation", sigma, perm_reps, hits));
    }
  }
  return rows;
}

double experiment_inf_cap(const std::vector<PersistenceDiagram>& diagrams, int dim) {
  double cap = -kInfinity;
  for (const auto& d : diagrams)
    for (const auto& f : d)
      if (f.dim == dim) cap = std::max(cap, f.essential() ? f.birth : f.death);
  return std::isfinite(cap) ? cap : 0.0;
}

DiagramSample sample_rock_groups(const RockSpec& a, const RockSpec& b, std::size_t n_per_group,
                                 std::uint64_t seed, std::vector<double>* porosities) {
  DiagramSample out;
  out.diagrams.resize(2 * n_per_group);
  out.labels.resize(2 * n_per_group);
  std::vector<double> porosity(2 * n_per_group);
  parallel_for(2 * n_per_group, [&](std::size_t k) {
    const bool first = k < n_per_group;
    const auto stream = mix_seed(seed, first ? 0 : 1);
    const auto image = pseudo_rock(first ? a : b, mix_seed(stream, first ? k : k - n_per_group));
    porosity[k] = image.porosity();
    out.diagrams[k] = compute_persistence(build_cubical(sedt(image)), 1);
    out.labels[k] = first ? 1 : 2;
  });
  if (porosities) *porosities = std::move(porosity);
  return out;
}

double ScenarioDimResult::min_q(WeightKind w) const {
  for (const auto& [kind, grid_result] : tests)
    if (kind == w) return grid_result.min_q();
  return 1.0;
}

ScenarioResult scenario_experiment(const ScenarioConfig& config) {
  if (config.n_per_group < 2) fail(ErrorCode::InvalidInput, "scenario needs at least two images per group");
  std::vector<double> porosity;
  const auto sample = sample_rock_groups(config.group_a, config.group_b, config.n_per_group, config.seed, &porosity);

  ScenarioResult result;
  for (std::size_t k = 0; k < porosity.size(); ++k)
    (k < config.n_per_group ? result.porosity_a : result.porosity_b) += porosity[k];
  result.porosity_a /= double(config.n_per_group);
  result.porosity_b /= double(config.n_per_group);

  for (int dim : config.dims) {
    ScenarioDimResult dr;
    dr.dim = dim;
    dr.inf_cap = experiment_inf_cap(sample.diagrams, dim);

    std::vector<BirthPersistence> pooled;
    for (const auto& d : sample.diagrams) {
      const auto pts = transform_diagram(d, dim, dr.inf_cap);
      pooled.insert(pooled.end(), pts.begin(), pts.end());
    }
    dr.grid = GridSpec::fit(pooled, config.resolution, config.resolution);

    for (auto w : config.weights) {
      const auto images = vectorize_collection(sample.diagrams, sample.labels, dim, dr.grid, w,
                                               dr.grid.default_bandwidth(), dr.inf_cap);
      FilterConfig fc;
      fc.statistic = config.filter;
      fc.threshold = config.threshold;
      fc.adjustment = config.adjustment;
      fc.lambda = config.lambda;
      // birth + persistence = death never exceeds the cap
      fc.corner_cap = dr.inf_cap > 0.0 ? dr.inf_cap : kInfinity;
      dr.tests.emplace_back(w, two_stage_test(images, fc));
    }
    if (config.shuffles > 0)
      dr.permutation = permutation_test(sample.diagrams, sample.labels, dim, config.metric, config.shuffles,
                                        mix_seed(config.seed, 2 + std::uint64_t(dim)));
    result.dims.push_back(std::move(dr));
  }
  return result;
}

}  // namespace topostat
