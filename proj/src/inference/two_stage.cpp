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
#include "topostat/inference.hpp"

namespace topostat {

std::string_view to_string(FilterStatistic s) noexcept {
  return s == FilterStatistic::OverallMean ? "mean" : "sd";
}

std::string_view to_string(Adjustment a) noexcept {
  return a == Adjustment::QValue ? "qvalue" : "bh";
}

std::string_view to_string(ElementStatus s) noexcept {
  switch (s) {
    case ElementStatus::CornerMasked: return "masked";
    case ElementStatus::Filtered: return "filtered";
    case ElementStatus::Tested: return "tested";
  }
  return "masked";
}

std::size_t LabeledImageCollection::group_size(int label) const {
  return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), label));
}

void LabeledImageCollection::validate() const {
  if (labels.size() != images.size()) fail(ErrorCode::InvalidLabels, "one label per image is required");
  for (int l : labels)
    if (l != 1 && l != 2) fail(ErrorCode::InvalidLabels, "labels must be 1 or 2");
  if (group_size(1) < 2 || group_size(2) < 2)
    fail(ErrorCode::InvalidLabels, "each group needs at least two images");
  for (const auto& img : images) {
    if (!img.aligned_with(images.front()) || img.values.size() != images.front().values.size())
      fail(ErrorCode::InvalidInput, "images do not share grid, dimension, weight and bandwidth");
    for (double v : img.values)
      if (!std::isfinite(v)) fail(ErrorCode::InvalidInput, "image contains a non-finite value");
  }
}

void FilterConfig::validate() const {
  if (!(threshold >= 0.0 && threshold < 100.0))
    fail(ErrorCode::InvalidInput, "filter threshold must lie in [0, 100)");
  if (!(lambda > 0.0 && lambda < 1.0)) fail(ErrorCode::InvalidInput, "lambda must lie in (0, 1)");
  if (std::isnan(corner_cap) || corner_cap <= 0.0) fail(ErrorCode::InvalidInput, "corner cap must be positive");
}

std::size_t TestResultGrid::tested() const {
  return static_cast<std::size_t>(std::count_if(elements.begin(), elements.end(), [](const ElementResult& e) {
    return e.status == ElementStatus::Tested;
  }));
}

double TestResultGrid::min_q() const {
  double best = 1.0;
  for (const auto& e : elements)
    if (e.status == ElementStatus::Tested) best = std::min(best, e.q);
  return best;
}

std::size_t TestResultGrid::rejections(double alpha) const {
  return static_cast<std::size_t>(std::count_if(elements.begin(), elements.end(), [alpha](const ElementResult& e) {
    return e.status == ElementStatus::Tested && e.q <= alpha;
  }));
}

std::vector<double> filter_statistics(const LabeledImageCollection& collection, FilterStatistic statistic) {
  const std::size_t n = collection.images.size();
  if (n < 2) fail(ErrorCode::InvalidInput, "filter statistics need at least two images");
  const std::size_t m = collection.elements();
  std::vector<double> mean(m, 0.0);
  for (const auto& img : collection.images)
    for (std::size_t e = 0; e < m; ++e) mean[e] += img.values[e];
  for (auto& v : mean) v /= double(n);
  if (statistic == FilterStatistic::OverallMean) return mean;

  std::vector<double> sd(m, 0.0);
  for (const auto& img : collection.images)
    for (std::size_t e = 0; e < m; ++e) {
      const double d = img.values[e] - mean[e];
      sd[e] += d * d;
    }
  for (auto& v : sd) v = std::sqrt(v / double(n - 1));
  return sd;
}

TestResultGrid two_stage_test(const LabeledImageCollection& collection, const FilterConfig& config) {
  collection.validate();
  config.validate();
  const auto& grid = collection.images.front().grid;
  const std::size_t m = collection.elements();

  TestResultGrid result;
  result.nx = grid.nx;
  result.ny = grid.ny;
  result.elements.resize(m);

  std::vector<bool> masked(m, false);
  if (config.corner_rule == CornerRule::BirthAbovePersistence)
    masked = corner_mask(grid, 1.0, CornerRule::BirthAbovePersistence);
  else if (std::isfinite(config.corner_cap))
    masked = corner_mask(grid, config.corner_cap, CornerRule::AntiDiagonal);

  const auto stats = filter_statistics(collection, config.statistic);
  std::vector<double> candidates;
  for (std::size_t e = 0; e < m; ++e) {
    result.elements[e].filter_stat = stats[e];
    if (!masked[e]) candidates.push_back(stats[e]);
  }
  if (candidates.empty()) return result;
  result.filter_cutoff = percentile(candidates, config.threshold);

  std::vector<double> x, y, pvalues;
  std::vector<std::size_t> tested;
  for (std::size_t e = 0; e < m; ++e) {
    auto& el = result.elements[e];
    if (masked[e]) continue;
    if (stats[e] < result.filter_cutoff) {
      el.status = ElementStatus::Filtered;
      continue;
    }
    el.status = ElementStatus::Tested;
    x.clear();
    y.clear();
    for (std::size_t k = 0; k < collection.images.size(); ++k)
      (collection.labels[k] == 1 ? x : y).push_back(collection.images[k].values[e]);
    const auto t = config.test == TestKind::Pooled ? pooled_t(x, y) : welch_t(x, y);
    el.t = t.t;
    el.p = t.p;
    el.degenerate = t.degenerate;
    tested.push_back(e);
    pvalues.push_back(t.p);
  }

  if (config.adjustment == Adjustment::QValue) {
    result.pi0 = storey_pi0(pvalues, config.lambda);
    const auto q = storey_qvalues(pvalues, config.lambda, result.pi0);
    for (std::size_t k = 0; k < tested.size(); ++k) result.elements[tested[k]].q = q[k];
  } else {
    result.pi0 = 1.0;
    const auto q = bh_adjust(pvalues);
    for (std::size_t k = 0; k < tested.size(); ++k) result.elements[tested[k]].q = q[k];
  }
  return result;
}

}  // namespace topostat
