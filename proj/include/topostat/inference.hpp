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

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "topostat/metrics.hpp"
#include "topostat/vectorize.hpp"

namespace topostat {

/// Aligned images with a group id (1 or 2) per image.
struct LabeledImageCollection {
  std::vector<PersistenceImage> images;
  std::vector<int> labels;

  std::size_t group_size(int label) const;
  std::size_t elements() const { return images.empty() ? 0 : images.front().values.size(); }
  /// Throws invalid-labels on bad labels or groups smaller than two, and
  /// invalid-input when images are not aligned.
  void validate() const;
};

enum class FilterStatistic { OverallMean, OverallSd };
enum class TestKind { Pooled, Welch };
enum class Adjustment { QValue, BenjaminiHochberg };

std::string_view to_string(FilterStatistic s) noexcept;
std::string_view to_string(Adjustment a) noexcept;

struct FilterConfig {
  FilterStatistic statistic = FilterStatistic::OverallMean;
  double threshold = 50.0;  // percentile C in [0, 100)
  double corner_cap = kInfinity;
  CornerRule corner_rule = CornerRule::AntiDiagonal;
  TestKind test = TestKind::Pooled;
  Adjustment adjustment = Adjustment::QValue;
  double lambda = 0.5;

  void validate() const;
};

enum class ElementStatus : std::uint8_t { CornerMasked, Filtered, Tested };
std::string_view to_string(ElementStatus s) noexcept;

struct ElementResult {
  ElementStatus status = ElementStatus::CornerMasked;
  double filter_stat = 0.0;
  // Present only for tested elements.
  double t = 0.0;
  double p = 1.0;
  double q = 1.0;
  bool degenerate = false;  // zero pooled variance
};

struct TestResultGrid {
  std::size_t nx = 0, ny = 0;
  std::vector<ElementResult> elements;  // x fastest
  double filter_cutoff = 0.0;
  double pi0 = 1.0;

  std::size_t m() const { return elements.size(); }
  std::size_t tested() const;
  /// Smallest q among tested elements, or 1 when nothing was tested.
  double min_q() const;
  std::size_t rejections(double alpha) const;
  bool rejects_any(double alpha) const { return rejections(alpha) > 0; }
  const ElementResult& at(std::size_t i, std::size_t j) const { return elements[j * nx + i]; }
};

struct TTestResult {
  double t = 0.0;
  double p = 1.0;
  bool degenerate = false;
};

/// Two-sided pooled-variance two-sample t-test, df = nx + ny - 2. Zero pooled
/// variance yields p = 1 when the means agree and p = 0 otherwise. Throws
/// invalid-input when a sample has fewer than two values.
TTestResult pooled_t(std::span<const double> x, std::span<const double> y);

/// Welch's unequal-variance t-test (Welch-Satterthwaite df). Stage-one
/// independence is not guaranteed with this test.
TTestResult welch_t(std::span<const double> x, std::span<const double> y);

/// Two-sided p-value of Student's t with `df` degrees of freedom.
double student_t_two_sided(double t, double df);

/// Percentile with linear interpolation between order statistics
/// (inclusive definition: rank (n - 1) * c / 100).
double percentile(std::span<const double> values, double c);

/// Storey's pi0 estimate min(1, #{p > lambda} / (m (1 - lambda))).
double storey_pi0(std::span<const double> p, double lambda);

/// q_(i) = min_{j >= i} pi0 m p_(j) / j, returned in input order. When pi0 is
/// given it replaces the estimate. Throws invalid-input on p outside [0, 1]
/// or lambda outside (0, 1).
std::vector<double> storey_qvalues(std::span<const double> p, double lambda = 0.5,
                                   std::optional<double> pi0 = std::nullopt);

/// Benjamini-Hochberg adjusted p-values (Storey with pi0 = 1).
std::vector<double> bh_adjust(std::span<const double> p);

/// Label-free per-element mean or sample standard deviation over all images.
std::vector<double> filter_statistics(const LabeledImageCollection& collection, FilterStatistic statistic);

/// Corner mask, percentile filter on the remaining elements, element-wise
/// t-tests, then multiplicity adjustment over the tested elements.
TestResultGrid two_stage_test(const LabeledImageCollection& collection, const FilterConfig& config);

struct PermutationResult {
  double p = 0.0;
  double unshuffled_loss = 0.0;
  std::vector<double> shuffled_losses;
  bool exhaustive = false;
};

/// Monte-Carlo permutation test on the joint loss. Shuffle k is drawn from an
/// RNG seeded by (seed, k) and preserves the group sizes; when the number of
/// distinct assignments is at most N they are enumerated instead. p is the
/// fraction of shuffled losses strictly below the unshuffled loss.
PermutationResult permutation_test(std::span<const PersistenceDiagram> diagrams, std::span<const int> labels,
                                   int dim, const DiagramMetric& metric, std::size_t shuffles,
                                   std::uint64_t seed);

/// Same, over a precomputed distance cache.
PermutationResult permutation_test(PairwiseDistances& distances, std::span<const int> labels,
                                   std::size_t shuffles, std::uint64_t seed);

}  // namespace topostat
