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
#include <string>
#include <vector>

#include "topostat/inference.hpp"
#include "topostat/metrics.hpp"
#include "topostat/ph.hpp"
#include "topostat/vectorize.hpp"

namespace topostat {

enum class ShapeKind { OneCircle, TwoCircles };

/// Points on one circle or on two concentric circles, plus Gaussian noise.
struct ShapeSpec {
  ShapeKind kind = ShapeKind::OneCircle;
  std::vector<double> radii{1.0};
  std::size_t n_points = 50;
  double noise_sigma = 0.0;

  static ShapeSpec one_circle(double r = 1.0, std::size_t n = 50, double sigma = 0.0);
  static ShapeSpec two_circles(double r1 = 0.9, double r2 = 1.1, std::size_t n = 50, double sigma = 0.0);
  void validate() const;
};

/// Angles are uniform; with two circles each point first picks a circle with
/// equal probability. Then N(0, sigma^2) noise is added to every coordinate.
PointCloud sample_shape(const ShapeSpec& spec, std::uint64_t seed);

/// Pseudo-rock generator parameters: M seed points, S dispersion points with
/// per-axis dispersion scales, binarization threshold t.
struct RockSpec {
  std::size_t seeds = 180;       // M
  std::size_t dispersion = 80;   // S
  double sigma1 = 4.0;
  double sigma2 = 4.0;
  double threshold = 0.7;        // t
  std::size_t width = 200;
  std::size_t height = 200;

  void validate() const;
};

/// 2D binary image. Seed points are uniform in [0,W) x [0,H); each dispersion
/// point is an existing point (chosen uniformly) offset by N(0, diag(s1^2, s2^2)).
/// Points are counted per pixel and the count grid is smoothed with a
/// unit-peak Gaussian of width sigma1 (cut at 4 sigma1); a pixel is grain
/// where the smoothed value is >= t.
BinaryVolume pseudo_rock(const RockSpec& spec, std::uint64_t seed);

/// Smoothed field behind pseudo_rock, before thresholding (x fastest).
RealGrid pseudo_rock_field(const RockSpec& spec, std::uint64_t seed);

/// Non-overlapping blocks on a blocks^d lattice, x fastest. block_size
/// defaults to extent / blocks along each axis.
std::vector<BinaryVolume> extract_subregions(const BinaryVolume& volume, std::size_t blocks = 3,
                                             std::optional<std::size_t> block_size = std::nullopt);

/// Rips settings used by the circle studies.
struct RipsSettings {
  int max_dim = 2;
  double max_scale = 2.0;
};

/// Diagrams of n clouds from `a` (label 1) followed by n clouds from `b`
/// (label 2). Cloud k uses seed mix_seed(seed, k).
struct DiagramSample {
  std::vector<PersistenceDiagram> diagrams;
  std::vector<int> labels;
};
DiagramSample sample_shape_groups(const ShapeSpec& a, const ShapeSpec& b, std::size_t n_per_group,
                                  const RipsSettings& rips, std::uint64_t seed);

/// Persistence images of one homology dimension for every diagram.
LabeledImageCollection vectorize_collection(const std::vector<PersistenceDiagram>& diagrams,
                                            const std::vector<int>& labels, int dim, const GridSpec& grid,
                                            WeightKind weight, double bandwidth, double inf_cap);

struct PowerConfig {
  ShapeSpec group_a = ShapeSpec::one_circle();
  ShapeSpec group_b = ShapeSpec::two_circles();
  std::vector<double> sigmas{0.05, 0.10, 0.15, 0.20};
  std::vector<WeightKind> weights{WeightKind::Constant, WeightKind::SoftArctan, WeightKind::HardArctan,
                                  WeightKind::Linear};
  std::vector<FilterStatistic> filters{FilterStatistic::OverallMean, FilterStatistic::OverallSd};
  std::vector<double> thresholds{0.0, 20.0, 40.0, 60.0, 80.0};
  std::size_t reps = 500;
  std::size_t n_per_group = 10;
  double alpha = 0.05;
  std::uint64_t seed = 0;

  RipsSettings rips{};
  int homology_dim = 1;
  GridSpec grid{0.0, 2.0, 0.0, 2.0, 40, 40};
  double bandwidth = 0.075;
  double inf_cap = 2.0;
  double corner_cap = 2.0;
  Adjustment adjustment = Adjustment::QValue;
  double lambda = 0.5;

  // Permutation baseline; skipped when permutation_reps is 0.
  std::size_t permutation_reps = 0;
  std::size_t permutation_shuffles = 50;
  DiagramMetric permutation_metric{};
};

struct PowerRow {
  std::string method;  // "two-stage" or "permutation"
  double sigma = 0.0;
  std::optional<WeightKind> weight;
  std::optional<FilterStatistic> filter;
  double threshold = 0.0;
  std::size_t reps = 0;
  std::size_t rejections = 0;
  double power = 0.0;
  double std_error = 0.0;  // sqrt(power (1 - power) / reps)
};

/// Full factorial over sigmas x weights x filters x thresholds. A replicate
/// rejects when some element has q <= alpha. Replicate r at sigma index s
/// draws from mix_seed(mix_seed(seed, s), r).
std::vector<PowerRow> power_experiment(const PowerConfig& config);

struct ScenarioConfig {
  RockSpec group_a{};
  RockSpec group_b{};
  std::size_t n_per_group = 50;
  std::vector<WeightKind> weights{WeightKind::Linear, WeightKind::HardArctan, WeightKind::SoftArctan,
                                  WeightKind::Constant};
  FilterStatistic filter = FilterStatistic::OverallMean;
  double threshold = 50.0;
  std::size_t resolution = 40;
  std::vector<int> dims{0, 1};
  std::size_t shuffles = 200;  // 0 skips the permutation test
  DiagramMetric metric{};
  Adjustment adjustment = Adjustment::QValue;
  double lambda = 0.5;
  std::uint64_t seed = 0;
};

struct ScenarioDimResult {
  int dim = 0;
  GridSpec grid;
  double inf_cap = 0.0;
  std::vector<std::pair<WeightKind, TestResultGrid>> tests;
  std::optional<PermutationResult> permutation;

  double min_q(WeightKind w) const;
};

struct ScenarioResult {
  std::vector<ScenarioDimResult> dims;
  double porosity_a = 0.0;
  double porosity_b = 0.0;
};

/// Diagrams of the SEDT cubical filtration for n images per group.
/// Image k of group A uses mix_seed(mix_seed(seed, 0), k); group B uses
/// stream 1.
DiagramSample sample_rock_groups(const RockSpec& a, const RockSpec& b, std::size_t n_per_group,
                                 std::uint64_t seed, std::vector<double>* porosities = nullptr);

/// Pseudo-rock comparison: per dimension, images on an experiment-wide grid
/// for each weight, two-stage minimum q, and a permutation p-value.
ScenarioResult scenario_experiment(const ScenarioConfig& config);

/// Experiment-wide infinite-death cap: the largest finite death (or birth
/// when larger) of dimension `dim` across all diagrams.
double experiment_inf_cap(const std::vector<PersistenceDiagram>& diagrams, int dim);

}  // namespace topostat
