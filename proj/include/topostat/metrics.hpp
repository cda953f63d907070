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

#include <atomic>
#include <cstddef>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "topostat/ph.hpp"

namespace topostat {

enum class MetricKind { Wasserstein, Bottleneck };

struct DiagramMetric {
  MetricKind kind = MetricKind::Wasserstein;
  double p = 1.0;  // Wasserstein order; ignored for bottleneck
};

/// Optimal assignment on a dense n x n cost matrix (row-major). Entries equal
/// to +inf are forbidden. Returns the column assigned to each row.
std::vector<std::size_t> solve_assignment(std::span<const double> cost, std::size_t n);
/// Rectangular variant: n rows, m >= n columns, every row assigned.
std::vector<std::size_t> solve_assignment(std::span<const double> cost, std::size_t n, std::size_t m);

/// Diagram matching with diagonal augmentation. Rows are the points of A then
/// one diagonal slot per point of B; columns are the points of B then one
/// diagonal slot per point of A. A point may only use its own diagonal slot;
/// slot-to-slot costs are zero. Costs are L-infinity distances.
struct MatchingProblem {
  std::vector<Feature> a, b;  // finite features only
  std::size_t size() const noexcept { return a.size() + b.size(); }
  double cost(std::size_t row, std::size_t col) const;
  std::vector<double> cost_matrix(double power = 1.0) const;
};

/// Finite features of dimension `dim` from both diagrams.
MatchingProblem make_matching_problem(const PersistenceDiagram& a, const PersistenceDiagram& b, int dim);

/// Sum of the matched costs raised to `power`, added smallest first.
double matching_total(const MatchingProblem& problem, std::span<const std::size_t> row_to_col, double power);

/// p-Wasserstein distance with L-infinity ground metric. Essential classes are
/// matched among themselves by sorted birth; differing essential counts give
/// +inf. Throws invalid-input unless 1 <= p < inf.
double wasserstein(const PersistenceDiagram& a, const PersistenceDiagram& b, int dim, double p = 1.0);

/// Bottleneck distance; binary search over candidate costs with a
/// Hopcroft-Karp perfect-matching check.
double bottleneck(const PersistenceDiagram& a, const PersistenceDiagram& b, int dim);

double diagram_distance(const PersistenceDiagram& a, const PersistenceDiagram& b, int dim,
                        const DiagramMetric& metric);

/// Lazily filled symmetric distance matrix over a fixed diagram list. Each
/// pair is computed at most once.
class PairwiseDistances {
 public:
  PairwiseDistances(std::span<const PersistenceDiagram> diagrams, int dim, DiagramMetric metric);

  std::size_t size() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j);
  /// Computes every missing pair, in parallel.
  void fill_all();
  /// Number of distance evaluations performed so far.
  std::size_t evaluations() const noexcept { return evaluations_.load(); }
  std::vector<double> matrix();

 private:
  double& slot(std::size_t i, std::size_t j) { return cache_[i < j ? i * n_ + j : j * n_ + i]; }

  std::span<const PersistenceDiagram> diagrams_;
  int dim_;
  DiagramMetric metric_;
  std::size_t n_;
  std::vector<double> cache_;
  std::atomic<std::size_t> evaluations_{0};
};

/// Sum over the two groups of mean within-group pairwise distance. Throws
/// invalid-labels when a group has fewer than two members or the groups
/// overlap.
double joint_loss(PairwiseDistances& distances, std::span<const std::size_t> group_i,
                  std::span<const std::size_t> group_j);

/// Same, with a group id (1 or 2) per diagram.
double joint_loss(PairwiseDistances& distances, std::span<const int> labels);

double joint_loss(std::span<const PersistenceDiagram> diagrams, std::span<const int> labels, int dim,
                  const DiagramMetric& metric);

}  // namespace topostat
