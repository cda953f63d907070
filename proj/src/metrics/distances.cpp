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
#include <limits>

#include "topostat/error.hpp"
#include "topostat/metrics.hpp"
#include "topostat/parallel.hpp"

namespace topostat {

namespace detail {
std::size_t max_matching(const std::vector<std::vector<std::size_t>>& adj, std::size_t n);
}

namespace {

constexpr double kForbidden = std::numeric_limits<double>::infinity();

double linf(const Feature& x, const Feature& y) {
  return std::max(std::abs(x.birth - y.birth), std::abs(x.death - y.death));
}

double to_diagonal(const Feature& x) { return 0.5 * (x.death - x.birth); }

struct Essentials {
  std::vector<double> a, b;
  bool balanced() const { return a.size() == b.size(); }
};

Essentials essential_births(const PersistenceDiagram& a, const PersistenceDiagram& b, int dim) {
  Essentials e;
  for (const auto& f : a)
    if (f.dim == dim && f.essential()) e.a.push_back(f.birth);
  for (const auto& f : b)
    if (f.dim == dim && f.essential()) e.b.push_back(f.birth);
  std::sort(e.a.begin(), e.a.end());
  std::sort(e.b.begin(), e.b.end());
  return e;
}

double sum_ascending(std::vector<double>& terms) {
  std::sort(terms.begin(), terms.end());
  double total = 0.0;
  for (double t : terms) total += t;
  return total;
}

double powered(double c, double p) { return p == 1.0 ? c : std::pow(c, p); }

// Optimal matched costs (raised to p) of the augmented problem. Unmatched
// points of the wider side pay their diagonal cost up front, so only the
// narrower side needs rows: columns are its partners plus one private
// diagonal slot per row.
std::vector<double> optimal_terms(const MatchingProblem& problem, double p) {
  const bool swap = problem.a.size() > problem.b.size();
  const auto& rows = swap ? problem.b : problem.a;
  const auto& cols = swap ? problem.a : problem.b;
  const std::size_t n = rows.size(), nc = cols.size(), m = nc + n;

  std::vector<double> col_diag(nc);
  for (std::size_t c = 0; c < nc; ++c) col_diag[c] = powered(to_diagonal(cols[c]), p);
  std::vector<double> cost(n * m, kForbidden);
  for (std::size_t r = 0; r < n; ++r) {
    double* row = cost.data() + r * m;
    for (std::size_t c = 0; c < nc; ++c) row[c] = powered(linf(rows[r], cols[c]), p) - col_diag[c];
    row[nc + r] = powered(to_diagonal(rows[r]), p);
  }
  const auto assignment = solve_assignment(cost, n, m);

  std::vector<double> terms;
  terms.reserve(n + nc);
  std::vector<char> taken(nc, 0);
  for (std::size_t r = 0; r < n; ++r) {
    const auto c = assignment[r];
    if (c < nc) {
      taken[c] = 1;
      terms.push_back(powered(linf(rows[r], cols[c]), p));
    } else {
      terms.push_back(powered(to_diagonal(rows[r]), p));
    }
  }
  for (std::size_t c = 0; c < nc; ++c)
    if (!taken[c]) terms.push_back(col_diag[c]);
  return terms;
}

}  // namespace

double MatchingProblem::cost(std::size_t row, std::size_t col) const {
  const std::size_t na = a.size(), nb = b.size();
  if (row < na && col < nb) return linf(a[row], b[col]);
  if (row < na) return col - nb == row ? to_diagonal(a[row]) : kForbidden;
  if (col < nb) return row - na == col ? to_diagonal(b[col]) : kForbidden;
  return 0.0;
}

std::vector<double> MatchingProblem::cost_matrix(double power) const {
  const std::size_t n = size();
  std::vector<double> m(n * n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      const double v = cost(r, c);
      m[r * n + c] = (power == 1.0 || std::isinf(v)) ? v : std::pow(v, power);
    }
  return m;
}

MatchingProblem make_matching_problem(const PersistenceDiagram& a, const PersistenceDiagram& b, int dim) {
  MatchingProblem problem;
  for (const auto& f : a)
    if (f.dim == dim && !f.essential()) problem.a.push_back(f);
  for (const auto& f : b)
    if (f.dim == dim && !f.essential()) problem.b.push_back(f);
  return problem;
}

double matching_total(const MatchingProblem& problem, std::span<const std::size_t> row_to_col, double power) {
  std::vector<double> terms;
  terms.reserve(row_to_col.size());
  for (std::size_t r = 0; r < row_to_col.size(); ++r) {
    const double c = problem.cost(r, row_to_col[r]);
    terms.push_back(power == 1.0 ? c : std::pow(c, power));
  }
  return sum_ascending(terms);
}

double wasserstein(const PersistenceDiagram& a, const PersistenceDiagram& b, int dim, double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) fail(ErrorCode::InvalidInput, "wasserstein order must be in [1, inf)");
  const auto ess = essential_births(a, b, dim);
  if (!ess.balanced()) return kInfinity;

  const auto problem = make_matching_problem(a, b, dim);
  auto terms = optimal_terms(problem, p);
  for (std::size_t k = 0; k < ess.a.size(); ++k) {
    const double d = std::abs(ess.a[k] - ess.b[k]);
    terms.push_back(p == 1.0 ? d : std::pow(d, p));
  }
  const double total = sum_ascending(terms);
  return p == 1.0 ? total : std::pow(total, 1.0 / p);
}

double bottleneck(const PersistenceDiagram& a, const PersistenceDiagram& b, int dim) {
  const auto ess = essential_births(a, b, dim);
  if (!ess.balanced()) return kInfinity;
  double essential_part = 0.0;
  for (std::size_t k = 0; k < ess.a.size(); ++k) essential_part = std::max(essential_part, std::abs(ess.a[k] - ess.b[k]));

  const auto problem = make_matching_problem(a, b, dim);
  const std::size_t n = problem.size();
  if (n == 0) return essential_part;

  const auto matrix = problem.cost_matrix();
  std::vector<double> candidates;
  candidates.reserve(matrix.size());
  for (double c : matrix)
    if (!std::isinf(c)) candidates.push_back(c);
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  std::vector<std::vector<std::size_t>> adj(n);
  auto feasible = [&](double threshold) {
    for (std::size_t r = 0; r < n; ++r) {
      adj[r].clear();
      for (std::size_t c = 0; c < n; ++c)
        if (matrix[r * n + c] <= threshold) adj[r].push_back(c);
    }
    return detail::max_matching(adj, n) == n;
  };

  // Killing every point is always feasible, so the largest candidate works.
  std::size_t lo = 0, hi = candidates.size() - 1;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (feasible(candidates[mid]))
      hi = mid;
    else
      lo = mid + 1;
  }
  return std::max(candidates[lo], essential_part);
}

double diagram_distance(const PersistenceDiagram& a, const PersistenceDiagram& b, int dim,
                        const DiagramMetric& metric) {
  return metric.kind == MetricKind::Bottleneck ? bottleneck(a, b, dim) : wasserstein(a, b, dim, metric.p);
}

PairwiseDistances::PairwiseDistances(std::span<const PersistenceDiagram> diagrams, int dim, DiagramMetric metric)
    : diagrams_(diagrams),
      dim_(dim),
      metric_(metric),
      n_(diagrams.size()),
      cache_(n_ * n_, std::numeric_limits<double>::quiet_NaN()) {
  for (std::size_t i = 0; i < n_; ++i) cache_[i * n_ + i] = 0.0;
}

double PairwiseDistances::operator()(std::size_t i, std::size_t j) {
  double& s = slot(i, j);
  if (std::isnan(s)) {
    s = diagram_distance(diagrams_[i], diagrams_[j], dim_, metric_);
    ++evaluations_;
  }
  return s;
}

void PairwiseDistances::fill_all() {
  std::vector<std::pair<std::size_t, std::size_t>> missing;
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = i + 1; j < n_; ++j)
      if (std::isnan(cache_[i * n_ + j])) missing.emplace_back(i, j);
  parallel_for(missing.size(), [&](std::size_t k) { (*this)(missing[k].first, missing[k].second); });
}

std::vector<double> PairwiseDistances::matrix() {
  fill_all();
  std::vector<double> m(n_ * n_);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) m[i * n_ + j] = (*this)(i, j);
  return m;
}

double joint_loss(PairwiseDistances& distances, std::span<const std::size_t> group_i,
                  std::span<const std::size_t> group_j) {
  if (group_i.size() < 2 || group_j.size() < 2)
    fail(ErrorCode::InvalidLabels, "each group needs at least two diagrams");
  std::vector<char> seen(distances.size(), 0);
  for (auto g : {group_i, group_j})
    for (auto idx : g) {
      if (idx >= distances.size()) fail(ErrorCode::InvalidLabels, "group index out of range");
      if (seen[idx]) fail(ErrorCode::InvalidLabels, "groups overlap or repeat a diagram");
      seen[idx] = 1;
    }

  auto within = [&](std::span<const std::size_t> g) {
    double sum = 0.0;
    for (std::size_t x = 0; x < g.size(); ++x)
      for (std::size_t y = x + 1; y < g.size(); ++y) sum += distances(g[x], g[y]);
    const double m = double(g.size());
    return 2.0 / (m * (m - 1.0)) * sum;
  };
  return within(group_i) + within(group_j);
}

double joint_loss(PairwiseDistances& distances, std::span<const int> labels) {
  if (labels.size() != distances.size()) fail(ErrorCode::InvalidLabels, "one label per diagram is required");
  std::vector<std::size_t> gi, gj;
  for (std::size_t k = 0; k < labels.size(); ++k) {
    if (labels[k] == 1)
      gi.push_back(k);
    else if (labels[k] == 2)
      gj.push_back(k);
    else
      fail(ErrorCode::InvalidLabels, "labels must be 1 or 2");
  }
  return joint_loss(distances, gi, gj);
}

double joint_loss(std::span<const PersistenceDiagram> diagrams, std::span<const int> labels, int dim,
                  const DiagramMetric& metric) {
  PairwiseDistances distances(diagrams, dim, metric);
  return joint_loss(distances, labels);
}

}  // namespace topostat
