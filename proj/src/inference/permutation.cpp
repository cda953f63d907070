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
#include <random>

#include "topostat/error.hpp"
#include "topostat/inference.hpp"
#include "topostat/parallel.hpp"

namespace topostat {

namespace {

void check_labels(std::span<const int> labels, std::size_t n) {
  if (labels.size() != n) fail(ErrorCode::InvalidLabels, "one label per diagram is required");
  std::size_t n1 = 0, n2 = 0;
  for (int l : labels) {
    if (l == 1)
      ++n1;
    else if (l == 2)
      ++n2;
    else
      fail(ErrorCode::InvalidLabels, "labels must be 1 or 2");
  }
  if (n1 < 2 || n2 < 2) fail(ErrorCode::InvalidLabels, "each group needs at least two diagrams");
}

// C(n, k), saturating at `limit` + 1.
std::size_t choose_capped(std::size_t n, std::size_t k, std::size_t limit) {
  k = std::min(k, n - k);
  long double c = 1.0L;
  for (std::size_t i = 1; i <= k; ++i) {
    c = c * static_cast<long double>(n - k + i) / static_cast<long double>(i);
    if (c > static_cast<long double>(limit)) return limit + 1;
  }
  return static_cast<std::size_t>(c + 0.5L);
}

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t r = rng();
    if (r >= threshold) return r % bound;
  }
}

}  // namespace

PermutationResult permutation_test(PairwiseDistances& distances, std::span<const int> labels,
                                   std::size_t shuffles, std::uint64_t seed) {
  const std::size_t n = distances.size();
  check_labels(labels, n);
  if (shuffles == 0) fail(ErrorCode::InvalidInput, "number of shuffles must be positive");
  distances.fill_all();

  PermutationResult result;
  result.unshuffled_loss = joint_loss(distances, labels);

  const std::size_t n1 = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 1));
  const std::size_t assignments = choose_capped(n, n1, shuffles);

  std::vector<std::vector<int>> draws;
  if (assignments <= shuffles) {
    result.exhaustive = true;
    std::vector<int> pattern(n, 2);
    std::fill(pattern.begin(), pattern.begin() + static_cast<std::ptrdiff_t>(n1), 1);
    // prev_permutation walks every distinct arrangement starting from the
    // lexicographically largest.
    std::sort(pattern.begin(), pattern.end(), std::greater<>());
    do draws.push_back(pattern);
    while (std::prev_permutation(pattern.begin(), pattern.end()));
  } else {
    draws.resize(shuffles);
    for (std::size_t k = 0; k < shuffles; ++k) {
      std::mt19937_64 rng(mix_seed(seed, k));
      std::vector<int> shuffled(labels.begin(), labels.end());
      for (std::size_t i = n; i > 1; --i) std::swap(shuffled[i - 1], shuffled[uniform_below(rng, i)]);
      draws[k] = std::move(shuffled);
    }
  }

  result.shuffled_losses.resize(draws.size());
  parallel_for(draws.size(), [&](std::size_t k) { result.shuffled_losses[k] = joint_loss(distances, draws[k]); });

  const auto below = std::count_if(result.shuffled_losses.begin(), result.shuffled_losses.end(),
                                   [&](double l) { return l < result.unshuffled_loss; });
  result.p = double(below) / double(draws.size());
  return result;
}

PermutationResult permutation_test(std::span<const PersistenceDiagram> diagrams, std::span<const int> labels,
                                   int dim, const DiagramMetric& metric, std::size_t shuffles,
                                   std::uint64_t seed) {
  check_labels(labels, diagrams.size());
  PairwiseDistances distances(diagrams, dim, metric);
  return permutation_test(distances, labels, shuffles, seed);
}

}  // namespace topostat
