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

#include <limits>

#include "topostat/error.hpp"
#include "topostat/metrics.hpp"

namespace topostat {

std::vector<std::size_t> solve_assignment(std::span<const double> cost, std::size_t n) {
  if (cost.size() != n * n) fail(ErrorCode::InvalidInput, "assignment cost matrix is not square");
  return solve_assignment(cost, n, n);
}

// Shortest augmenting path Hungarian method with row/column potentials,
// O(n^2 m). Row 0 and column 0 are sentinels.
std::vector<std::size_t> solve_assignment(std::span<const double> cost, std::size_t n, std::size_t m) {
  if (cost.size() != n * m || n > m) fail(ErrorCode::InvalidInput, "assignment cost matrix has a bad shape");
  if (n == 0) return {};
  constexpr double inf = std::numeric_limits<double>::infinity();

  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0), minv(m + 1);
  std::vector<std::size_t> match(m + 1, 0), way(m + 1, 0);
  std::vector<char> used(m + 1);

  for (std::size_t row = 1; row <= n; ++row) {
    match[0] = row;
    std::size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = match[j0];
      const double* crow = cost.data() + (i0 - 1) * m;
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = crow[j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      if (j1 == 0) fail(ErrorCode::InvalidInput, "assignment problem has no feasible solution");
      for (std::size_t j = 0; j <= m; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<std::size_t> row_to_col(n);
  for (std::size_t j = 1; j <= m; ++j)
    if (match[j] != 0) row_to_col[match[j] - 1] = j - 1;
  return row_to_col;
}

namespace detail {

// Maximum bipartite matching size (Hopcroft-Karp) on an n x n graph given as
// adjacency lists.
std::size_t max_matching(const std::vector<std::vector<std::size_t>>& adj, std::size_t n) {
  constexpr std::size_t none = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> match_row(n, none), match_col(n, none), dist(n);
  std::vector<std::size_t> queue(n);

  auto bfs = [&] {
    std::size_t head = 0, tail = 0;
    bool found = false;
    for (std::size_t r = 0; r < n; ++r) {
      if (match_row[r] == none) {
        dist[r] = 0;
        queue[tail++] = r;
      } else {
        dist[r] = none;
      }
    }
    while (head < tail) {
      const auto r = queue[head++];
      for (auto c : adj[r]) {
        const auto next = match_col[c];
        if (next == none) {
          found = true;
        } else if (dist[next] == none) {
          dist[next] = dist[r] + 1;
          queue[tail++] = next;
        }
      }
    }
    return found;
  };

  std::vector<std::size_t> iter(n);
  auto dfs = [&](auto&& self, std::size_t r) -> bool {
    for (auto& k = iter[r]; k < adj[r].size(); ++k) {
      const auto c = adj[r][k];
      const auto next = match_col[c];
      if (next == none || (dist[next] == dist[r] + 1 && self(self, next))) {
        match_row[r] = c;
        match_col[c] = r;
        return true;
      }
    }
    dist[r] = none;
    return false;
  };

  std::size_t size = 0;
  while (bfs()) {
    std::fill(iter.begin(), iter.end(), 0);
    for (std::size_t r = 0; r < n; ++r)
      if (match_row[r] == none && dfs(dfs, r)) ++size;
  }
  return size;
}

}  // namespace detail

}  // namespace topostat
