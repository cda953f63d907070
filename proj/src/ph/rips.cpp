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
#include <array>
#include <numeric>
#include <unordered_map>

#include "topostat/error.hpp"
#include "topostat/ph.hpp"

namespace topostat {

namespace {

constexpr int kMaxRipsDim = 3;

struct Simplex {
  double value;
  int dim;
  std::array<std::uint32_t, kMaxRipsDim + 1> vertices;
};

// Combinatorial number system index of a sorted vertex set; unique among
// simplices of one dimension.
class SimplexIndexer {
 public:
  SimplexIndexer(std::size_t n, int max_k) : table_(max_k + 2, std::vector<std::uint64_t>(n + 1, 0)) {
    for (std::size_t v = 0; v <= n; ++v) {
      table_[0][v] = 1;
      for (int k = 1; k <= max_k + 1; ++k)
        table_[k][v] = v == 0 ? 0 : table_[k][v - 1] + table_[k - 1][v - 1];
    }
  }

  std::uint64_t key(const std::uint32_t* vertices, int count) const {
    std::uint64_t k = 0;
    for (int r = 0; r < count; ++r) k += table_[r + 1][vertices[r]];
    return k;
  }

 private:
  std::vector<std::vector<std::uint64_t>> table_;
};

}  // namespace

Filtration build_rips(const PointCloud& cloud, int max_dim, double max_scale) {
  if (cloud.size() == 0) fail(ErrorCode::InvalidInput, "point cloud is empty");
  if (max_dim < 0 || max_dim > kMaxRipsDim)
    fail(ErrorCode::InvalidInput, "rips max_dim must lie in [0, 3]");
  if (!(max_scale > 0.0)) fail(ErrorCode::InvalidInput, "rips max_scale must be positive");

  const std::size_t n = cloud.size();
  std::vector<double> dist(n * n, 0.0);
  std::vector<std::vector<std::uint32_t>> higher(n);  // neighbours with larger index
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = cloud.distance(i, j);
      dist[i * n + j] = dist[j * n + i] = d;
      if (d <= max_scale) higher[i].push_back(static_cast<std::uint32_t>(j));
    }
  auto adjacent = [&](std::uint32_t a, std::uint32_t b) {
    return dist[std::size_t(a) * n + b] <= max_scale;
  };

  // Enumerated by dimension, lexicographically within a dimension, so a
  // stable sort on (value, dim) leaves lexicographic tie-breaking in place.
  std::vector<Simplex> simplices;
  for (std::uint32_t v = 0; v < n; ++v) simplices.push_back({0.0, 0, {v, 0, 0, 0}});
  if (max_dim >= 1)
    for (std::uint32_t a = 0; a < n; ++a)
      for (auto b : higher[a]) simplices.push_back({dist[std::size_t(a) * n + b], 1, {a, b, 0, 0}});
  if (max_dim >= 2)
    for (std::uint32_t a = 0; a < n; ++a)
      for (std::size_t ib = 0; ib < higher[a].size(); ++ib) {
        const auto b = higher[a][ib];
        for (std::size_t ic = ib + 1; ic < higher[a].size(); ++ic) {
          const auto c = higher[a][ic];
          if (!adjacent(b, c)) continue;
          const double v = std::max({dist[std::size_t(a) * n + b], dist[std::size_t(a) * n + c],
                                     dist[std::size_t(b) * n + c]});
          simplices.push_back({v, 2, {a, b, c, 0}});
        }
      }
  if (max_dim >= 3)
    for (std::uint32_t a = 0; a < n; ++a) {
      const auto& nb = higher[a];
      for (std::size_t ib = 0; ib < nb.size(); ++ib)
        for (std::size_t ic = ib + 1; ic < nb.size(); ++ic) {
          if (!adjacent(nb[ib], nb[ic])) continue;
          for (std::size_t id = ic + 1; id < nb.size(); ++id) {
            const auto b = nb[ib], c = nb[ic], d = nb[id];
            if (!adjacent(b, d) || !adjacent(c, d)) continue;
            const double v = std::max(
                {dist[std::size_t(a) * n + b], dist[std::size_t(a) * n + c], dist[std::size_t(a) * n + d],
                 dist[std::size_t(b) * n + c], dist[std::size_t(b) * n + d], dist[std::size_t(c) * n + d]});
            simplices.push_back({v, 3, {a, b, c, d}});
          }
        }
    }

  std::stable_sort(simplices.begin(), simplices.end(), [](const Simplex& x, const Simplex& y) {
    if (x.value != y.value) return x.value < y.value;
    return x.dim < y.dim;
  });

  const SimplexIndexer indexer(n, max_dim);
  std::vector<std::unordered_map<std::uint64_t, std::uint32_t>> position(max_dim + 1);
  std::vector<std::int8_t> dims;
  std::vector<double> values;
  std::vector<std::uint32_t> offsets{0};
  std::vector<std::uint32_t> faces;
  dims.reserve(simplices.size());
  values.reserve(simplices.size());
  offsets.reserve(simplices.size() + 1);

  for (std::size_t idx = 0; idx < simplices.size(); ++idx) {
    const auto& s = simplices[idx];
    const int count = s.dim + 1;
    if (s.dim > 0) {
      std::array<std::uint32_t, kMaxRipsDim> facet{};
      for (int drop = 0; drop < count; ++drop) {
        int w = 0;
        for (int r = 0; r < count; ++r)
          if (r != drop) facet[w++] = s.vertices[r];
        faces.push_back(position[s.dim - 1].at(indexer.key(facet.data(), s.dim)));
      }
      std::sort(faces.end() - count, faces.end());
    }
    position[s.dim].emplace(indexer.key(s.vertices.data(), count), static_cast<std::uint32_t>(idx));
    dims.push_back(static_cast<std::int8_t>(s.dim));
    values.push_back(s.value);
    offsets.push_back(static_cast<std::uint32_t>(faces.size()));
  }

  return Filtration(ComplexKind::Rips, std::move(dims), std::move(values), std::move(offsets),
                    std::move(faces), max_dim);
}

}  // namespace topostat
