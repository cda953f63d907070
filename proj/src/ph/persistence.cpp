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
#include <numeric>

#include "topostat/error.hpp"
#include "topostat/ph.hpp"

namespace topostat {

namespace {

using Column = std::vector<std::uint32_t>;

// a <- a xor b for columns sorted ascending.
void add_column(Column& a, const Column& b, Column& scratch) {
  scratch.clear();
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(scratch));
  a.swap(scratch);
}

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0u); }

  std::uint32_t find(std::uint32_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void attach(std::uint32_t child, std::uint32_t root) { parent_[child] = root; }

 private:
  std::vector<std::uint32_t> parent_;
};

void emit(PersistenceDiagram& out, int dim, double birth, double death) {
  if (death > birth) out.add({dim, birth, death});
}

}  // namespace

// Dimension 0 is paired with a union-find sweep (elder rule). Higher
// dimensions use the persistent cohomology reduction: coboundary columns are
// reduced in reverse filtration order with the smallest coface as pivot, and
// cells already known to be deaths of the previous dimension are cleared.
PersistenceDiagram compute_persistence(const Filtration& f, int max_dim) {
  f.validate();
  PersistenceDiagram diagram;
  const int report = std::min(max_dim, f.homology_limit());
  if (report < 0 || f.size() == 0) return diagram;

  const std::size_t n = f.size();
  std::vector<std::uint8_t> is_death(n, 0);

  // Dimension 0. Roots are the oldest vertex of their component.
  {
    UnionFind uf(n);
    for (std::uint32_t i = 0; i < n; ++i) {
      if (f.dim(i) != 1) continue;
      const auto faces = f.boundary(i);
      const auto ra = uf.find(faces[0]);
      const auto rb = uf.find(faces[1]);
      if (ra == rb) continue;
      const auto older = std::min(ra, rb);
      const auto younger = std::max(ra, rb);
      uf.attach(younger, older);
      is_death[i] = 1;
      emit(diagram, 0, f.value(younger), f.value(i));
    }
    for (std::uint32_t i = 0; i < n; ++i)
      if (f.dim(i) == 0 && uf.find(i) == i) diagram.add({0, f.value(i), kInfinity});
  }
  if (report == 0) return diagram;

  // Coboundaries of cells of dimension 1..report, ascending.
  std::vector<std::uint32_t> cob_offsets(n + 1, 0);
  for (std::uint32_t i = 0; i < n; ++i)
    if (f.dim(i) >= 2 && f.dim(i) <= report + 1)
      for (auto face : f.boundary(i)) ++cob_offsets[face + 1];
  std::partial_sum(cob_offsets.begin(), cob_offsets.end(), cob_offsets.begin());
  std::vector<std::uint32_t> cofaces(cob_offsets.back());
  {
    std::vector<std::uint32_t> fill(cob_offsets.begin(), cob_offsets.end() - 1);
    for (std::uint32_t i = 0; i < n; ++i)
      if (f.dim(i) >= 2 && f.dim(i) <= report + 1)
        for (auto face : f.boundary(i)) cofaces[fill[face]++] = i;
  }

  std::vector<std::int64_t> pivot_owner(n, -1);
  std::vector<Column> reduced(n);
  Column work, scratch;

  for (int d = 1; d <= report; ++d) {
    for (std::size_t k = n; k-- > 0;) {
      if (f.dim(k) != d || is_death[k]) continue;
      work.assign(cofaces.begin() + cob_offsets[k], cofaces.begin() + cob_offsets[k + 1]);
      while (!work.empty()) {
        const auto owner = pivot_owner[work.front()];
        if (owner < 0) break;
        add_column(work, reduced[owner], scratch);
      }
      if (work.empty()) {
        diagram.add({d, f.value(k), kInfinity});
        continue;
      }
      const auto pivot = work.front();
      pivot_owner[pivot] = static_cast<std::int64_t>(k);
      is_death[pivot] = 1;
      emit(diagram, d, f.value(k), f.value(pivot));
      reduced[k] = work;
    }
  }
  return diagram;
}

}  // namespace topostat
