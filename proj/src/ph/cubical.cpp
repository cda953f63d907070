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
#include <bit>
#include <numeric>

#include "topostat/error.hpp"
#include "topostat/ph.hpp"

namespace topostat {

namespace {

constexpr std::uint32_t kAbsent = 0xffffffffu;

struct CubeRef {
  double value;
  std::uint32_t mask;  // axes spanned by the cube
  std::size_t base;    // linear index of the lowest corner
};

}  // namespace

// Cubes are addressed by (axis mask, base voxel). Construction order is
// dimension, then mask, then base voxel; the final order sorts by value and
// dimension with that construction order as the tie-break.
Filtration build_cubical(const RealGrid& grid) {
  const std::size_t ndim = grid.extents.size();
  if (ndim == 0 || ndim > 3 || grid.values.empty())
    fail(ErrorCode::InvalidInput, "cubical grid must be non-empty with 1 to 3 axes");
  std::size_t total = 1;
  for (auto e : grid.extents) {
    if (e == 0) fail(ErrorCode::InvalidInput, "cubical grid has a zero extent");
    total *= e;
  }
  if (total != grid.values.size())
    fail(ErrorCode::InvalidInput, "cubical grid values do not match its extents");
  for (double v : grid.values)
    if (!std::isfinite(v)) fail(ErrorCode::InvalidInput, "cubical grid has a non-finite value");

  std::vector<std::size_t> stride(ndim, 1);
  for (std::size_t a = 1; a < ndim; ++a) stride[a] = stride[a - 1] * grid.extents[a - 1];

  const std::uint32_t masks = 1u << ndim;
  std::vector<std::uint32_t> mask_order(masks);
  std::iota(mask_order.begin(), mask_order.end(), 0u);
  std::stable_sort(mask_order.begin(), mask_order.end(),
                   [](std::uint32_t a, std::uint32_t b) { return std::popcount(a) < std::popcount(b); });

  std::vector<CubeRef> cubes;
  cubes.reserve(total * masks);
  std::vector<std::size_t> coord(ndim);
  for (auto mask : mask_order) {
    for (std::size_t lin = 0; lin < total; ++lin) {
      std::size_t rest = lin;
      bool fits = true;
      for (std::size_t a = 0; a < ndim; ++a) {
        coord[a] = rest % grid.extents[a];
        rest /= grid.extents[a];
        if ((mask >> a & 1u) && coord[a] + 1 >= grid.extents[a]) fits = false;
      }
      if (!fits) continue;
      double v = grid.values[lin];
      // Every corner is base + sum of strides over a subset of the mask.
      for (std::uint32_t sub = mask; sub != 0; sub = (sub - 1) & mask) {
        std::size_t offset = 0;
        for (std::size_t a = 0; a < ndim; ++a)
          if (sub >> a & 1u) offset += stride[a];
        v = std::max(v, grid.values[lin + offset]);
      }
      cubes.push_back({v, mask, lin});
    }
  }

  std::stable_sort(cubes.begin(), cubes.end(), [](const CubeRef& x, const CubeRef& y) {
    if (x.value != y.value) return x.value < y.value;
    return std::popcount(x.mask) < std::popcount(y.mask);
  });

  std::vector<std::uint32_t> position(total * masks, kAbsent);
  std::vector<std::int8_t> dims;
  std::vector<double> values;
  std::vector<std::uint32_t> offsets{0};
  std::vector<std::uint32_t> faces;
  dims.reserve(cubes.size());
  values.reserve(cubes.size());
  offsets.reserve(cubes.size() + 1);
  faces.reserve(cubes.size() * 3);

  for (std::size_t idx = 0; idx < cubes.size(); ++idx) {
    const auto& c = cubes[idx];
    const auto begin = faces.size();
    for (std::size_t a = 0; a < ndim; ++a) {
      if (!(c.mask >> a & 1u)) continue;
      const std::uint32_t face_mask = c.mask & ~(1u << a);
      faces.push_back(position[face_mask * total + c.base]);
      faces.push_back(position[face_mask * total + c.base + stride[a]]);
    }
    std::sort(faces.begin() + static_cast<std::ptrdiff_t>(begin), faces.end());
    position[c.mask * total + c.base] = static_cast<std::uint32_t>(idx);
    dims.push_back(static_cast<std::int8_t>(std::popcount(c.mask)));
    values.push_back(c.value);
    offsets.push_back(static_cast<std::uint32_t>(faces.size()));
  }

  return Filtration(ComplexKind::Cubical, std::move(dims), std::move(values), std::move(offsets),
                    std::move(faces));
}

}  // namespace topostat
