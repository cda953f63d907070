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
#include <limits>

#include "topostat/error.hpp"
#include "topostat/ph.hpp"

namespace topostat {

void BinaryVolume::validate() const {
  if (extents.empty() || extents.size() > 3)
    fail(ErrorCode::InvalidInput, "volume must have 1 to 3 axes");
  std::size_t total = 1;
  for (auto e : extents) {
    if (e == 0) fail(ErrorCode::InvalidInput, "volume has a zero extent");
    total *= e;
  }
  if (total != phase.size()) fail(ErrorCode::InvalidInput, "phase array does not match the extents");
}

double BinaryVolume::porosity() const {
  if (phase.empty()) return 0.0;
  const auto pore = std::count(phase.begin(), phase.end(), std::uint8_t{0});
  return static_cast<double>(pore) / static_cast<double>(phase.size());
}

namespace {

constexpr double kFar = std::numeric_limits<double>::infinity();

// Squared distance transform of one line in place (lower envelope of
// parabolas). Sites with infinite value do not contribute.
void transform_line(std::vector<double>& f, std::vector<double>& out, std::vector<std::size_t>& sites,
                    std::vector<double>& bounds) {
  const std::size_t n = f.size();
  sites.clear();
  bounds.clear();
  for (std::size_t q = 0; q < n; ++q) {
    if (f[q] == kFar) continue;
    const double fq = f[q] + double(q) * double(q);
    while (!sites.empty()) {
      const std::size_t v = sites.back();
      const double s = (fq - (f[v] + double(v) * double(v))) / (2.0 * double(q) - 2.0 * double(v));
      if (s <= bounds.back()) {
        sites.pop_back();
        bounds.pop_back();
      } else {
        bounds.push_back(s);
        break;
      }
    }
    if (sites.empty()) bounds.push_back(-kFar);
    sites.push_back(q);
  }
  if (sites.empty()) {
    std::fill(out.begin(), out.end(), kFar);
    return;
  }
  // bounds[k] is where site k starts dominating.
  std::size_t k = 0;
  for (std::size_t q = 0; q < n; ++q) {
    while (k + 1 < sites.size() && bounds[k + 1] < double(q)) ++k;
    const double d = double(q) - double(sites[k]);
    out[q] = f[sites[k]] + d * d;
  }
}

// Squared Euclidean distance from every voxel to the nearest voxel where
// `site` holds, one separable pass per axis.
std::vector<double> squared_edt(const std::vector<std::size_t>& extents,
                                const std::vector<std::uint8_t>& phase, std::uint8_t site_phase) {
  const std::size_t total = phase.size();
  std::vector<double> g(total);
  for (std::size_t i = 0; i < total; ++i) g[i] = (phase[i] != 0) == (site_phase != 0) ? 0.0 : kFar;

  std::vector<double> line, out;
  std::vector<std::size_t> sites;
  std::vector<double> bounds;
  std::size_t stride = 1;
  for (std::size_t axis = 0; axis < extents.size(); ++axis) {
    const std::size_t len = extents[axis];
    line.resize(len);
    out.resize(len);
    const std::size_t lines = total / len;
    for (std::size_t l = 0; l < lines; ++l) {
      const std::size_t start = (l / stride) * stride * len + (l % stride);
      for (std::size_t q = 0; q < len; ++q) line[q] = g[start + q * stride];
      transform_line(line, out, sites, bounds);
      for (std::size_t q = 0; q < len; ++q) g[start + q * stride] = out[q];
    }
    stride *= len;
  }
  return g;
}

}  // namespace

RealGrid sedt(const BinaryVolume& volume) {
  volume.validate();
  const auto grains = std::count_if(volume.phase.begin(), volume.phase.end(),
                                    [](std::uint8_t p) { return p != 0; });
  if (grains == 0 || static_cast<std::size_t>(grains) == volume.size())
    fail(ErrorCode::DegenerateVolume, "volume contains a single phase; signed distance is undefined");

  const auto to_grain = squared_edt(volume.extents, volume.phase, 1);
  const auto to_pore = squared_edt(volume.extents, volume.phase, 0);

  RealGrid out{volume.extents, std::vector<double>(volume.size())};
  for (std::size_t i = 0; i < volume.size(); ++i)
    out.values[i] = volume.phase[i] != 0 ? -std::sqrt(to_pore[i]) : std::sqrt(to_grain[i]);
  return out;
}

}  // namespace topostat
