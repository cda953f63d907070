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
#include <numbers>
#include <random>

#include "topostat/error.hpp"
#include "topostat/parallel.hpp"
#include "topostat/simulate.hpp"

namespace topostat {

ShapeSpec ShapeSpec::one_circle(double r, std::size_t n, double sigma) {
  return {ShapeKind::OneCircle, {r}, n, sigma};
}

ShapeSpec ShapeSpec::two_circles(double r1, double r2, std::size_t n, double sigma) {
  return {ShapeKind::TwoCircles, {r1, r2}, n, sigma};
}

void ShapeSpec::validate() const {
  const std::size_t want = kind == ShapeKind::OneCircle ? 1 : 2;
  if (radii.size() != want) fail(ErrorCode::InvalidInput, "shape needs one radius per circle");
  for (double r : radii)
    if (!(r > 0.0) || !std::isfinite(r)) fail(ErrorCode::InvalidInput, "circle radius must be positive");
  if (n_points < 1) fail(ErrorCode::InvalidInput, "shape needs at least one point");
  if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma))
    fail(ErrorCode::InvalidInput, "noise sigma must be non-negative");
}

PointCloud sample_shape(const ShapeSpec& spec, std::uint64_t seed) {
  spec.validate();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::bernoulli_distribution coin(0.5);

  std::vector<double> coords;
  coords.reserve(2 * spec.n_points);
  for (std::size_t k = 0; k < spec.n_points; ++k) {
    const double r = spec.kind == ShapeKind::TwoCircles && coin(rng) ? spec.radii[1] : spec.radii[0];
    const double theta = angle(rng);
    coords.push_back(r * std::cos(theta));
    coords.push_back(r * std::sin(theta));
  }
  if (spec.noise_sigma > 0.0)
    for (auto& c : coords) c += spec.noise_sigma * noise(rng);
  return PointCloud(2, std::move(coords));
}

void RockSpec::validate() const {
  if (seeds < 1) fail(ErrorCode::InvalidInput, "rock spec needs at least one seed point");
  if (!(sigma1 > 0.0) || !(sigma2 > 0.0)) fail(ErrorCode::InvalidInput, "dispersion scales must be positive");
  if (!(threshold > 0.0 && threshold < 1.0)) fail(ErrorCode::InvalidInput, "threshold must lie in (0, 1)");
  if (width < 1 || height < 1) fail(ErrorCode::InvalidInput, "image extents must be positive");
}

RealGrid pseudo_rock_field(const RockSpec& spec, std::uint64_t seed) {
  spec.validate();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(0.0, double(spec.width)), uy(0.0, double(spec.height));
  std::normal_distribution<double> dx(0.0, spec.sigma1), dy(0.0, spec.sigma2);

  std::vector<std::pair<double, double>> points;
  points.reserve(spec.seeds + spec.dispersion);
  for (std::size_t k = 0; k < spec.seeds; ++k) {
    const double x = ux(rng);
    points.emplace_back(x, uy(rng));
  }
  for (std::size_t k = 0; k < spec.dispersion; ++k) {
    std::uniform_int_distribution<std::size_t> pick(0, points.size() - 1);
    const auto base = points[pick(rng)];
    const double ox = dx(rng);
    points.emplace_back(base.first + ox, base.second + dy(rng));
  }

  const std::size_t w = spec.width, h = spec.height;
  std::vector<double> counts(w * h, 0.0);
  for (const auto& [x, y] : points) {
    if (x < 0.0 || y < 0.0) continue;
    const auto ix = static_cast<std::size_t>(x), iy = static_cast<std::size_t>(y);
    if (ix < w && iy < h) counts[iy * w + ix] += 1.0;
  }

  // Separable unit-peak Gaussian, truncated at 4 sigma1.
  const auto radius = static_cast<std::ptrdiff_t>(std::ceil(4.0 * spec.sigma1));
  std::vector<double> kernel(2 * radius + 1);
  for (std::ptrdiff_t d = -radius; d <= radius; ++d)
    kernel[d + radius] = std::exp(-double(d * d) / (2.0 * spec.sigma1 * spec.sigma1));

  std::vector<double> tmp(w * h, 0.0);
  for (std::size_t y = 0; y < h; ++y)
    for (std::size_t x = 0; x < w; ++x) {
      const double c = counts[y * w + x];
      if (c == 0.0) continue;
      const auto lo = std::max<std::ptrdiff_t>(0, std::ptrdiff_t(x) - radius);
      const auto hi = std::min<std::ptrdiff_t>(std::ptrdiff_t(w) - 1, std::ptrdiff_t(x) + radius);
      for (auto t = lo; t <= hi; ++t) tmp[y * w + std::size_t(t)] += c * kernel[t - std::ptrdiff_t(x) + radius];
    }
  RealGrid field{{w, h}, std::vector<double>(w * h, 0.0)};
  for (std::size_t y = 0; y < h; ++y) {
    const auto lo = std::max<std::ptrdiff_t>(0, std::ptrdiff_t(y) - radius);
    const auto hi = std::min<std::ptrdiff_t>(std::ptrdiff_t(h) - 1, std::ptrdiff_t(y) + radius);
    for (auto t = lo; t <= hi; ++t) {
      const double k = kernel[t - std::ptrdiff_t(y) + radius];
      const double* src = tmp.data() + std::size_t(t) * w;
      double* dst = field.values.data() + y * w;
      for (std::size_t x = 0; x < w; ++x) dst[x] += k * src[x];
    }
  }
  return field;
}

BinaryVolume pseudo_rock(const RockSpec& spec, std::uint64_t seed) {
  const auto field = pseudo_rock_field(spec, seed);
  BinaryVolume v;
  v.extents = field.extents;
  v.phase.resize(field.size());
  for (std::size_t i = 0; i < field.size(); ++i) v.phase[i] = field.values[i] >= spec.threshold ? 1 : 0;
  return v;
}

std::vector<BinaryVolume> extract_subregions(const BinaryVolume& volume, std::size_t blocks,
                                             std::optional<std::size_t> block_size) {
  volume.validate();
  if (blocks < 1) fail(ErrorCode::InvalidInput, "need at least one block per axis");
  const std::size_t nd = volume.extents.size();
  std::vector<std::size_t> size(nd);
  for (std::size_t a = 0; a < nd; ++a) {
    size[a] = block_size ? *block_size : volume.extents[a] / blocks;
    if (size[a] == 0 || size[a] * blocks > volume.extents[a])
      fail(ErrorCode::InvalidInput, "subregion blocks do not fit inside the volume");
  }
  std::vector<std::size_t> stride(nd, 1);
  for (std::size_t a = 1; a < nd; ++a) stride[a] = stride[a - 1] * volume.extents[a - 1];

  std::size_t count = 1, cells = 1;
  for (std::size_t a = 0; a < nd; ++a) {
    count *= blocks;
    cells *= size[a];
  }
  std::vector<BinaryVolume> out;
  out.reserve(count);
  std::vector<std::size_t> origin(nd);
  for (std::size_t b = 0; b < count; ++b) {
    std::size_t rest = b;
    for (std::size_t a = 0; a < nd; ++a) {
      origin[a] = (rest % blocks) * size[a];
      rest /= blocks;
    }
    BinaryVolume sub;
    sub.extents = size;
    sub.resolution = volume.resolution;
    sub.phase.resize(cells);
    for (std::size_t c = 0; c < cells; ++c) {
      std::size_t r = c, src = 0;
      for (std::size_t a = 0; a < nd; ++a) {
        src += (origin[a] + r % size[a]) * stride[a];
        r /= size[a];
      }
      sub.phase[c] = volume.phase[src];
    }
    out.push_back(std::move(sub));
  }
  return out;
}

}  // namespace topostat
