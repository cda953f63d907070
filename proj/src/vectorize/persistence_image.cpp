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
#include <numeric>
#include <string>

#include "topostat/error.hpp"
#include "topostat/vectorize.hpp"

namespace topostat {

void GridSpec::validate() const {
  if (!(std::isfinite(b_min) && std::isfinite(b_max) && b_max > b_min))
    fail(ErrorCode::InvalidInput, "grid birth range is empty or not finite");
  if (!(std::isfinite(p_min) && std::isfinite(p_max) && p_max > p_min))
    fail(ErrorCode::InvalidInput, "grid persistence range is empty or not finite");
  if (nx < 2 || ny < 2) fail(ErrorCode::InvalidInput, "grid resolution must be at least 2 in each axis");
}

GridSpec GridSpec::fit(const std::vector<BirthPersistence>& pooled, std::size_t nx, std::size_t ny) {
  double lo = 0.0, hi = 0.0, top = 0.0;
  for (const auto& p : pooled) {
    lo = std::min(lo, p.birth);
    hi = std::max(hi, p.birth);
    top = std::max(top, p.persistence);
  }
  if (hi <= lo) hi = lo + 1.0;
  if (top <= 0.0) top = 1.0;
  GridSpec g{lo, hi, 0.0, top, nx, ny};
  const double pad = 3.0 * g.default_bandwidth();
  g.b_min -= pad;
  g.b_max += pad;
  g.p_max += pad;
  return g;
}

std::string_view to_string(WeightKind kind) noexcept {
  switch (kind) {
    case WeightKind::Constant: return "constant";
    case WeightKind::SoftArctan: return "soft_arctan";
    case WeightKind::HardArctan: return "hard_arctan";
    case WeightKind::Linear: return "linear";
  }
  return "constant";
}

std::optional<WeightKind> parse_weight(std::string_view name) noexcept {
  if (name == "constant") return WeightKind::Constant;
  if (name == "soft_arctan" || name == "soft") return WeightKind::SoftArctan;
  if (name == "hard_arctan" || name == "hard") return WeightKind::HardArctan;
  if (name == "linear") return WeightKind::Linear;
  return std::nullopt;
}

double PersistenceImage::sum() const { return std::accumulate(values.begin(), values.end(), 0.0); }

bool PersistenceImage::aligned_with(const PersistenceImage& other) const {
  return grid == other.grid && dim == other.dim && kind == other.kind && weight == other.weight &&
         bandwidth == other.bandwidth;
}

std::vector<BirthPersistence> transform_diagram(const PersistenceDiagram& diagram, int dim, double inf_cap) {
  if (!std::isfinite(inf_cap)) fail(ErrorCode::InvalidCap, "infinite-death cap must be finite");
  std::vector<BirthPersistence> out;
  for (const auto& f : diagram) {
    if (f.dim != dim) continue;
    if (!f.essential() && f.death > inf_cap)
      fail(ErrorCode::InvalidCap, "infinite-death cap " + std::to_string(inf_cap) +
                                      " is below a finite death " + std::to_string(f.death));
    const double death = f.essential() ? std::max(inf_cap, f.birth) : f.death;
    out.push_back({f.birth, death - f.birth});
  }
  return out;
}

double weight_value(WeightKind kind, double /*u*/, double v) {
  if (!(v >= 0.0)) fail(ErrorCode::InvalidPersistence, "persistence must be non-negative");
  switch (kind) {
    case WeightKind::Constant: return 1.0;
    case WeightKind::SoftArctan: return std::atan(0.5 * std::sqrt(v));
    case WeightKind::HardArctan: return std::atan(v);
    case WeightKind::Linear: return v;
  }
  return 1.0;
}

namespace {

// P(a < Z <= b) for standard normal Z, accurate in both tails.
double normal_mass(double a, double b) {
  constexpr double inv_sqrt2 = 0.70710678118654752440;
  if (a >= 0.0) return 0.5 * (std::erfc(a * inv_sqrt2) - std::erfc(b * inv_sqrt2));
  if (b <= 0.0) return 0.5 * (std::erfc(-b * inv_sqrt2) - std::erfc(-a * inv_sqrt2));
  return 1.0 - 0.5 * (std::erfc(-a * inv_sqrt2) + std::erfc(b * inv_sqrt2));
}

void axis_masses(double center, double h, double lo, double hi, std::size_t n, std::vector<double>& out) {
  out.resize(n);
  double prev = (lo - center) / h;
  for (std::size_t i = 0; i < n; ++i) {
    const double edge = lo + (hi - lo) * double(i + 1) / double(n);
    const double next = (edge - center) / h;
    out[i] = normal_mass(prev, next);
    prev = next;
  }
}

}  // namespace

PersistenceImage persistence_image(const std::vector<BirthPersistence>& points, const GridSpec& grid,
                                   WeightKind weight, double h) {
  grid.validate();
  if (!(h > 0.0) || !std::isfinite(h)) fail(ErrorCode::InvalidInput, "bandwidth must be positive");
  PersistenceImage img;
  img.grid = grid;
  img.weight = weight;
  img.bandwidth = h;
  img.values.assign(grid.nx * grid.ny, 0.0);

  std::vector<double> mx, my;
  for (const auto& p : points) {
    const double w = weight_value(weight, p.birth, p.persistence);
    if (w == 0.0) continue;
    axis_masses(p.birth, h, grid.b_min, grid.b_max, grid.nx, mx);
    axis_masses(p.persistence, h, grid.p_min, grid.p_max, grid.ny, my);
    for (std::size_t j = 0; j < grid.ny; ++j) {
      const double wy = w * my[j];
      if (wy == 0.0) continue;
      double* row = img.values.data() + j * grid.nx;
      for (std::size_t i = 0; i < grid.nx; ++i) row[i] += wy * mx[i];
    }
  }
  return img;
}

PersistenceImage binning_vectorize(const std::vector<BirthPersistence>& points, const GridSpec& grid) {
  grid.validate();
  PersistenceImage img;
  img.grid = grid;
  img.kind = ImageKind::Binning;
  img.values.assign(grid.nx * grid.ny, 0.0);

  // Pixel k covers (edge_k, edge_{k+1}]; the first pixel also owns its lower
  // edge. A point on a shared edge therefore lands in the lower-index pixel.
  auto bin = [](double x, double lo, double hi, std::size_t n) -> std::optional<std::size_t> {
    if (!(x >= lo && x <= hi)) return std::nullopt;
    auto edge = [&](std::size_t k) { return lo + (hi - lo) * double(k) / double(n); };
    auto k = static_cast<std::size_t>(std::ceil((x - lo) / (hi - lo) * double(n)));
    k = std::clamp<std::size_t>(k, 1, n) - 1;
    while (k > 0 && x <= edge(k)) --k;
    while (k + 1 < n && x > edge(k + 1)) ++k;
    return k;
  };

  for (const auto& p : points) {
    const auto i = bin(p.birth, grid.b_min, grid.b_max, grid.nx);
    const auto j = bin(p.persistence, grid.p_min, grid.p_max, grid.ny);
    if (!i || !j) {
      ++img.dropped;
      continue;
    }
    img.at(*i, *j) += 1.0;
  }
  return img;
}

std::vector<bool> corner_mask(const GridSpec& grid, double cap, CornerRule rule) {
  grid.validate();
  if (rule == CornerRule::AntiDiagonal && !(cap > 0.0))
    fail(ErrorCode::InvalidInput, "corner cap must be positive");
  std::vector<bool> mask(grid.nx * grid.ny, false);
  for (std::size_t j = 0; j < grid.ny; ++j)
    for (std::size_t i = 0; i < grid.nx; ++i) {
      const double b = grid.birth_center(i), p = grid.pers_center(j);
      mask[j * grid.nx + i] = rule == CornerRule::AntiDiagonal ? b + p > cap : b < p;
    }
  return mask;
}

}  // namespace topostat
