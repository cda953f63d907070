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

#include <cstddef>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "topostat/ph.hpp"

namespace topostat {

/// A transformed diagram point: (birth, persistence).
struct BirthPersistence {
  double birth = 0.0;
  double persistence = 0.0;
};

/// Rectangle [b_min, b_max] x [p_min, p_max] split into nx by ny pixels.
struct GridSpec {
  double b_min = 0.0, b_max = 1.0;
  double p_min = 0.0, p_max = 1.0;
  std::size_t nx = 2, ny = 2;

  /// Throws invalid-input unless both ranges are non-empty and nx, ny >= 2.
  void validate() const;

  double pixel_width() const noexcept { return (b_max - b_min) / double(nx); }
  double pixel_height() const noexcept { return (p_max - p_min) / double(ny); }
  double birth_edge(std::size_t i) const noexcept { return b_min + (b_max - b_min) * double(i) / double(nx); }
  double pers_edge(std::size_t j) const noexcept { return p_min + (p_max - p_min) * double(j) / double(ny); }
  double birth_center(std::size_t i) const noexcept { return 0.5 * (birth_edge(i) + birth_edge(i + 1)); }
  double pers_center(std::size_t j) const noexcept { return 0.5 * (pers_edge(j) + pers_edge(j + 1)); }
  /// 1.5 times the pixel width.
  double default_bandwidth() const noexcept { return 1.5 * pixel_width(); }

  /// Range covering every point, padded by three default bandwidths: births
  /// span [min(0, min birth), max birth], persistence spans [0, max pers].
  static GridSpec fit(const std::vector<BirthPersistence>& pooled, std::size_t nx, std::size_t ny);

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

enum class WeightKind { Constant, SoftArctan, HardArctan, Linear };

std::string_view to_string(WeightKind kind) noexcept;
/// Accepts constant, soft_arctan (or soft), hard_arctan (or hard), linear.
std::optional<WeightKind> parse_weight(std::string_view name) noexcept;

enum class ImageKind { Persistence, Binning };

/// Pixel intensities, x (birth) index fastest: values[j * nx + i].
struct PersistenceImage {
  GridSpec grid;
  int dim = 0;
  ImageKind kind = ImageKind::Persistence;
  WeightKind weight = WeightKind::Constant;
  double bandwidth = 0.0;
  double inf_cap = kInfinity;
  std::size_t dropped = 0;
  std::vector<double> values;

  double at(std::size_t i, std::size_t j) const { return values[j * grid.nx + i]; }
  double& at(std::size_t i, std::size_t j) { return values[j * grid.nx + i]; }
  double sum() const;

  /// True when grid, dimension, kind, weight and bandwidth all agree.
  bool aligned_with(const PersistenceImage& other) const;
};

/// (birth, death - birth) of every dim-`dim` feature, with infinite deaths
/// replaced by inf_cap. Throws invalid-cap when inf_cap is not finite or is
/// below a finite death of that dimension.
std::vector<BirthPersistence> transform_diagram(const PersistenceDiagram& diagram, int dim, double inf_cap);

/// Throws invalid-persistence when v < 0.
double weight_value(WeightKind kind, double u, double v);

/// Exact pixel integrals of the weighted Gaussian persistence surface.
/// Throws invalid-input when h <= 0 or the grid is invalid.
PersistenceImage persistence_image(const std::vector<BirthPersistence>& points, const GridSpec& grid,
                                   WeightKind weight, double h);

/// Point counts per pixel. A point on an edge shared by two pixels counts
/// toward the lower-index one; points outside the grid are dropped and counted
/// in `dropped`.
PersistenceImage binning_vectorize(const std::vector<BirthPersistence>& points, const GridSpec& grid);

enum class CornerRule {
  /// Exclude pixels whose centre has birth + persistence > cap.
  AntiDiagonal,
  /// Keep only pixels whose birth centre is >= persistence centre.
  BirthAbovePersistence,
};

/// true marks an excluded pixel; layout matches PersistenceImage::values.
std::vector<bool> corner_mask(const GridSpec& grid, double cap, CornerRule rule = CornerRule::AntiDiagonal);

}  // namespace topostat
