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

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace topostat {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Points of a common dimension, stored row-major.
class PointCloud {
 public:
  PointCloud() = default;
  /// Throws invalid-input on an empty cloud, a ragged coordinate array or a
  /// non-finite coordinate.
  PointCloud(std::size_t dim, std::vector<double> coords);

  static PointCloud from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t size() const noexcept { return dim_ == 0 ? 0 : coords_.size() / dim_; }
  std::size_t dim() const noexcept { return dim_; }
  std::span<const double> point(std::size_t i) const {
    return {coords_.data() + i * dim_, dim_};
  }
  const std::vector<double>& coords() const noexcept { return coords_; }

  double distance(std::size_t i, std::size_t j) const;

 private:
  std::size_t dim_ = 0;
  std::vector<double> coords_;
};

enum class ComplexKind { Rips, Cubical };

/// One cell of an explicitly specified filtration. Boundary entries are
/// positions of earlier cells in the same filtration.
struct CellSpec {
  int dim = 0;
  double value = 0.0;
  std::vector<std::uint32_t> boundary;
};

/// Cells in filtration order with compressed boundary lists. Cell ids are
/// positions in the order.
class Filtration {
 public:
  Filtration() = default;
  Filtration(ComplexKind kind, const std::vector<CellSpec>& cells);
  Filtration(ComplexKind kind, std::vector<std::int8_t> dims, std::vector<double> values,
             std::vector<std::uint32_t> offsets, std::vector<std::uint32_t> faces,
             int declared_top_dim = -1);

  ComplexKind kind() const noexcept { return kind_; }
  std::size_t size() const noexcept { return dims_.size(); }
  int dim(std::size_t i) const { return dims_[i]; }
  double value(std::size_t i) const { return values_[i]; }
  std::span<const std::uint32_t> boundary(std::size_t i) const {
    return {faces_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
  }
  int top_dim() const noexcept { return top_dim_; }

  /// Highest homology dimension the complex determines. A Rips complex is a
  /// truncated skeleton, so its top dimension has no cofaces to kill classes.
  int homology_limit() const noexcept {
    return kind_ == ComplexKind::Rips ? top_dim_ - 1 : top_dim_;
  }

  std::size_t count(int dim) const;

  /// Throws invalid-filtration when a boundary references a later cell or a
  /// cell of the wrong dimension, when values decrease along the order, or
  /// when a value is not finite.
  void validate() const;

 private:
  ComplexKind kind_ = ComplexKind::Rips;
  int top_dim_ = -1;
  std::vector<std::int8_t> dims_;
  std::vector<double> values_;
  std::vector<std::uint32_t> offsets_{0};
  std::vector<std::uint32_t> faces_;
};

struct Feature {
  int dim = 0;
  double birth = 0.0;
  double death = kInfinity;

  bool essential() const noexcept { return std::isinf(death); }
  double persistence() const noexcept { return death - birth; }
  friend bool operator==(const Feature&, const Feature&) = default;
};

class PersistenceDiagram {
 public:
  PersistenceDiagram() = default;
  /// Throws invalid-input when some death precedes its birth or a birth is
  /// not finite.
  explicit PersistenceDiagram(std::vector<Feature> features);

  void add(const Feature& f);

  const std::vector<Feature>& features() const noexcept { return features_; }
  std::size_t size() const noexcept { return features_.size(); }
  bool empty() const noexcept { return features_.empty(); }
  auto begin() const noexcept { return features_.begin(); }
  auto end() const noexcept { return features_.end(); }

  std::vector<Feature> of_dim(int dim) const;
  std::size_t count(int dim) const;
  /// Largest finite death in `dim`, or -inf when there is none.
  double max_finite_death(int dim) const;

 private:
  std::vector<Feature> features_;
};

/// Vietoris-Rips filtration: every simplex with at most max_dim + 1 vertices
/// whose pairwise distances are <= max_scale, valued by its diameter. Ordered
/// by (value, dimension, lexicographic vertex ids); vertex i is cell i.
Filtration build_rips(const PointCloud& cloud, int max_dim, double max_scale);

/// Persistence pairs over Z/2 for dimensions 0..max_dim (clamped to the
/// filtration's homology limit). Zero-persistence pairs are not emitted;
/// classes that never die carry death = +inf.
PersistenceDiagram compute_persistence(const Filtration& filtration, int max_dim);

/// Number of dimension-k features alive at t (birth <= t < death).
int betti_at(const PersistenceDiagram& diagram, int k, double t);

/// Real values on a regular grid, x fastest.
struct RealGrid {
  std::vector<std::size_t> extents;
  std::vector<double> values;

  std::size_t size() const noexcept { return values.size(); }
};

/// Binary voxel grid, x fastest. phase[i] != 0 marks grain.
struct BinaryVolume {
  std::vector<std::size_t> extents;
  std::vector<std::uint8_t> phase;
  double resolution = 1.0;

  std::size_t size() const noexcept { return phase.size(); }
  /// Throws invalid-input on empty or inconsistent extents.
  void validate() const;
  double porosity() const;
};

/// Signed Euclidean distance transform: distance between voxel centers to the
/// nearest voxel of the opposite phase, negative in grain and positive in
/// pore. Exact. Throws degenerate-volume when only one phase is present.
RealGrid sedt(const BinaryVolume& volume);

/// Sublevel cubical filtration with voxels as vertices (V-construction). Each
/// edge, square and cube takes the maximum of its vertex values. Ordered by
/// (value, dimension, construction index).
Filtration build_cubical(const RealGrid& grid);

}  // namespace topostat
