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
#include <string>

#include "topostat/error.hpp"
#include "topostat/ph.hpp"

namespace topostat {

PointCloud::PointCloud(std::size_t dim, std::vector<double> coords)
    : dim_(dim), coords_(std::move(coords)) {
  if (dim_ == 0 || coords_.empty()) fail(ErrorCode::InvalidInput, "point cloud is empty");
  if (coords_.size() % dim_ != 0)
    fail(ErrorCode::InvalidInput, "coordinate count is not a multiple of the dimension");
  for (double c : coords_)
    if (!std::isfinite(c)) fail(ErrorCode::InvalidInput, "non-finite coordinate in point cloud");
}

PointCloud PointCloud::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) fail(ErrorCode::InvalidInput, "point cloud is empty");
  const std::size_t dim = rows.front().size();
  std::vector<double> coords;
  coords.reserve(rows.size() * dim);
  for (const auto& row : rows) {
    if (row.size() != dim)
      fail(ErrorCode::InvalidInput, "points have differing dimensions");
    coords.insert(coords.end(), row.begin(), row.end());
  }
  return PointCloud(dim, std::move(coords));
}

double PointCloud::distance(std::size_t i, std::size_t j) const {
  const double* a = coords_.data() + i * dim_;
  const double* b = coords_.data() + j * dim_;
  double sum = 0.0;
  for (std::size_t k = 0; k < dim_; ++k) {
    const double d = a[k] - b[k];
    sum += d * d;
  }
  return std::sqrt(sum);
}

Filtration::Filtration(ComplexKind kind, const std::vector<CellSpec>& cells) : kind_(kind) {
  dims_.reserve(cells.size());
  values_.reserve(cells.size());
  offsets_.reserve(cells.size() + 1);
  for (const auto& c : cells) {
    if (c.dim < 0 || c.dim > 127) fail(ErrorCode::InvalidFiltration, "cell dimension out of range");
    dims_.push_back(static_cast<std::int8_t>(c.dim));
    values_.push_back(c.value);
    faces_.insert(faces_.end(), c.boundary.begin(), c.boundary.end());
    offsets_.push_back(static_cast<std::uint32_t>(faces_.size()));
    top_dim_ = std::max(top_dim_, c.dim);
  }
}

Filtration::Filtration(ComplexKind kind, std::vector<std::int8_t> dims, std::vector<double> values,
                       std::vector<std::uint32_t> offsets, std::vector<std::uint32_t> faces,
                       int declared_top_dim)
    : kind_(kind),
      top_dim_(declared_top_dim),
      dims_(std::move(dims)),
      values_(std::move(values)),
      offsets_(std::move(offsets)),
      faces_(std::move(faces)) {
  if (values_.size() != dims_.size() || offsets_.size() != dims_.size() + 1 ||
      offsets_.back() != faces_.size())
    fail(ErrorCode::InvalidFiltration, "inconsistent filtration arrays");
  for (auto d : dims_) top_dim_ = std::max<int>(top_dim_, d);
}

std::size_t Filtration::count(int dim) const {
  return static_cast<std::size_t>(std::count(dims_.begin(), dims_.end(), dim));
}

void Filtration::validate() const {
  for (std::size_t i = 0; i < size(); ++i) {
    if (!std::isfinite(values_[i]))
      fail(ErrorCode::InvalidFiltration, "cell " + std::to_string(i) + " has a non-finite value");
    if (i > 0 && values_[i] < values_[i - 1])
      fail(ErrorCode::InvalidFiltration,
           "filtration values decrease at cell " + std::to_string(i));
    const auto faces = boundary(i);
    if (dims_[i] == 0 && !faces.empty())
      fail(ErrorCode::InvalidFiltration, "vertex " + std::to_string(i) + " has a boundary");
    if (dims_[i] == 1 && (faces.size() != 2 || faces[0] == faces[1]))
      fail(ErrorCode::InvalidFiltration,
           "edge " + std::to_string(i) + " does not have two distinct vertices");
    for (auto f : faces) {
      if (f >= i)
        fail(ErrorCode::InvalidFiltration,
             "cell " + std::to_string(i) + " references a face that does not precede it");
      if (dims_[f] != dims_[i] - 1)
        fail(ErrorCode::InvalidFiltration,
             "cell " + std::to_string(i) + " has a face of the wrong dimension");
    }
  }
}

PersistenceDiagram::PersistenceDiagram(std::vector<Feature> features) {
  features_.reserve(features.size());
  for (const auto& f : features) add(f);
}

void PersistenceDiagram::add(const Feature& f) {
  if (f.dim < 0) fail(ErrorCode::InvalidInput, "negative feature dimension");
  if (!std::isfinite(f.birth)) fail(ErrorCode::InvalidInput, "feature birth is not finite");
  if (std::isnan(f.death) || f.death < f.birth)
    fail(ErrorCode::InvalidInput, "feature death precedes its birth");
  features_.push_back(f);
}

std::vector<Feature> PersistenceDiagram::of_dim(int dim) const {
  std::vector<Feature> out;
  for (const auto& f : features_)
    if (f.dim == dim) out.push_back(f);
  return out;
}

std::size_t PersistenceDiagram::count(int dim) const {
  return static_cast<std::size_t>(
      std::count_if(features_.begin(), features_.end(), [dim](const Feature& f) { return f.dim == dim; }));
}

double PersistenceDiagram::max_finite_death(int dim) const {
  double m = -kInfinity;
  for (const auto& f : features_)
    if (f.dim == dim && !f.essential()) m = std::max(m, f.death);
  return m;
}

int betti_at(const PersistenceDiagram& diagram, int k, double t) {
  int n = 0;
  for (const auto& f : diagram)
    if (f.dim == k && f.birth <= t && t < f.death) ++n;
  return n;
}

}  // namespace topostat
