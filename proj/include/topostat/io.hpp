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

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "topostat/inference.hpp"
#include "topostat/ph.hpp"
#include "topostat/vectorize.hpp"

namespace topostat::io {

/// Shortest decimal that parses back to the same double; "inf"/"-inf"/"nan"
/// for non-finite values.
std::string format_double(double v);
/// Inverse of format_double. Throws invalid-input on malformed text.
double parse_double(std::string_view text);

/// One point per row, comma separated, optional header row.
PointCloud read_point_cloud_csv(const std::filesystem::path& path, bool skip_header = false);
void write_point_cloud_csv(const std::filesystem::path& path, const PointCloud& cloud);

/// Header `dim,birth,death`; essential classes use `inf`.
std::string diagram_to_csv(const PersistenceDiagram& diagram);
PersistenceDiagram diagram_from_csv(std::string_view text);
PersistenceDiagram read_diagram_csv(const std::filesystem::path& path);
void write_diagram_csv(const std::filesystem::path& path, const PersistenceDiagram& diagram);

/// PGM/P5 (2D; values >= 128 are grain) or raw bytes with a JSON sidecar at
/// `<path>.json` holding {"extents": [...], "order": "x-fastest"}; nonzero
/// bytes are grain. Chosen by the `.pgm` extension.
BinaryVolume read_volume(const std::filesystem::path& path);
/// Grain written as 255, pore as 0.
void write_volume_pgm(const std::filesystem::path& path, const BinaryVolume& volume);
void write_volume_raw(const std::filesystem::path& path, const BinaryVolume& volume);

/// Sidecar path used for images and raw volumes.
std::filesystem::path sidecar_path(const std::filesystem::path& path);

/// CSV matrix of ny rows by nx columns (row 0 = highest persistence) plus a
/// JSON sidecar with the grid and vectorization metadata.
void write_image(const std::filesystem::path& path, const PersistenceImage& image);
PersistenceImage read_image(const std::filesystem::path& path);

/// Plain CSV matrix reader; returns rows top to bottom.
std::vector<std::vector<double>> read_matrix_csv(const std::filesystem::path& path);

/// Min-max scaled 8-bit P5 rendering of an nx by ny grid given x fastest
/// with j = 0 at the bottom; the top output row is j = ny - 1.
void write_pgm_render(const std::filesystem::path& path, const std::vector<double>& values, std::size_t nx,
                      std::size_t ny);

/// Columns ix,iy,status,filter_stat,t,p,q; t, p, q are empty for untested
/// elements.
void write_test_result_csv(const std::filesystem::path& path, const TestResultGrid& result);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, std::string_view text);

}  // namespace topostat::io
