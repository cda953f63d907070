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

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "topostat/error.hpp"
#include "topostat/io.hpp"

namespace topostat::io {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line, char sep = ',') {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(sep, start);
    out.push_back(trim(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::vector<std::string_view> lines_of(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start < text.size()) {
    auto pos = text.find('\n', start);
    if (pos == std::string_view::npos) pos = text.size();
    const auto line = trim(text.substr(start, pos - start));
    if (!line.empty()) out.push_back(line);
    start = pos + 1;
  }
  return out;
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
  text = trim(text);
  if (text == "inf" || text == "+inf" || text == "Inf" || text == "Infinity") return kInfinity;
  if (text == "-inf" || text == "-Inf" || text == "-Infinity") return -kInfinity;
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size())
    fail(ErrorCode::InvalidInput, "cannot parse number '" + std::string(text) + "'");
  return v;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::Io, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::Io, "cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) fail(ErrorCode::Io, "failed writing " + path.string());
}

std::filesystem::path sidecar_path(const std::filesystem::path& path) {
  auto p = path;
  p += ".json";
  return p;
}

PointCloud read_point_cloud_csv(const std::filesystem::path& path, bool skip_header) {
  const auto text = read_text(path);
  auto rows = lines_of(text);
  std::vector<std::vector<double>> points;
  for (std::size_t r = skip_header ? 1 : 0; r < rows.size(); ++r) {
    std::vector<double> p;
    for (auto field : split(rows[r])) p.push_back(parse_double(field));
    points.push_back(std::move(p));
  }
  return PointCloud::from_rows(points);
}

void write_point_cloud_csv(const std::filesystem::path& path, const PointCloud& cloud) {
  std::string out;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const auto p = cloud.point(i);
    for (std::size_t k = 0; k < p.size(); ++k) {
      if (k) out += ',';
      out += format_double(p[k]);
    }
    out += '\n';
  }
  write_text(path, out);
}

std::string diagram_to_csv(const PersistenceDiagram& diagram) {
  std::string out = "dim,birth,death\n";
  for (const auto& f : diagram) {
    out += std::to_string(f.dim);
    out += ',';
    out += format_double(f.birth);
    out += ',';
    out += format_double(f.death);
    out += '\n';
  }
  return out;
}

PersistenceDiagram diagram_from_csv(std::string_view text) {
  const auto rows = lines_of(text);
  if (rows.empty() || rows.front() != "dim,birth,death")
    fail(ErrorCode::InvalidInput, "diagram CSV must start with the header dim,birth,death");
  PersistenceDiagram d;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto fields = split(rows[r]);
    if (fields.size() != 3) fail(ErrorCode::InvalidInput, "diagram rows need three fields");
    const double dim = parse_double(fields[0]);
    if (dim < 0 || dim != std::floor(dim)) fail(ErrorCode::InvalidInput, "diagram dimension must be an integer");
    d.add({static_cast<int>(dim), parse_double(fields[1]), parse_double(fields[2])});
  }
  return d;
}

PersistenceDiagram read_diagram_csv(const std::filesystem::path& path) { return diagram_from_csv(read_text(path)); }

void write_diagram_csv(const std::filesystem::path& path, const PersistenceDiagram& diagram) {
  write_text(path, diagram_to_csv(diagram));
}

namespace {

// Next whitespace-delimited token of a PGM header, skipping comments.
std::string pgm_token(const std::string& data, std::size_t& pos) {
  for (;;) {
    while (pos < data.size() && std::isspace(static_cast<unsigned char>(data[pos]))) ++pos;
    if (pos < data.size() && data[pos] == '#') {
      while (pos < data.size() && data[pos] != '\n') ++pos;
      continue;
    }
    break;
  }
  const auto start = pos;
  while (pos < data.size() && !std::isspace(static_cast<unsigned char>(data[pos]))) ++pos;
  return data.substr(start, pos - start);
}

BinaryVolume read_pgm(const std::filesystem::path& path) {
  const auto data = read_text(path);
  std::size_t pos = 0;
  if (pgm_token(data, pos) != "P5") fail(ErrorCode::InvalidInput, path.string() + " is not a binary PGM (P5)");
  std::size_t w = 0, h = 0, maxval = 0;
  try {
    w = std::stoul(pgm_token(data, pos));
    h = std::stoul(pgm_token(data, pos));
    maxval = std::stoul(pgm_token(data, pos));
  } catch (...) {
    fail(ErrorCode::InvalidInput, "malformed PGM header in " + path.string());
  }
  if (maxval == 0 || maxval > 255) fail(ErrorCode::InvalidInput, "only 8-bit PGM files are supported");
  ++pos;  // single whitespace after maxval
  if (data.size() < pos + w * h) fail(ErrorCode::InvalidInput, "PGM pixel data is truncated");
  BinaryVolume v;
  v.extents = {w, h};
  v.phase.resize(w * h);
  // PGM rows run top to bottom; row 0 becomes y = 0.
  for (std::size_t i = 0; i < w * h; ++i) v.phase[i] = static_cast<unsigned char>(data[pos + i]) >= 128 ? 1 : 0;
  v.validate();
  return v;
}

BinaryVolume read_raw(const std::filesystem::path& path) {
  nlohmann::json meta;
  try {
    meta = nlohmann::json::parse(read_text(sidecar_path(path)));
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::InvalidInput, "bad volume sidecar: " + std::string(e.what()));
  }
  if (!meta.contains("extents") || !meta["extents"].is_array())
    fail(ErrorCode::InvalidInput, "volume sidecar lacks an extents array");
  if (meta.contains("order") && meta["order"] != "x-fastest")
    fail(ErrorCode::InvalidInput, "only x-fastest voxel order is supported");
  BinaryVolume v;
  for (const auto& e : meta["extents"]) v.extents.push_back(e.get<std::size_t>());
  if (meta.contains("resolution")) v.resolution = meta["resolution"].get<double>();
  const auto bytes = read_text(path);
  v.phase.resize(bytes.size());
  for (std::size_t i = 0; i < bytes.size(); ++i) v.phase[i] = bytes[i] != 0 ? 1 : 0;
  v.validate();
  return v;
}

}  // namespace

BinaryVolume read_volume(const std::filesystem::path& path) {
  return path.extension() == ".pgm" ? read_pgm(path) : read_raw(path);
}

void write_volume_pgm(const std::filesystem::path& path, const BinaryVolume& volume) {
  volume.validate();
  if (volume.extents.size() != 2) fail(ErrorCode::InvalidInput, "PGM output needs a 2D volume");
  std::string out = "P5\n" + std::to_string(volume.extents[0]) + " " + std::to_string(volume.extents[1]) + "\n255\n";
  for (auto p : volume.phase) out += static_cast<char>(p ? 255 : 0);
  write_text(path, out);
}

void write_volume_raw(const std::filesystem::path& path, const BinaryVolume& volume) {
  volume.validate();
  std::string bytes(volume.phase.size(), '\0');
  for (std::size_t i = 0; i < bytes.size(); ++i) bytes[i] = volume.phase[i] ? 1 : 0;
  write_text(path, bytes);
  nlohmann::json meta = {{"extents", volume.extents}, {"order", "x-fastest"}, {"resolution", volume.resolution}};
  write_text(sidecar_path(path), meta.dump(2) + "\n");
}

}  // namespace topostat::io
