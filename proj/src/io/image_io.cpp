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
#include <sstream>

#include <json.hpp>

#include "topostat/error.hpp"
#include "topostat/io.hpp"

namespace topostat::io {

namespace {

std::vector<double> parse_row(std::string_view line) {
  std::vector<double> row;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(',', start);
    row.push_back(parse_double(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return row;
}

nlohmann::json number(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

double number_of(const nlohmann::json& j) {
  return j.is_string() ? parse_double(j.get<std::string>()) : j.get<double>();
}

}  // namespace

std::vector<std::vector<double>> read_matrix_csv(const std::filesystem::path& path) {
  const auto text = read_text(path);
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    rows.push_back(parse_row(line));
    if (rows.back().size() != rows.front().size())
      fail(ErrorCode::InvalidInput, "ragged matrix in " + path.string());
  }
  return rows;
}

void write_image(const std::filesystem::path& path, const PersistenceImage& image) {
  const auto& g = image.grid;
  std::string out;
  for (std::size_t r = 0; r < g.ny; ++r) {
    const std::size_t j = g.ny - 1 - r;
    for (std::size_t i = 0; i < g.nx; ++i) {
      if (i) out += ',';
      out += format_double(image.at(i, j));
    }
    out += '\n';
  }
  write_text(path, out);

  nlohmann::json meta = {
      {"kind", image.kind == ImageKind::Persistence ? "persistence" : "binning"},
      {"dim", image.dim},
      {"weight", std::string(to_string(image.weight))},
      {"bandwidth", image.bandwidth},
      {"inf_cap", number(image.inf_cap)},
      {"dropped", image.dropped},
      {"grid",
       {{"b_min", g.b_min}, {"b_max", g.b_max}, {"p_min", g.p_min}, {"p_max", g.p_max}, {"nx", g.nx}, {"ny", g.ny}}},
      {"layout", "rows top to bottom by decreasing persistence, columns by increasing birth"},
  };
  write_text(sidecar_path(path), meta.dump(2) + "\n");
}

PersistenceImage read_image(const std::filesystem::path& path) {
  PersistenceImage img;
  try {
    const auto meta = nlohmann::json::parse(read_text(sidecar_path(path)));
    const auto& g = meta.at("grid");
    img.grid = {g.at("b_min").get<double>(), g.at("b_max").get<double>(), g.at("p_min").get<double>(),
                g.at("p_max").get<double>(), g.at("nx").get<std::size_t>(), g.at("ny").get<std::size_t>()};
    img.dim = meta.at("dim").get<int>();
    img.kind = meta.value("kind", std::string("persistence")) == "binning" ? ImageKind::Binning
                                                                             : ImageKind::Persistence;
    const auto w = parse_weight(meta.value("weight", std::string("constant")));
    if (!w) fail(ErrorCode::InvalidInput, "unknown weight in " + sidecar_path(path).string());
    img.weight = *w;
    img.bandwidth = meta.value("bandwidth", 0.0);
    img.inf_cap = meta.contains("inf_cap") ? number_of(meta["inf_cap"]) : kInfinity;
    img.dropped = meta.value("dropped", std::size_t{0});
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::InvalidInput, "bad image sidecar: " + std::string(e.what()));
  }
  img.grid.validate();
  const auto rows = read_matrix_csv(path);
  if (rows.size() != img.grid.ny || rows.front().size() != img.grid.nx)
    fail(ErrorCode::InvalidInput, "image CSV shape does not match its sidecar: " + path.string());
  img.values.assign(img.grid.nx * img.grid.ny, 0.0);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t i = 0; i < img.grid.nx; ++i) img.at(i, img.grid.ny - 1 - r) = rows[r][i];
  return img;
}

void write_pgm_render(const std::filesystem::path& path, const std::vector<double>& values, std::size_t nx,
                      std::size_t ny) {
  if (nx == 0 || ny == 0 || values.size() != nx * ny) fail(ErrorCode::InvalidInput, "render grid shape mismatch");
  double lo = kInfinity, hi = -kInfinity;
  for (double v : values) {
    if (!std::isfinite(v)) continue;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const double span = hi > lo ? hi - lo : 1.0;
  std::string out = "P5\n" + std::to_string(nx) + " " + std::to_string(ny) + "\n255\n";
  for (std::size_t r = 0; r < ny; ++r) {
    const std::size_t j = ny - 1 - r;
    for (std::size_t i = 0; i < nx; ++i) {
      const double v = values[j * nx + i];
      const double s = std::isfinite(v) ? (v - lo) / span : (v > 0 ? 1.0 : 0.0);
      out += static_cast<char>(static_cast<unsigned char>(std::lround(std::clamp(s, 0.0, 1.0) * 255.0)));
    }
  }
  write_text(path, out);
}

void write_test_result_csv(const std::filesystem::path& path, const TestResultGrid& result) {
  std::string out = "ix,iy,status,filter_stat,t,p,q\n";
  for (std::size_t j = 0; j < result.ny; ++j)
    for (std::size_t i = 0; i < result.nx; ++i) {
      const auto& e = result.at(i, j);
      out += std::to_string(i) + ',' + std::to_string(j) + ',' + std::string(to_string(e.status)) + ',' +
             format_double(e.filter_stat) + ',';
      if (e.status == ElementStatus::Tested)
        out += format_double(e.t) + ',' + format_double(e.p) + ',' + format_double(e.q);
      else
        out += ",,";
      out += '\n';
    }
  write_text(path, out);
}

}  // namespace topostat::io
