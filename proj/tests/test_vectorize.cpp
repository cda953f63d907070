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

#include <doctest.h>

#include <cmath>
#include <random>

#include "topostat/error.hpp"
#include "topostat/vectorize.hpp"

using namespace topostat;

namespace {

const GridSpec kUnitGrid{0.0, 2.0, 0.0, 2.0, 40, 40};

// Composite Simpson integral of the weighted Gaussian over pixel (i, j).
double quadrature(const GridSpec& g, std::size_t i, std::size_t j, double u, double v, double w, double h) {
  constexpr int n = 200;
  const double x0 = g.birth_edge(i), x1 = g.birth_edge(i + 1);
  const double y0 = g.pers_edge(j), y1 = g.pers_edge(j + 1);
  const double dx = (x1 - x0) / n, dy = (y1 - y0) / n;
  auto coef = [](int k) { return k == 0 || k == n ? 1.0 : (k % 2 ? 4.0 : 2.0); };
  double s = 0;
  for (int a = 0; a <= n; ++a)
    for (int b = 0; b <= n; ++b) {
      const double x = x0 + a * dx, y = y0 + b * dy;
      s += coef(a) * coef(b) * std::exp(-((x - u) * (x - u) + (y - v) * (y - v)) / (2 * h * h));
    }
  return w * s * dx * dy / 9.0 / (2 * M_PI * h * h);
}

}  // namespace

TEST_CASE("transform replaces infinite deaths with the cap") {
  PersistenceDiagram d({{1, 0.3831, 1.7371}, {0, 0.0, kInfinity}, {0, 0.0, 0.5}});
  const auto loops = transform_diagram(d, 1, 5.0);
  REQUIRE(loops.size() == 1);
  CHECK(loops[0].birth == 0.3831);
  CHECK(loops[0].persistence == doctest::Approx(1.354));
  const auto comps = transform_diagram(d, 0, 2.0);
  REQUIRE(comps.size() == 2);
  CHECK(comps[0].persistence == 2.0);
  CHECK(transform_diagram(PersistenceDiagram{}, 1, 1.0).empty());
  try {
    transform_diagram(d, 1, 1.0);
    FAIL("expected invalid-cap");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidCap);
  }
  CHECK_THROWS_AS(transform_diagram(d, 0, kInfinity), Error);
}

TEST_CASE("weights") {
  CHECK(weight_value(WeightKind::Linear, 0.2, 0.0) == 0.0);
  CHECK(weight_value(WeightKind::Constant, 3.0, 7.0) == 1.0);
  CHECK(weight_value(WeightKind::SoftArctan, 0.0, 4.0) == doctest::Approx(0.7853981634).epsilon(1e-10));
  CHECK(weight_value(WeightKind::HardArctan, 0.0, 1.0) == doctest::Approx(M_PI / 4));
  try {
    weight_value(WeightKind::Constant, 0.0, -0.1);
    FAIL("expected invalid-persistence");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidPersistence);
  }
  for (double v = 0; v < 50; v += 0.37) {
    CHECK(weight_value(WeightKind::HardArctan, 0, v) <= v);
    CHECK(weight_value(WeightKind::SoftArctan, 0, v) <= M_PI / 2);
    for (auto k : {WeightKind::Constant, WeightKind::SoftArctan, WeightKind::HardArctan, WeightKind::Linear})
      CHECK(weight_value(k, 0, v + 0.1) >= weight_value(k, 0, v));
  }
  CHECK(parse_weight("soft") == WeightKind::SoftArctan);
  CHECK(parse_weight("hard_arctan") == WeightKind::HardArctan);
  CHECK_FALSE(parse_weight("quadratic").has_value());
}

TEST_CASE("image pixels are exact rectangle integrals") {
  const GridSpec g{0.0, 1.0, 0.0, 0.8, 5, 4};
  const double h = 0.12;
  const std::vector<BirthPersistence> pts{{0.31, 0.42}, {0.9, 0.05}};
  const auto img = persistence_image(pts, g, WeightKind::Linear, h);
  for (std::size_t j = 0; j < g.ny; ++j)
    for (std::size_t i = 0; i < g.nx; ++i) {
      double want = 0;
      for (const auto& p : pts) want += quadrature(g, i, j, p.birth, p.persistence, p.persistence, h);
      CHECK(img.at(i, j) == doctest::Approx(want).epsilon(1e-10));
    }
}

TEST_CASE("image mass and additivity") {
  CHECK(persistence_image({}, kUnitGrid, WeightKind::Constant, 0.075).sum() == 0.0);
  const auto one = persistence_image({{1.0, 1.0}}, kUnitGrid, WeightKind::Constant, 0.075);
  CHECK(std::abs(one.sum() - 1.0) < 1e-9);
  const auto two = persistence_image({{1.0, 1.0}, {1.0, 1.0}}, kUnitGrid, WeightKind::Constant, 0.075);
  for (std::size_t k = 0; k < one.values.size(); ++k) CHECK(two.values[k] == 2 * one.values[k]);
  for (double v : one.values) CHECK(v >= 0.0);

  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.2, 1.8);
  std::vector<BirthPersistence> a, b, ab;
  for (int k = 0; k < 6; ++k) a.push_back({u(rng), u(rng)});
  for (int k = 0; k < 4; ++k) b.push_back({u(rng), u(rng)});
  ab = a;
  ab.insert(ab.end(), b.begin(), b.end());
  const auto ia = persistence_image(a, kUnitGrid, WeightKind::SoftArctan, 0.075);
  const auto ib = persistence_image(b, kUnitGrid, WeightKind::SoftArctan, 0.075);
  const auto iab = persistence_image(ab, kUnitGrid, WeightKind::SoftArctan, 0.075);
  for (std::size_t k = 0; k < ia.values.size(); ++k)
    CHECK(iab.values[k] == doctest::Approx(ia.values[k] + ib.values[k]).epsilon(1e-12));
}

TEST_CASE("mass converges to the weight on a covering grid") {
  const double u = 0.7, v = 0.9, h = 0.05;
  const GridSpec g{u - 8 * h, u + 8 * h, v - 8 * h, v + 8 * h, 16, 16};
  const auto img = persistence_image({{u, v}}, g, WeightKind::HardArctan, h);
  CHECK(std::abs(img.sum() - std::atan(v)) < 1e-9);
}

TEST_CASE("block sums of a finer image equal the coarse image") {
  const GridSpec fine{0.0, 2.0, 0.0, 2.0, 80, 80};
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  std::vector<BirthPersistence> pts;
  for (int k = 0; k < 12; ++k) pts.push_back({u(rng), u(rng)});
  const auto f = persistence_image(pts, fine, WeightKind::Constant, 0.075);
  const auto c = persistence_image(pts, kUnitGrid, WeightKind::Constant, 0.075);
  for (std::size_t j = 0; j < 40; ++j)
    for (std::size_t i = 0; i < 40; ++i) {
      const double s = f.at(2 * i, 2 * j) + f.at(2 * i + 1, 2 * j) + f.at(2 * i, 2 * j + 1) + f.at(2 * i + 1, 2 * j + 1);
      CHECK(std::abs(s - c.at(i, j)) < 1e-9);
    }
}

TEST_CASE("binning counts with the lower-index edge rule") {
  const GridSpec g{0.0, 4.0, 0.0, 4.0, 4, 4};
  auto img = binning_vectorize({{2.5, 2.5}}, g);
  CHECK(img.at(2, 2) == 1.0);
  CHECK(img.sum() == 1.0);

  img = binning_vectorize({{2.0, 0.5}}, g);
  CHECK(img.at(1, 0) == 1.0);
  img = binning_vectorize({{0.0, 0.0}, {4.0, 4.0}}, g);
  CHECK(img.at(0, 0) == 1.0);
  CHECK(img.at(3, 3) == 1.0);

  img = binning_vectorize({{0.5, 0.5}, {0.6, 0.7}, {0.2, 0.9}, {3.5, 1.5}, {5.0, 1.0}, {-0.1, 1.0}}, g);
  CHECK(img.at(0, 0) == 3.0);
  CHECK(img.at(3, 1) == 1.0);
  CHECK(img.sum() == 4.0);
  CHECK(img.dropped == 2);
  CHECK(img.kind == ImageKind::Binning);
}

TEST_CASE("corner mask") {
  const auto mask = corner_mask(kUnitGrid, 2.0);
  CHECK(mask[39 * 40 + 39]);
  CHECK_FALSE(mask[0]);
  std::size_t excluded = 0;
  for (bool m : mask) excluded += m;
  CHECK(excluded > 0);
  for (bool m : corner_mask(kUnitGrid, 1e300)) CHECK_FALSE(m);

  // Literal alternative keeps only birth >= persistence.
  const auto alt = corner_mask(kUnitGrid, 2.0, CornerRule::BirthAbovePersistence);
  CHECK_FALSE(alt[0 * 40 + 5]);   // birth 0.225, persistence 0.025
  CHECK(alt[5 * 40 + 0]);         // birth 0.025, persistence 0.225
}

TEST_CASE("grid fit covers every point with padding") {
  const std::vector<BirthPersistence> pts{{-0.5, 0.2}, {1.5, 2.0}};
  const auto g = GridSpec::fit(pts, 20, 30);
  CHECK(g.nx == 20);
  CHECK(g.ny == 30);
  CHECK(g.b_min < -0.5);
  CHECK(g.b_max > 1.5);
  CHECK(g.p_min == 0.0);
  CHECK(g.p_max > 2.0);
  CHECK(g.b_max - 1.5 == doctest::Approx(3 * 1.5 * (2.0 / 20)));
  CHECK_THROWS_AS((GridSpec{0, 1, 0, 1, 1, 4}.validate()), Error);
  CHECK_THROWS_AS((GridSpec{1, 1, 0, 1, 4, 4}.validate()), Error);
}

TEST_CASE("invalid bandwidth") {
  CHECK_THROWS_AS(persistence_image({{1, 1}}, kUnitGrid, WeightKind::Constant, 0.0), Error);
}
