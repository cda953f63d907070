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

#include <algorithm>
#include <random>

#include "support/oracles.hpp"
#include "topostat/error.hpp"
#include "topostat/ph.hpp"
#include "topostat/simulate.hpp"

using namespace topostat;

namespace {

const std::vector<std::vector<double>> kFivePoints{{0, 0}, {1, 0}, {1.3, 1}, {0.4, 1.3}, {-1.05, 1}};

std::vector<oracle::Pair> sorted_pairs(const PersistenceDiagram& d) {
  std::vector<oracle::Pair> out;
  for (const auto& f : d) out.push_back({f.dim, f.birth, f.death});
  std::sort(out.begin(), out.end());
  return out;
}

void require_same(const std::vector<oracle::Pair>& got, const std::vector<oracle::Pair>& want, double tol = 1e-12) {
  REQUIRE(got.size() == want.size());
  for (std::size_t k = 0; k < got.size(); ++k) {
    CHECK(got[k].dim == want[k].dim);
    CHECK(got[k].birth == doctest::Approx(want[k].birth).epsilon(tol));
    if (std::isinf(want[k].death))
      CHECK(std::isinf(got[k].death));
    else
      CHECK(got[k].death == doctest::Approx(want[k].death).epsilon(tol));
  }
}

std::vector<std::vector<double>> random_cloud(std::mt19937_64& rng, int n, int dim) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<std::vector<double>> pts(n, std::vector<double>(dim));
  for (auto& p : pts)
    for (auto& c : p) c = u(rng);
  return pts;
}

}  // namespace

TEST_CASE("point cloud rejects ragged and non-finite input") {
  CHECK_THROWS_AS(PointCloud(2, {1.0, 2.0, 3.0}), Error);
  CHECK_THROWS_AS(PointCloud::from_rows({{0, 0}, {1}}), Error);
  CHECK_THROWS_AS(PointCloud(1, {std::nan("")}), Error);
  CHECK(PointCloud::from_rows({{0, 0}, {3, 4}}).distance(0, 1) == 5.0);
}

TEST_CASE("five-point rips edges below 1.2") {
  const auto f = build_rips(PointCloud::from_rows(kFivePoints), 1, 1.2);
  std::vector<double> edges;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (f.dim(i) == 1) edges.push_back(f.value(i));
  REQUIRE(edges.size() == 3);
  CHECK(edges[0] == doctest::Approx(0.9487).epsilon(1e-4));
  CHECK(edges[1] == 1.0);
  CHECK(edges[2] == doctest::Approx(1.0440).epsilon(1e-4));
}

TEST_CASE("rips filtration is ordered and valid") {
  std::mt19937_64 rng(7);
  const auto f = build_rips(PointCloud::from_rows(random_cloud(rng, 15, 2)), 3, 0.6);
  f.validate();
  for (std::size_t i = 0; i < 15; ++i) CHECK(f.dim(i) == 0);
  for (std::size_t i = 1; i < f.size(); ++i) {
    CHECK(f.value(i - 1) <= f.value(i));
    if (f.value(i - 1) == f.value(i)) CHECK(f.dim(i - 1) <= f.dim(i));
  }
  CHECK_THROWS_AS(build_rips(PointCloud::from_rows({{0.0}}), 4, 1.0), Error);
}

TEST_CASE("five-point diagram matches the persistent Betti oracle") {
  const auto d = compute_persistence(build_rips(PointCloud::from_rows(kFivePoints), 2, 2.0), 1);
  const auto want = oracle::diagram_from_betti(oracle::rips_cells(kFivePoints, 2, 2.0), 1);
  require_same(sorted_pairs(d), want);

  const auto loops = d.of_dim(1);
  REQUIRE(loops.size() == 1);
  CHECK(loops[0].birth == doctest::Approx(1.3601).epsilon(1e-4));
  CHECK(loops[0].death == doctest::Approx(1.4318).epsilon(1e-4));
  CHECK(betti_at(d, 0, 1.44) == 2);
  CHECK(betti_at(d, 1, 1.40) == 1);
  CHECK(betti_at(d, 1, 1.50) == 0);
}

TEST_CASE("random clouds agree with the oracle") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 25; ++trial) {
    const int dim = trial % 2 ? 3 : 2;
    const auto pts = random_cloud(rng, 9, dim);
    const double scale = trial % 3 == 0 ? 0.5 : 2.0;
    const auto d = compute_persistence(build_rips(PointCloud::from_rows(pts), 3, scale), 2);
    require_same(sorted_pairs(d), oracle::diagram_from_betti(oracle::rips_cells(pts, 3, scale), 2));
  }
}

TEST_CASE("dimension-zero deaths are minimum spanning tree weights") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const auto pts = random_cloud(rng, 60, 2);
    const auto d = compute_persistence(build_rips(PointCloud::from_rows(pts), 1, 2.0), 0);
    std::vector<double> deaths;
    for (const auto& f : d.of_dim(0))
      if (!f.essential()) deaths.push_back(f.death);
    std::sort(deaths.begin(), deaths.end());
    CHECK(deaths == oracle::mst_weights(pts, 2.0));
    CHECK(d.count(0) == 1 + deaths.size());
  }
}

TEST_CASE("a single point has one essential class") {
  const auto d = compute_persistence(build_rips(PointCloud::from_rows({{0.5, 0.5}}), 2, 1.0), 1);
  REQUIRE(d.size() == 1);
  CHECK(d.features()[0] == Feature{0, 0.0, kInfinity});
}

TEST_CASE("published circle sample has its reported loop") {
  // 50 points on the unit circle from a fixed reference sample.
  const std::vector<std::vector<double>> pts{
      {0.7428219, 0.66948913},   {0.3385895, 0.94093421},   {-0.2571978, -0.96635877}, {0.9766586, 0.21479765},
      {-0.9878061, 0.15568911},  {-0.2739267, 0.96175057},  {-0.7914422, -0.61124407}, {0.2394508, -0.97090850},
      {-0.8349805, 0.55027957},  {-0.2368550, -0.97154502}, {0.5394487, 0.84201850},   {-0.5494803, 0.83550667},
      {0.8730733, 0.48758894},   {0.5881371, 0.80876126},   {-0.8459769, 0.53321957},  {-0.4838730, 0.87513821},
      {-0.7541640, -0.65668616}, {-0.9157753, 0.40169103},  {-0.4527487, -0.89163819}, {0.3751519, 0.92696334},
      {0.9921755, -0.12485112},  {-0.9994425, 0.03338565},  {0.4180952, -0.90840321},  {-0.9997605, -0.02188412},
      {-0.5903125, 0.80717481},  {0.6363443, 0.77140520},   {0.7812096, -0.62426879},  {-0.7736046, -0.63366856},
      {-0.8815971, -0.47200262}, {0.6375824, -0.77038216},  {0.4916157, 0.87081229},   {-0.9949560, -0.10031186},
      {0.9769235, -0.21358941},  {-0.8313772, -0.55570852}, {0.9203847, 0.39101412},   {0.5083239, -0.86116597},
      {-0.9142303, -0.40519487}, {-0.1910957, -0.98157140}, {0.8284818, 0.56001596},   {-0.9048752, -0.42567692},
      {0.1249782, -0.99215949},  {-0.9731828, -0.23003293}, {-0.9915786, -0.12950616}, {0.2961873, -0.95512986},
      {-0.3613478, 0.93243110},  {0.9950132, -0.09974289},  {0.2716518, -0.96239559},  {-0.9805989, -0.19602506},
      {-0.2699407, 0.96287695},  {0.3747664, 0.92711926}};
  const auto d = compute_persistence(build_rips(PointCloud::from_rows(pts), 2, 2.0), 1);
  const auto loops = d.of_dim(1);
  REQUIRE(loops.size() == 1);
  // The loop is born when the widest angular gap closes.
  std::vector<std::pair<double, std::size_t>> order;
  for (std::size_t k = 0; k < pts.size(); ++k) order.emplace_back(std::atan2(pts[k][1], pts[k][0]), k);
  std::sort(order.begin(), order.end());
  double gap = 0, chord = 0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    const auto& [a0, i] = order[k];
    const auto& [a1, j] = order[(k + 1) % order.size()];
    const double span = k + 1 < order.size() ? a1 - a0 : a1 + 2 * M_PI - a0;
    if (span > gap) {
      gap = span;
      chord = std::hypot(pts[i][0] - pts[j][0], pts[i][1] - pts[j][1]);
    }
  }
  CHECK(loops[0].birth == doctest::Approx(chord).epsilon(1e-12));
  // The published death is 0.3830768 + 1.354; the listed coordinates are
  // rounded, so allow a few thousandths.
  CHECK(std::abs(loops[0].death - (0.3830768 + 1.354)) < 2e-3);
}

TEST_CASE("explicit filtrations are validated") {
  SUBCASE("forward reference") {
    std::vector<CellSpec> cells{{0, 0.0, {}}, {1, 1.0, {0, 2}}, {0, 0.0, {}}};
    CHECK_THROWS_AS(Filtration(ComplexKind::Rips, cells).validate(), Error);
  }
  SUBCASE("decreasing values") {
    std::vector<CellSpec> cells{{0, 1.0, {}}, {0, 0.0, {}}};
    try {
      Filtration(ComplexKind::Rips, cells).validate();
      FAIL("expected a failure");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::InvalidFiltration);
    }
  }
  SUBCASE("wrong face dimension") {
    std::vector<CellSpec> cells{{0, 0.0, {}}, {0, 0.0, {}}, {1, 1.0, {0, 1}}, {2, 1.0, {0, 1, 2}}};
    CHECK_THROWS_AS(Filtration(ComplexKind::Rips, cells).validate(), Error);
  }
  SUBCASE("a triangle kills its loop") {
    std::vector<CellSpec> cells{{0, 0.0, {}},     {0, 0.0, {}},     {0, 0.0, {}},       {1, 1.0, {0, 1}},
                                {1, 1.0, {1, 2}}, {1, 2.0, {0, 2}}, {2, 3.0, {3, 4, 5}}};
    Filtration f(ComplexKind::Cubical, cells);
    const auto d = compute_persistence(f, 1);
    CHECK(d.of_dim(1) == std::vector<Feature>{{1, 2.0, 3.0}});
    CHECK(d.count(0) == 3);  // two merges at 1.0 plus the essential class
  }
}

TEST_CASE("diagram rejects death before birth") {
  CHECK_THROWS_AS(PersistenceDiagram({{0, 1.0, 0.5}}), Error);
  CHECK_THROWS_AS(PersistenceDiagram({{0, kInfinity, kInfinity}}), Error);
  PersistenceDiagram d({{0, 0.0, 1.0}, {1, 0.5, kInfinity}});
  CHECK(d.max_finite_death(0) == 1.0);
  CHECK(std::isinf(d.max_finite_death(1)));
}

TEST_CASE("cubical persistence matches the oracle on small grids") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> level(0, 6);
  for (int trial = 0; trial < 30; ++trial) {
    const int w = 3 + trial % 4, h = 3 + (trial / 4) % 3;
    RealGrid g{{std::size_t(w), std::size_t(h)}, std::vector<double>(w * h)};
    for (auto& v : g.values) v = level(rng) - 2.5;
    const auto f = build_cubical(g);
    f.validate();
    const auto d = compute_persistence(f, 2);
    require_same(sorted_pairs(d), oracle::diagram_from_betti(oracle::cubical_cells_2d(g.values, w, h), 2));
  }
}

TEST_CASE("cubical cell counts in three dimensions") {
  RealGrid g{{3, 4, 5}, std::vector<double>(60, 0.0)};
  const auto f = build_cubical(g);
  CHECK(f.count(0) == 60);
  CHECK(f.count(1) == 2 * 4 * 5 + 3 * 3 * 5 + 3 * 4 * 4);
  CHECK(f.count(2) == 2 * 3 * 5 + 2 * 4 * 4 + 3 * 3 * 4);
  CHECK(f.count(3) == 2 * 3 * 4);
  const auto d = compute_persistence(f, 2);
  REQUIRE(d.size() == 1);
  CHECK(d.features()[0] == Feature{0, 0.0, kInfinity});
}

TEST_CASE("a hollow cube has one void") {
  RealGrid g{{3, 3, 3}, std::vector<double>(27, 0.0)};
  g.values[13] = 1.0;  // centre voxel enters last
  const auto d = compute_persistence(build_cubical(g), 2);
  CHECK(d.of_dim(2) == std::vector<Feature>{{2, 0.0, 1.0}});
}

TEST_CASE("sedt signs and values") {
  BinaryVolume v{{5, 1}, {1, 1, 0, 0, 0}};
  const auto g = sedt(v);
  CHECK(g.values == std::vector<double>{-2, -1, 1, 2, 3});
  BinaryVolume solid{{3, 3}, std::vector<std::uint8_t>(9, 1)};
  try {
    sedt(solid);
    FAIL("expected degenerate-volume");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateVolume);
  }
  BinaryVolume bad{{3, 3}, std::vector<std::uint8_t>(8, 1)};
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("sedt agrees with the quadratic scan") {
  std::mt19937_64 rng(9);
  std::bernoulli_distribution coin(0.3);
  for (int trial = 0; trial < 10; ++trial) {
    const std::vector<int> ext{7 + trial % 5, 6, trial % 2 ? 4 : 1};
    BinaryVolume v;
    for (int e : ext) v.extents.push_back(e);
    v.phase.resize(ext[0] * ext[1] * ext[2]);
    for (auto& p : v.phase) p = coin(rng);
    v.phase[0] = 1;
    v.phase[1] = 0;
    CHECK(sedt(v).values == oracle::brute_sedt(v.phase, ext));
  }
}
