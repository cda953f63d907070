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

#include "topostat/error.hpp"
#include "topostat/simulate.hpp"

using namespace topostat;

TEST_CASE("shape sampler") {
  SUBCASE("noiseless radii") {
    const auto one = sample_shape(ShapeSpec::one_circle(1.0, 200), 3);
    CHECK(one.size() == 200);
    for (std::size_t i = 0; i < one.size(); ++i)
      CHECK(std::abs(std::hypot(one.point(i)[0], one.point(i)[1]) - 1.0) < 1e-12);
    const auto two = sample_shape(ShapeSpec::two_circles(0.9, 1.1, 200), 3);
    std::size_t inner = 0;
    for (std::size_t i = 0; i < two.size(); ++i) {
      const double r = std::hypot(two.point(i)[0], two.point(i)[1]);
      const bool on_inner = std::abs(r - 0.9) < 1e-12;
      CHECK((on_inner || std::abs(r - 1.1) < 1e-12));
      inner += on_inner;
    }
    CHECK(inner > 60);
    CHECK(inner < 140);
  }
  SUBCASE("mean radius under small noise") {
    const auto cloud = sample_shape(ShapeSpec::one_circle(1.0, 10000, 0.05), 17);
    double sum = 0;
    for (std::size_t i = 0; i < cloud.size(); ++i) sum += std::hypot(cloud.point(i)[0], cloud.point(i)[1]);
    CHECK(std::abs(sum / double(cloud.size()) - 1.0) < 0.01);
  }
  SUBCASE("deterministic in the seed") {
    const auto spec = ShapeSpec::two_circles(0.9, 1.1, 50, 0.1);
    CHECK(sample_shape(spec, 8).coords() == sample_shape(spec, 8).coords());
    CHECK(sample_shape(spec, 8).coords() != sample_shape(spec, 9).coords());
  }
  SUBCASE("validation") {
    ShapeSpec bad = ShapeSpec::one_circle();
    bad.radii = {1.0, 2.0};
    CHECK_THROWS_AS(sample_shape(bad, 0), Error);
    CHECK_THROWS_AS(sample_shape(ShapeSpec::one_circle(-1.0), 0), Error);
    CHECK_THROWS_AS(sample_shape(ShapeSpec::one_circle(1.0, 0), 0), Error);
    CHECK_THROWS_AS(sample_shape(ShapeSpec::one_circle(1.0, 5, -0.1), 0), Error);
  }
}

TEST_CASE("pseudo-rock generator") {
  const RockSpec spec{};
  SUBCASE("two-phase textures at the default spec") {
    int ok = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const auto rock = pseudo_rock(spec, seed);
      CHECK(rock.extents == std::vector<std::size_t>{200, 200});
      const double phi = rock.porosity();
      ok += phi > 0.2 && phi < 0.8;
    }
    CHECK(ok >= 19);
  }
  SUBCASE("deterministic in the seed") {
    CHECK(pseudo_rock(spec, 4).phase == pseudo_rock(spec, 4).phase);
    CHECK(pseudo_rock(spec, 4).phase != pseudo_rock(spec, 5).phase);
  }
  SUBCASE("raising the threshold never adds grain") {
    RockSpec lo = spec, hi = spec;
    lo.threshold = 0.4;
    hi.threshold = 0.9;
    const auto a = pseudo_rock(lo, 12), b = pseudo_rock(hi, 12);
    std::size_t grain_a = 0, grain_b = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (b.phase[i]) CHECK(a.phase[i]);
      grain_a += a.phase[i];
      grain_b += b.phase[i];
    }
    CHECK(grain_b < grain_a);
  }
  SUBCASE("a single seed point shrinks toward its pixel") {
    RockSpec one{1, 0, 3.0, 3.0, 0.5, 40, 40};
    one.threshold = 0.999;
    const auto rock = pseudo_rock(one, 1);
    std::size_t grain = 0;
    for (auto p : rock.phase) grain += p;
    CHECK(grain == 1);
    one.threshold = 0.5;
    std::size_t wider = 0;
    for (auto p : pseudo_rock(one, 1).phase) wider += p;
    CHECK(wider > grain);
  }
  SUBCASE("validation") {
    RockSpec bad = spec;
    bad.threshold = 1.0;
    CHECK_THROWS_AS(pseudo_rock(bad, 0), Error);
    bad = spec;
    bad.seeds = 0;
    CHECK_THROWS_AS(pseudo_rock(bad, 0), Error);
  }
}

TEST_CASE("subregions tile the volume") {
  BinaryVolume v;
  v.extents = {6, 6, 3};
  v.resolution = 0.5;
  for (std::size_t i = 0; i < 108; ++i) v.phase.push_back((i * 7 + i / 5) % 3 == 0);
  const auto blocks = extract_subregions(v, 3);
  REQUIRE(blocks.size() == 27);
  CHECK(blocks[0].extents == std::vector<std::size_t>{2, 2, 1});
  CHECK(blocks[0].resolution == 0.5);
  // block (1, 2, 1): origin (2, 4, 1)
  const auto& b = blocks[1 + 3 * 2 + 9 * 1];
  for (std::size_t y = 0; y < 2; ++y)
    for (std::size_t x = 0; x < 2; ++x) CHECK(b.phase[y * 2 + x] == v.phase[(1 * 6 + 4 + y) * 6 + 2 + x]);
  std::size_t total = 0, grain = 0;
  for (const auto& s : blocks)
    for (auto p : s.phase) {
      ++total;
      grain += p;
    }
  CHECK(total == v.size());
  CHECK(extract_subregions(v, 2, 1).size() == 8);
  CHECK_THROWS_AS(extract_subregions(v, 2, 2), Error);
}

TEST_CASE("power experiment") {
  PowerConfig cfg;
  cfg.sigmas = {0.0};
  cfg.weights = {WeightKind::Constant};
  cfg.filters = {FilterStatistic::OverallMean};
  cfg.thresholds = {0.0};
  cfg.reps = 6;
  cfg.seed = 1;

  SUBCASE("clean shapes always differ") {
    const auto rows = power_experiment(cfg);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].method == "two-stage");
    CHECK(rows[0].power == 1.0);
    CHECK(rows[0].std_error == 0.0);
  }
  SUBCASE("factorial layout and permutation baseline") {
    cfg.sigmas = {0.05, 0.1};
    cfg.weights = {WeightKind::Constant, WeightKind::Linear};
    cfg.thresholds = {0.0, 50.0, 80.0};
    cfg.reps = 2;
    cfg.permutation_reps = 2;
    cfg.permutation_shuffles = 10;
    const auto rows = power_experiment(cfg);
    CHECK(rows.size() == 2 * (2 * 1 * 3 + 1));
    CHECK(rows[6].method == "permutation");
    CHECK_FALSE(rows[6].weight.has_value());
    CHECK(rows[0].sigma == 0.05);
    CHECK(rows[7].sigma == 0.1);
    for (const auto& r : rows) CHECK(r.std_error <= 0.5 / std::sqrt(double(r.reps)) + 1e-12);
    const auto again = power_experiment(cfg);
    for (std::size_t i = 0; i < rows.size(); ++i) CHECK(again[i].rejections == rows[i].rejections);
  }
  SUBCASE("a shape against itself rejects at about alpha") {
    cfg.group_b = cfg.group_a;
    cfg.sigmas = {0.1};
    cfg.thresholds = {50.0};
    cfg.reps = 100;
    const auto rows = power_experiment(cfg);
    CHECK(rows[0].power <= 0.05 + 3 * std::sqrt(0.05 * 0.95 / 100));
  }
}

TEST_CASE("scenario experiment") {
  ScenarioConfig cfg;
  cfg.group_a.width = cfg.group_a.height = 60;
  cfg.group_a.seeds = 20;
  cfg.group_a.dispersion = 10;
  cfg.group_b = cfg.group_a;
  cfg.n_per_group = 3;
  cfg.resolution = 10;
  cfg.weights = {WeightKind::SoftArctan, WeightKind::Linear};
  cfg.shuffles = 8;
  cfg.seed = 21;
  const auto r = scenario_experiment(cfg);
  REQUIRE(r.dims.size() == 2);
  CHECK(r.porosity_a > 0.0);
  CHECK(r.porosity_a < 1.0);
  for (const auto& d : r.dims) {
    CHECK(d.grid.nx == 10);
    CHECK(d.tests.size() == 2);
    CHECK(d.min_q(WeightKind::SoftArctan) <= 1.0);
    REQUIRE(d.permutation.has_value());
    CHECK(d.permutation->shuffled_losses.size() == 8);
  }
  CHECK(r.dims[0].inf_cap > 0.0);

  const auto again = scenario_experiment(cfg);
  CHECK(again.dims[1].min_q(WeightKind::Linear) == r.dims[1].min_q(WeightKind::Linear));
  CHECK(again.dims[0].permutation->p == r.dims[0].permutation->p);
}

TEST_CASE("experiment cap") {
  PersistenceDiagram a, b;
  a.add({0, -2.0, 1.5});
  a.add({0, -3.0, kInfinity});
  b.add({0, -1.0, 4.0});
  b.add({1, 0.5, 9.0});
  CHECK(experiment_inf_cap({a, b}, 0) == 4.0);
  CHECK(experiment_inf_cap({a, b}, 1) == 9.0);
  CHECK(experiment_inf_cap({a}, 1) == 0.0);
}
