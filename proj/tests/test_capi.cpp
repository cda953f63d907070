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
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "topostat/topostat.h"

namespace {

// The five points whose Rips filtration has a single short-lived loop.
const double kFive[] = {0, 0, 1, 0, 1.3, 1, 0.4, 1.3, -1.05, 1};

ts_diagram* one_loop(double birth, double death) {
  const int dims[] = {1};
  const double b[] = {birth}, d[] = {death};
  ts_diagram* out = nullptr;
  REQUIRE(ts_diagram_create(1, dims, b, d, &out) == TS_OK);
  return out;
}

std::string temp_path(const char* name) { return std::string(P_tmpdir) + "/topostat_capi_" + name; }

}  // namespace

TEST_CASE("status reporting") {
  CHECK(std::string(ts_status_name(TS_INVALID_CAP)) == "invalid-cap");
  CHECK(std::string(ts_version()) == "0.1.0");
  ts_cloud* cloud = nullptr;
  CHECK(ts_cloud_create(2, 3, nullptr, &cloud) == TS_INVALID_ARGUMENT);
  CHECK(cloud == nullptr);
  CHECK(ts_cloud_read_csv("/nonexistent/pts.csv", 0, &cloud) == TS_IO);
  CHECK(std::string(ts_last_error()).find("pts.csv") != std::string::npos);
  CHECK(ts_diagram_size(nullptr) == 0);
  ts_cloud_free(nullptr);
  ts_string_free(nullptr);
}

TEST_CASE("rips persistence through the C interface") {
  ts_cloud* cloud = nullptr;
  REQUIRE(ts_cloud_create(2, 5, kFive, &cloud) == TS_OK);
  CHECK(ts_cloud_size(cloud) == 5);
  ts_diagram* d = nullptr;
  REQUIRE(ts_rips_persistence(cloud, 2, 10.0, 1, &d) == TS_OK);
  std::vector<double> deaths;
  int loops = 0;
  for (size_t i = 0; i < ts_diagram_size(d); ++i) {
    int dim;
    double b, e;
    REQUIRE(ts_diagram_get(d, i, &dim, &b, &e) == TS_OK);
    if (dim == 1) {
      ++loops;
      CHECK(b == doctest::Approx(1.3601470508735443).epsilon(1e-12));
      CHECK(e == doctest::Approx(1.4317821063276353).epsilon(1e-12));
    }
  }
  CHECK(loops == 1);
  int betti = -1;
  CHECK(ts_betti(d, 1, 1.4, &betti) == TS_OK);
  CHECK(betti == 1);
  CHECK(ts_diagram_get(d, 99, nullptr, nullptr, nullptr) != TS_OK);

  ts_diagram* bad = nullptr;
  CHECK(ts_rips_persistence(cloud, 4, 1.0, 1, &bad) == TS_INVALID_INPUT);
  ts_diagram_free(d);
  ts_cloud_free(cloud);
}

TEST_CASE("volumes, distance transform and cubical persistence") {
  const size_t ext[] = {4, 4};
  std::vector<uint8_t> phase(16, 0);
  phase[5] = phase[6] = phase[9] = phase[10] = 1;
  ts_volume* v = nullptr;
  REQUIRE(ts_volume_create(2, ext, phase.data(), &v) == TS_OK);
  CHECK(ts_volume_porosity(v) == doctest::Approx(0.75));
  std::vector<double> dt(16);
  REQUIRE(ts_sedt(v, dt.data()) == TS_OK);
  CHECK(dt[5] == -1.0);
  CHECK(dt[0] == doctest::Approx(std::sqrt(2.0)));
  ts_diagram* d = nullptr;
  REQUIRE(ts_volume_persistence(v, 1, &d) == TS_OK);
  CHECK(ts_diagram_size(d) >= 1);
  ts_diagram_free(d);

  const std::string path = temp_path("vol.pgm");
  REQUIRE(ts_volume_write_pgm(v, path.c_str()) == TS_OK);
  ts_volume* back = nullptr;
  REQUIRE(ts_volume_read(path.c_str(), &back) == TS_OK);
  CHECK(ts_volume_extent(back, 0) == 4);
  CHECK(std::vector<uint8_t>(ts_volume_phase(back), ts_volume_phase(back) + 16) == phase);
  std::remove(path.c_str());
  ts_volume_free(back);
  ts_volume_free(v);

  std::vector<uint8_t> solid(16, 1);
  REQUIRE(ts_volume_create(2, ext, solid.data(), &v) == TS_OK);
  CHECK(ts_sedt(v, dt.data()) == TS_DEGENERATE_VOLUME);
  ts_volume_free(v);

  ts_rock_spec spec;
  ts_rock_spec_default(&spec);
  CHECK(spec.seeds == 180);
  spec.width = spec.height = 64;
  REQUIRE(ts_pseudo_rock(&spec, 3, &v) == TS_OK);
  CHECK(ts_volume_ndim(v) == 2);
  ts_volume_free(v);
}

TEST_CASE("images, distances and tests") {
  std::vector<ts_diagram*> diagrams;
  std::vector<int> labels;
  for (int k = 0; k < 5; ++k) {
    diagrams.push_back(one_loop(0.2 + 0.01 * k, 0.9 + 0.02 * k));
    labels.push_back(1);
  }
  for (int k = 0; k < 5; ++k) {
    diagrams.push_back(one_loop(0.2 + 0.01 * k, 1.6 + 0.02 * k));
    labels.push_back(2);
  }
  const size_t n = diagrams.size();

  double dist = -1;
  REQUIRE(ts_distance(diagrams[0], diagrams[5], 1, TS_METRIC_WASSERSTEIN, 1.0, &dist) == TS_OK);
  CHECK(dist == doctest::Approx(0.7));
  REQUIRE(ts_distance(diagrams[0], diagrams[5], 1, TS_METRIC_BOTTLENECK, 1.0, &dist) == TS_OK);
  CHECK(dist == doctest::Approx(0.7));
  std::vector<double> mat(n * n);
  REQUIRE(ts_distance_matrix(diagrams.data(), n, 1, TS_METRIC_WASSERSTEIN, 1.0, mat.data()) == TS_OK);
  CHECK(mat[0 * n + 5] == doctest::Approx(0.7));
  CHECK(mat[5 * n + 0] == mat[0 * n + 5]);
  CHECK(mat[3 * n + 3] == 0.0);

  ts_grid grid{0.0, 2.0, 0.0, 2.0, 20, 20};
  std::vector<ts_image*> images(n);
  for (size_t k = 0; k < n; ++k)
    REQUIRE(ts_persistence_image(diagrams[k], 1, &grid, TS_WEIGHT_CONSTANT, 0.0, 2.0, &images[k]) == TS_OK);
  ts_grid g{};
  REQUIRE(ts_image_grid(images[0], &g) == TS_OK);
  CHECK(g.nx == 20);
  CHECK(ts_image_dim(images[0]) == 1);
  CHECK(ts_image_inf_cap(images[0]) == 2.0);

  ts_filter_config cfg;
  ts_filter_config_default(&cfg);
  cfg.threshold = 50.0;
  ts_test_result* res = nullptr;
  REQUIRE(ts_two_stage(images.data(), n, labels.data(), &cfg, &res) == TS_OK);
  CHECK(ts_result_nx(res) == 20);
  CHECK(ts_result_tested(res) > 0);
  CHECK(ts_result_min_q(res) < 0.05);
  CHECK(ts_result_rejections(res, 0.05) > 0);
  std::vector<double> q(400);
  REQUIRE(ts_result_qvalues(res, q.data()) == TS_OK);
  ts_element_status st;
  double fs, t, p, qq;
  REQUIRE(ts_result_element(res, 3, 4, &st, &fs, &t, &p, &qq) == TS_OK);
  CHECK(qq == q[4 * 20 + 3]);
  ts_result_free(res);

  const int bad_labels[] = {1, 1, 1, 1, 1, 1, 1, 1, 1, 3};
  CHECK(ts_two_stage(images.data(), n, bad_labels, &cfg, &res) == TS_INVALID_LABELS);

  ts_permutation_summary summary{};
  std::vector<double> losses(30);
  REQUIRE(ts_permutation_test(diagrams.data(), n, labels.data(), 1, TS_METRIC_WASSERSTEIN, 1.0, 30, 7, &summary,
                              losses.data()) == TS_OK);
  CHECK(summary.p == 0.0);
  CHECK(summary.shuffles == 30);
  for (double l : losses) CHECK(l >= summary.unshuffled_loss);

  ts_diagram* capped = one_loop(0.1, 0.9);
  ts_image* img = nullptr;
  CHECK(ts_persistence_image(capped, 1, &grid, TS_WEIGHT_LINEAR, 0.0, 0.05, &img) == TS_INVALID_CAP);
  ts_diagram_free(capped);

  for (auto* i : images) ts_image_free(i);
  for (auto* d : diagrams) ts_diagram_free(d);
}

TEST_CASE("statistics") {
  const double x[] = {1, 2, 3}, y[] = {4, 5, 6};
  double t = 0, p = 0;
  REQUIRE(ts_pooled_t(x, 3, y, 3, &t, &p) == TS_OK);
  CHECK(t == doctest::Approx(-3.6742).epsilon(1e-4));
  CHECK(p == doctest::Approx(0.02131).epsilon(1e-3));
  const double pv[] = {0.01, 0.02, 0.9};
  double q[3];
  REQUIRE(ts_qvalues(pv, 3, 0.5, q) == TS_OK);
  CHECK(q[2] == doctest::Approx(0.6));
  REQUIRE(ts_bh_adjust(pv, 2, q) == TS_OK);
  CHECK(q[0] == doctest::Approx(0.02));
}

TEST_CASE("experiment entry points return json") {
  char* out = nullptr;
  REQUIRE(ts_power_experiment(R"({"seed": 3, "reps": 2, "sigmas": [0.05], "weights": ["constant"],
                                  "filters": ["mean"], "thresholds": [50]})",
                              &out) == TS_OK);
  const auto power = nlohmann::json::parse(out);
  ts_string_free(out);
  CHECK(power["config"]["seed"] == 3);
  CHECK(power["rows"].size() == 1);
  CHECK(power["rows"][0]["reps"] == 2);

  CHECK(ts_power_experiment(R"({"reps": 2})", &out) == TS_INVALID_INPUT);
  CHECK(ts_power_experiment("{not json", &out) == TS_INVALID_INPUT);

  REQUIRE(ts_scenario_experiment(R"({"seed": 1, "n_per_group": 2, "shuffles": 0, "resolution": 8,
                                     "group_a": {"M": 20, "S": 5, "width": 40, "height": 40},
                                     "group_b": {"M": 30, "S": 5, "width": 40, "height": 40}})",
                                 &out) == TS_OK);
  const auto sc = nlohmann::json::parse(out);
  ts_string_free(out);
  CHECK(sc["dims"].size() == 2);
  CHECK(sc["dims"][0]["permutation"].is_null());
  CHECK(sc["config"]["group_b"]["M"] == 30);
}
