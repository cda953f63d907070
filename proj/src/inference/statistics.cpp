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
#include <numeric>

#include <boost/math/distributions/students_t.hpp>

#include "topostat/error.hpp"
#include "topostat/inference.hpp"

namespace topostat {

namespace {

struct Moments {
  double mean = 0.0;
  double var = 0.0;  // divisor n - 1
  double n = 0.0;
};

Moments moments(std::span<const double> x) {
  Moments m;
  m.n = double(x.size());
  for (double v : x) m.mean += v;
  m.mean /= m.n;
  for (double v : x) m.var += (v - m.mean) * (v - m.mean);
  m.var /= (m.n - 1.0);
  return m;
}

TTestResult degenerate(double diff) {
  if (diff == 0.0) return {0.0, 1.0, true};
  return {diff > 0.0 ? kInfinity : -kInfinity, 0.0, true};
}

}  // namespace

double student_t_two_sided(double t, double df) {
  if (std::isnan(t)) return 1.0;
  if (std::isinf(t)) return 0.0;
  const boost::math::students_t dist(df);
  return std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t))));
}

TTestResult pooled_t(std::span<const double> x, std::span<const double> y) {
  if (x.size() < 2 || y.size() < 2) fail(ErrorCode::InvalidInput, "t-test needs at least two values per sample");
  const auto mx = moments(x), my = moments(y);
  const double df = mx.n + my.n - 2.0;
  const double sp2 = ((mx.n - 1.0) * mx.var + (my.n - 1.0) * my.var) / df;
  const double diff = mx.mean - my.mean;
  if (!(sp2 > 0.0)) return degenerate(diff);
  const double t = diff / std::sqrt(sp2 * (1.0 / mx.n + 1.0 / my.n));
  return {t, student_t_two_sided(t, df), false};
}

TTestResult welch_t(std::span<const double> x, std::span<const double> y) {
  if (x.size() < 2 || y.size() < 2) fail(ErrorCode::InvalidInput, "t-test needs at least two values per sample");
  const auto mx = moments(x), my = moments(y);
  const double vx = mx.var / mx.n, vy = my.var / my.n;
  const double diff = mx.mean - my.mean;
  if (!(vx + vy > 0.0)) return degenerate(diff);
  const double t = diff / std::sqrt(vx + vy);
  const double df = (vx + vy) * (vx + vy) / (vx * vx / (mx.n - 1.0) + vy * vy / (my.n - 1.0));
  return {t, student_t_two_sided(t, df), false};
}

double percentile(std::span<const double> values, double c) {
  if (values.empty()) fail(ErrorCode::InvalidInput, "percentile of an empty set");
  if (!(c >= 0.0 && c <= 100.0)) fail(ErrorCode::InvalidInput, "percentile must lie in [0, 100]");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double h = double(sorted.size() - 1) * c / 100.0;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] + (h - double(lo)) * (sorted[lo + 1] - sorted[lo]);
}

double storey_pi0(std::span<const double> p, double lambda) {
  if (!(lambda > 0.0 && lambda < 1.0)) fail(ErrorCode::InvalidInput, "lambda must lie in (0, 1)");
  if (p.empty()) return 1.0;
  const auto above = std::count_if(p.begin(), p.end(), [lambda](double v) { return v > lambda; });
  return std::min(1.0, double(above) / (double(p.size()) * (1.0 - lambda)));
}

std::vector<double> storey_qvalues(std::span<const double> p, double lambda, std::optional<double> pi0) {
  for (double v : p)
    if (!(v >= 0.0 && v <= 1.0)) fail(ErrorCode::InvalidInput, "p-values must lie in [0, 1]");
  const double scale = pi0 ? *pi0 : storey_pi0(p, lambda);
  if (!(scale >= 0.0 && scale <= 1.0)) fail(ErrorCode::InvalidInput, "pi0 must lie in [0, 1]");
  const std::size_t m = p.size();
  std::vector<double> q(m);
  if (m == 0) return q;

  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return p[a] < p[b]; });

  double running = kInfinity;
  for (std::size_t r = m; r-- > 0;) {
    const double bh = double(m) * p[order[r]] / double(r + 1);
    running = std::min(running, bh);
    q[order[r]] = std::min(1.0, scale * running);
  }
  return q;
}

std::vector<double> bh_adjust(std::span<const double> p) { return storey_qvalues(p, 0.5, 1.0); }

}  // namespace topostat
