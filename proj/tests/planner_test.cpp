// Copyright 2026 The Siegel Lab Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <complex>
#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "siegel/errors.hpp"
#include "siegel/planner.hpp"

namespace pl = siegel::planner;
namespace rot = siegel::rotation;

namespace {

// l_m = ||q_m theta|| from the record minima of ||j theta||, in long double.
std::vector<double> oracle_lengths(const rot::RotationNumber& theta, int count) {
  const auto q = oracle::closest_return_denominators(theta, 1000);
  const long double x = oracle::truncated_value(theta, 60);
  std::vector<double> out;
  for (int m = 0; m < count; ++m) {
    const long double v = static_cast<long double>(q[static_cast<std::size_t>(m)]) * x;
    const long double frac = v - std::floor(v);
    out.push_back(static_cast<double>(std::min(frac, 1.0L - frac)));
  }
  return out;
}

}  // namespace

TEST_CASE("transition level brackets K_F") {
  const auto g = rot::RotationNumber::golden();
  CHECK(pl::transition_level(g, 50.0, 100.0, 20) == -2);
  CHECK(pl::transition_level(g, 100.0, 100.0, 20) == -2);

  const auto l = oracle_lengths(g, 10);
  const double eps = 1e-9;
  // K / l_2 < K_F <= K / l_3 puts the transition at level 2; just past K / l_3 it is 3.
  CHECK(pl::transition_level(g, 10.0 / l[3] * (1.0 - eps), 10.0, 20) == 2);
  CHECK(pl::transition_level(g, 10.0 / l[3] * (1.0 + eps), 10.0, 20) == 3);
  CHECK(pl::transition_level(g, 10.0 * (1.0 + eps), 10.0, 20) == -1);

  int previous = -2;
  for (int k = 0; k < 200; ++k) {
    const double k_f = 5.0 * std::pow(1.03, k);
    const int m = pl::transition_level(g, k_f, 10.0, 40);
    CHECK(m >= previous);
    REQUIRE(m + 1 < 10);
    if (m >= 0) {
      CHECK(10.0 / l[static_cast<std::size_t>(m)] < k_f * (1.0 + 1e-12));
      CHECK(k_f <= 10.0 / l[static_cast<std::size_t>(m + 1)] * (1.0 + 1e-12));
    }
    previous = m;
  }
  CHECK_THROWS_AS(pl::transition_level(g, 1e12, 10.0, 5), siegel::DepthExceeded);
}

TEST_CASE("golden mean needs no regularization") {
  const auto g = rot::RotationNumber::golden();
  for (double big_m : {4.0, 10.0, 100.0}) {
    for (double k_f : {1.0, 50.0, 100.0}) {
      pl::Thresholds t;
      t.big_m = big_m;
      const auto plan = pl::build_plan(g, k_f, t, 30);
      CHECK(plan.trivial());
      CHECK(plan.transition_level == -2);
      CHECK(plan.failures.empty());
      for (const auto& rec : plan.levels) CHECK(rec.regime == pl::Regime::A);
    }
  }
  // The largest consecutive ratio over depth 30 stays below 4.
  const auto table = rot::convergents(g, 30);
  double worst = 0.0;
  for (int m = -1; m + 1 < 30; ++m) worst = std::max(worst, table.length(m) / table.length(m + 1));
  CHECK(worst < 4.0);
}

TEST_CASE("a single large partial quotient gives one near-parabolic level") {
  const auto theta = rot::RotationNumber::parse("[0;1,1000,(1)*]");
  const auto plan = pl::build_plan(theta, 10.0, pl::Thresholds{}, 30);
  const auto np = plan.near_parabolic_levels();
  REQUIRE(np.size() == 1);
  const auto& rec = plan.level(np[0]);
  const double e = std::exp(std::sqrt(std::log(10.0)));
  CHECK(rec.length / rec.next_length > 500.0);
  CHECK(rec.fjord_offset_cells == static_cast<std::int64_t>(std::floor(e)));
  CHECK(rec.fjord_offset_cells == 4);
  CHECK(rec.inner_buffer_cells == static_cast<std::int64_t>(std::floor(e / 8.0)));
  CHECK(rec.outer_mark_cells == static_cast<std::int64_t>(std::floor(e / 64.0)));
  CHECK(rec.outer_mark_cells <= rec.inner_buffer_cells);
  CHECK(rec.inner_buffer_cells <= rec.fjord_offset_cells);
  CHECK(rec.fjord_offset_length() < rec.length / 4.0);
  CHECK(plan.failures.empty());

  // With a large M the offsets separate strictly.
  pl::Thresholds big;
  big.big_m = 1e9;
  big.v = 2.0;
  big.w = 20.0;
  const double base = std::exp(std::sqrt(std::log(1e9)));
  CHECK(pl::fjord_offset_cells(1e9) == static_cast<std::int64_t>(std::floor(base)));
  CHECK(pl::outer_mark_cells(1e9, big.w) < pl::inner_buffer_cells(1e9, big.v));
  CHECK(pl::inner_buffer_cells(1e9, big.v) < pl::fjord_offset_cells(1e9));
}

TEST_CASE("thresholds follow the transition level") {
  const auto theta = rot::RotationNumber::parse("[0;3,50,2,200,7,1000,(1)*]");
  const auto table = rot::convergents(theta, 20);
  const double k_f = 100.0 / table.length(3) * 0.999;
  pl::Thresholds t;
  const auto plan = pl::build_plan(theta, k_f, t, 20);
  REQUIRE(plan.transition_level == 2);
  for (const auto& rec : plan.levels) {
    if (rec.m > 2) {
      CHECK(rec.threshold == pl::Extended::of(10.0));
      CHECK(rec.regime == pl::Regime::A);
    } else if (rec.m == 2) {
      CHECK(rec.threshold == pl::Extended::of(std::max(10.0, rec.length * k_f)));
      CHECK(rec.regime == pl::Regime::C);
    } else {
      CHECK(rec.threshold.infinite);
      CHECK_FALSE(rec.near_parabolic);
      CHECK(rec.regime == pl::Regime::B);
    }
    if (!rec.threshold.infinite) {
      CHECK(rec.near_parabolic == (rec.length > rec.threshold.value * rec.next_length));
    }
  }

  pl::Thresholds bad;
  bad.v = 70.0;
  CHECK_THROWS_AS(pl::build_plan(theta, k_f, bad, 20), siegel::InvalidThresholds);
  pl::Thresholds low;
  low.big_m = 1.5;
  CHECK_THROWS_AS(pl::build_plan(theta, k_f, low, 20), siegel::InvalidThresholds);
  pl::Thresholds wrong_h;
  wrong_h.h = [](double) { return 1.0; };
  CHECK_THROWS_AS(pl::build_plan(theta, 100.0 / table.length(0) * 1.0001, wrong_h, 20),
                  siegel::InvalidThresholds);
}

TEST_CASE("stability constants") {
  const auto g = rot::RotationNumber::golden();
  const auto trivial = pl::build_plan(g, 1.0, pl::Thresholds{}, 20);
  const auto report = pl::stability_report(trivial);
  CHECK(report.intervals.empty());
  for (const auto& k : report.k_by_level) CHECK(k.infinite);

  auto plan = trivial;
  plan.levels[3].near_parabolic = true;
  plan.levels[3].outer_mark_cells = 50;
  const auto one = pl::stability_report(plan);
  REQUIRE(one.intervals.size() == 1);
  CHECK(one.intervals[0].k == 48.0);
  CHECK(one.k_at(plan, plan.levels[3].m) == pl::Extended::of(48.0));
  CHECK(one.k_at(plan, plan.levels[0].m) == pl::Extended::of(48.0));
  CHECK(one.k_at(plan, plan.levels[4].m).infinite);

  // Larger M never lowers stability; larger w never raises it.
  const auto theta = rot::RotationNumber::parse("[0;3,50,2,200,7,1000,2,5000,(1)*]");
  for (double k_f : {5.0, 1e3, 1e5}) {
    std::vector<pl::Extended> previous;
    for (double big_m = 2.0; big_m <= 4096.0; big_m *= 2.0) {
      pl::Thresholds t;
      t.big_m = big_m;
      t.v = 1.5;
      t.w = 2.0;
      const auto r = pl::stability_report(pl::build_plan(theta, k_f, t, 16));
      if (!previous.empty()) {
        for (std::size_t i = 0; i < previous.size(); ++i) CHECK_FALSE(r.k_by_level[i] < previous[i]);
      }
      previous = r.k_by_level;
    }
    previous.clear();
    for (double w = 2.0; w <= 64.0; w *= 2.0) {
      pl::Thresholds t;
      t.big_m = 1e6;
      t.v = 1.5;
      t.w = w;
      const auto r = pl::stability_report(pl::build_plan(theta, k_f, t, 16));
      if (!previous.empty()) {
        for (std::size_t i = 0; i < previous.size(); ++i) CHECK_FALSE(previous[i] < r.k_by_level[i]);
      }
      previous = r.k_by_level;
    }
  }
}

TEST_CASE("width regimes partition the levels") {
  const auto g = rot::RotationNumber::golden();
  const auto table = rot::convergents(g, 30);
  const double k_f = 10.0 / table.length(5);
  pl::Thresholds t;
  t.big_k = 10.0;
  const auto plan = pl::build_plan(g, k_f, t, 30);
  const int m_f = plan.transition_level;
  REQUIRE(m_f == 4);

  const auto a = pl::predicted_width_regime(plan, m_f + 3, plan.level(m_f + 3).length);
  CHECK(a.regime == pl::Regime::A);
  CHECK(a.vertical_driver == 1.0);
  CHECK(a.peripheral_driver == 1.0);

  const auto& rb = plan.level(m_f - 2);
  const auto b = pl::predicted_width_regime(plan, m_f - 2, rb.length);
  CHECK(b.regime == pl::Regime::B);
  CHECK(b.vertical_driver == doctest::Approx(rb.length * k_f));
  CHECK(b.vertical_driver >= 1.0);

  const auto& rc = plan.level(m_f);
  const auto c = pl::predicted_width_regime(plan, m_f, 0.5 * (rc.length + rc.next_length));
  CHECK(c.regime == pl::Regime::C);
  CHECK(c.peripheral_driver == doctest::Approx(std::sqrt(rc.length * k_f)));
  CHECK(c.merged_vertical == doctest::Approx(rc.length * k_f + 1.0));
  CHECK(c.merged_peripheral == doctest::Approx(std::sqrt(rc.length * k_f) + 1.0));

  int counts[3] = {0, 0, 0};
  for (const auto& rec : plan.levels) {
    const auto p = pl::predicted_width_regime(plan, rec.m, rec.length);
    const int expected = rec.m > m_f ? 0 : (rec.m < m_f ? 1 : 2);
    CHECK(static_cast<int>(p.regime) == expected);
    ++counts[static_cast<int>(p.regime)];
  }
  CHECK(counts[0] + counts[1] + counts[2] == static_cast<int>(plan.levels.size()));
  CHECK(counts[2] == 1);
  CHECK_THROWS_AS(pl::predicted_width_regime(plan, m_f, rc.next_length), siegel::DomainError);
}

TEST_CASE("geodesic dams are orthogonal to the unit circle") {
  for (auto [a, b] : {std::pair{0.1, 0.3}, std::pair{0.9, 0.05}, std::pair{0.25, 0.7}, std::pair{0.0, 0.01}}) {
    const pl::GeodesicDam dam(a, b);
    const auto line = dam.polyline();
    REQUIRE(line.size() == 256);
    const auto front = line.front().z;
    const auto back = line.back().z;
    CHECK(std::abs(front - std::polar(1.0, 2.0 * M_PI * a)) < 1e-12);
    CHECK(std::abs(back - std::polar(1.0, 2.0 * M_PI * b)) < 1e-12);
    for (const auto& p : line) {
      REQUIRE_FALSE(p.infinite);
      CHECK(std::abs(p.z) >= 1.0 - 1e-12);
    }
    for (auto [s, end] : {std::pair{0.0, front}, std::pair{1.0, back}}) {
      const double h = (s == 0.0) ? 1e-7 : -1e-7;
      const auto tangent = dam.point(s + h).z - end;
      // Orthogonal to the circle means parallel to the radius at the endpoint.
      const double angle = std::abs(std::arg(tangent / end));
      CHECK(std::min(angle, M_PI - angle) < 1e-6);
    }
  }
  const auto ray = pl::geodesic_dam(0.0, 0.5);
  for (const auto& p : ray) {
    if (p.infinite) continue;
    CHECK(std::abs(p.z.imag()) < 1e-12 * std::abs(p.z));
    CHECK(std::abs(p.z) >= 1.0 - 1e-12);
  }
  CHECK_THROWS_AS(pl::GeodesicDam(0.2, 1.2), siegel::DomainError);
}

TEST_CASE("plan CSV") {
  const auto plan = pl::build_plan(rot::RotationNumber::parse("[0;1,1000,(1)*]"), 10.0, pl::Thresholds{}, 8);
  std::ostringstream out;
  pl::write_plan_csv(out, plan);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line.rfind("m,length,M_m,near_parabolic", 0) == 0);
  int rows = 0, flagged = 0;
  while (std::getline(in, line)) {
    ++rows;
    if (line.find(",1,4,0,0,") != std::string::npos) ++flagged;
  }
  CHECK(rows == 8);
  CHECK(flagged == 1);
}
