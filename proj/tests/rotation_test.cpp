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

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "siegel/errors.hpp"
#include "siegel/rotation.hpp"

namespace rot = siegel::rotation;
using rot::RotationNumber;

namespace {

const RotationNumber kGolden = RotationNumber::golden();
const RotationNumber kTwoGolden = RotationNumber::golden_tail({2});
const RotationNumber kBig = RotationNumber::golden_tail({1, 1000});

}  // namespace

TEST_CASE("value matches a 60-term truncation") {
  for (const auto& theta : {kGolden, kTwoGolden, kBig, RotationNumber::golden_tail({3, 7, 2})}) {
    const long double truncated = oracle::truncated_value(theta, 60);
    CHECK(std::abs(theta.value() - static_cast<double>(truncated)) < 1e-14);
  }
  CHECK(kGolden.value() == doctest::Approx((std::sqrt(5.0) - 1.0) / 2.0).epsilon(1e-15));
}

TEST_CASE("parse and print round-trip") {
  for (const char* text : {"[0;(1)*]", "[0;1,1000,(1)*]", "[0;2,(1)*]", "[0;2,3]", "[0;7,1,1,(1)*]"}) {
    CHECK(RotationNumber::parse(text).to_string() == text);
  }
  CHECK(RotationNumber::parse("[0;1,1000,(1)*]") == kBig);
  CHECK(RotationNumber::parse("[0;2,3]").tail() == rot::Tail::Finite);
  for (const char* bad : {"", "[0;]", "[1;2]", "[0;0,(1)*]", "[0;(1)*,2]", "[0;2,]", "0;2", "[0;x]",
                          "[0;1]"}) {
    CHECK_THROWS_AS(RotationNumber::parse(bad), siegel::ParseError);
  }
}

TEST_CASE("golden mean closest returns use the a_1 = 1 shift") {
  const auto table = rot::convergents(kGolden, 4);
  CHECK(table.convention_a1());
  std::vector<std::int64_t> q;
  for (const auto& e : table.entries()) q.push_back(e.q);
  CHECK(q == std::vector<std::int64_t>{1, 2, 3, 5});
  // Oracle: record-minimum denominators of ||j theta|| over j <= 10^4.
  const auto records = oracle::closest_return_denominators(kGolden, 10000);
  REQUIRE(records.size() >= 4);
  CHECK(std::equal(q.begin(), q.end(), records.begin()));
}

TEST_CASE("closest returns agree with brute-force best approximations") {
  for (const auto& theta : {kTwoGolden, kBig, RotationNumber::golden_tail({3, 7, 2}),
                            RotationNumber::golden_tail({1, 5, 1, 4})}) {
    const auto records = oracle::closest_return_denominators(theta, 10000);
    const auto table = rot::convergents(theta, static_cast<int>(records.size()));
    for (std::size_t m = 0; m < records.size(); ++m) {
      CHECK(table.q(static_cast<int>(m)) == records[m]);
    }
    CHECK(table.q(0) == 1);
  }
}

TEST_CASE("closest-return invariants up to level 30") {
  for (const auto& theta : {kGolden, kTwoGolden, kBig}) {
    const auto table = rot::convergents(theta, 32);
    for (int m = 0; m <= 30; ++m) {
      const double l = table.length(m);
      const double q_next = static_cast<double>(table.q(m + 1));
      CHECK(0.5 / q_next < l);
      CHECK(l < 1.0 / q_next);
      CHECK(table.at(m).signed_return * table.at(m + 1).signed_return < 0.0);
      CHECK(table.length(m + 1) < l);
      if (m >= 1) CHECK(table.q(m + 1) > table.q(m));
    }
    // The exact identity q_{m+1} l_m + q_m l_{m+1} = 1.
    for (int m = 0; m <= 30; ++m) {
      const double lhs = static_cast<double>(table.q(m + 1)) * table.length(m) +
                         static_cast<double>(table.q(m)) * table.length(m + 1);
      CHECK(lhs == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("closest returns reject rational input") {
  CHECK_THROWS_AS(rot::convergents(RotationNumber::finite({2, 3}), 3), siegel::DomainError);
  CHECK_THROWS_AS(rot::convergents(kGolden, 0), siegel::DomainError);
}

TEST_CASE("rotate and combinatorial distance") {
  CHECK(rot::rotate(0.25, 0.5) == doctest::Approx(0.75));
  CHECK(rot::rotate(0.9, 0.2) == doctest::Approx(0.1));
  CHECK(rot::rotate(0.3, -0.5) == doctest::Approx(0.8));
  CHECK(rot::comb_distance(0.0, 0.5) == doctest::Approx(0.5));
  CHECK(rot::comb_distance(0.1, 0.9) == doctest::Approx(0.2));
  CHECK(rot::comb_distance(0.37, 0.37) == 0.0);
  CHECK(rot::wrap(-1e-18) < 1.0);

  // q_m-fold rotation by theta moves a point by theta_m.
  const auto table = rot::convergents(kTwoGolden, 8);
  for (int m = 0; m < 8; ++m) {
    double x = 0.123;
    for (std::int64_t i = 0; i < table.q(m); ++i) x = rot::rotate(x, kTwoGolden.value());
    CHECK(rot::wrap(x - 0.123 - table.at(m).signed_return + 0.5) - 0.5 ==
          doctest::Approx(0.0).epsilon(1e-12).scale(1.0));
  }
}

TEST_CASE("orbit angle agrees with extended-precision multiplication") {
  for (const auto& theta : {kGolden, kBig, RotationNumber::golden_tail({4, 2, 9})}) {
    const long double t = oracle::truncated_value(theta, 60);
    for (std::int64_t j : {0LL, 1LL, 2LL, 17LL, 1000LL, 99991LL, 400000LL}) {
      long double naive = t * static_cast<long double>(j);
      naive -= std::floor(naive);
      CHECK(rot::comb_distance(rot::orbit_angle(theta, j), static_cast<double>(naive)) < 1e-13);
    }
  }
}

TEST_CASE("scale_interval") {
  const rot::CombinatorialInterval unit{0.0, 0.1, std::nullopt};
  const auto tripled = rot::scale_interval(unit, 3.0);
  CHECK_FALSE(tripled.saturated);
  CHECK(tripled.interval.left == doctest::Approx(0.9));
  CHECK(tripled.interval.length == doctest::Approx(0.3));
  CHECK(tripled.interval.contains(0.95));
  CHECK(tripled.interval.contains(0.15));
  CHECK_FALSE(tripled.interval.contains(0.5));

  const auto same = rot::scale_interval(unit, 1.0);
  CHECK(same.interval.left == 0.0);
  CHECK(same.interval.length == 0.1);

  const auto full = rot::scale_interval({0.2, 0.3, std::nullopt}, 4.0);
  CHECK(full.saturated);
  CHECK(full.interval.length == 1.0);
}

TEST_CASE("spread around a level-m interval") {
  const auto table = rot::convergents(kGolden, 3);
  const auto interval = rot::level_interval(table, 0.0, 0);
  const auto pieces = rot::spread_around(interval, kGolden);
  CHECK(pieces.size() == 2);
  CHECK(pieces.front().iterate == 0);

  rot::CombinatorialInterval no_level{0.0, table.length(0), std::nullopt};
  CHECK_THROWS_AS(rot::spread_around(no_level, kGolden), siegel::DomainError);

  for (const auto& theta : {kGolden, kTwoGolden, kBig, RotationNumber::golden_tail({3, 1, 5})}) {
    const auto t = rot::convergents(theta, 10);
    for (int m = 0; m <= 6; ++m) {
      const auto spread = rot::spread_around(rot::level_interval(t, 0.31, m), theta);
      REQUIRE(static_cast<std::int64_t>(spread.size()) == t.q(m + 1));
      CHECK(static_cast<double>(spread.size()) * t.length(m) <= 1.0);
      std::size_t gaps = 0;
      for (std::size_t i = 0; i < spread.size(); ++i) {
        const auto& cur = spread[i].interval;
        const auto& nxt = spread[(i + 1) % spread.size()].interval;
        const double gap = rot::wrap(nxt.left - cur.right() + 0.5) - 0.5;
        // Disjoint interiors: never negative; either attached or one level-(m+1) gap.
        const bool attached = std::abs(gap) < 1e-12;
        const bool level_gap = std::abs(gap - t.length(m + 1)) < 1e-12;
        CHECK((attached || level_gap));
        if (level_gap) ++gaps;
      }
      CHECK(static_cast<std::int64_t>(gaps) == t.q(m));
    }
  }
}

TEST_CASE("diffeo-tiling has q_{m+1} cells of two lengths") {
  const auto golden = rot::diffeo_tiling(kGolden, 0.0, 1);
  CHECK(golden.cells.size() == 3);
  CHECK(golden.cells.front().left == 0.0);

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (const auto& theta : {kGolden, kTwoGolden, kBig, RotationNumber::golden_tail({2, 5, 3})}) {
    const auto table = rot::convergents(theta, 14);
    for (int m = 0; m <= 9; ++m) {
      const double c = unit(rng);
      const auto tiling = rot::diffeo_tiling(theta, c, m);
      CHECK(static_cast<std::int64_t>(tiling.cells.size()) == table.q(m + 1));
      double total = 0.0;
      std::set<rot::CellClass> classes;
      for (const auto& cell : tiling.cells) {
        total += cell.length;
        const auto cls = rot::classify_cell(table, m, cell.length);
        CHECK(cls != rot::CellClass::Other);
        classes.insert(cls);
      }
      CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
      CHECK(classes.size() <= 2);

      // Independent route: extended-precision orbit points, sorted gaps.
      const auto gaps = oracle::sorted_orbit_gaps(theta, c, table.q(m + 1));
      REQUIRE(gaps.size() == tiling.cells.size());
      for (std::size_t k = 0; k < gaps.size(); ++k) {
        CHECK(std::abs(gaps[k] - tiling.cells[k].length) < 1e-12);
      }
    }
  }
}
