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
#include <numbers>
#include <numeric>
#include <random>

#include "doctest.h"
#include "siegel/basin.hpp"
#include "siegel/errors.hpp"

namespace bas = siegel::basin;
namespace mod = siegel::moduli;
using bas::Complex;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kGolden = 0.6180339887498949;

// Closed-form critical point of F inside the disk, from F' numerator
// conj(rho) z^2 + 2 z + rho = 0 solved with the quadratic formula.
Complex quadratic_formula_critical_point(Complex rho) {
  if (rho == 0.0) return 0.0;
  const Complex s = std::sqrt(1.0 - std::norm(rho));
  return (-1.0 + s) / std::conj(rho);
}

}  // namespace

TEST_CASE("valuable-domain modulus") {
  CHECK(bas::valuable_domain_modulus(0.0) == doctest::Approx(std::log(2.0) / kTwoPi).epsilon(1e-15));
  CHECK(bas::valuable_domain_modulus(0.0) == doctest::Approx(0.110318).epsilon(1e-6));
  CHECK(bas::valuable_domain_modulus(0.8) == doctest::Approx(std::log(1.25) / kTwoPi).epsilon(1e-15));
  CHECK(bas::valuable_domain_modulus(Complex(0.0, 0.999999)) < 1e-6);
  CHECK_THROWS_AS(bas::valuable_domain_modulus(1.0), siegel::DomainError);

  // Constant on |rho| <= 1/2, then weakly decreasing and continuous.
  double prev = bas::valuable_domain_modulus(0.0);
  for (int k = 1; k < 1000; ++k) {
    const double r = k / 1000.0;
    const double m = bas::valuable_domain_modulus(std::polar(r, 0.3 * k));
    if (r <= 0.5) CHECK(m == prev);
    CHECK(m <= prev);
    CHECK(prev - m < 2e-3);
    prev = m;
  }
}

TEST_CASE("Blaschke model keeps the valuable disk invariant") {
  const auto zero = bas::blaschke_invariance_check(0.0, 1000);
  CHECK(zero.max_excess == doctest::Approx(-0.25));
  CHECK(zero.critical_inside);

  for (Complex rho : {Complex(0.5, 0.0), Complex(0.0, 0.9)}) {
    const auto report = bas::blaschke_invariance_check(rho, 1000);
    CHECK(report.max_excess <= 0.0);
    CHECK(report.critical_inside);
    const bas::BlaschkeModel model(rho);
    CHECK(std::abs(model.critical_point() - quadratic_formula_critical_point(rho)) < 1e-12);
  }

  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 100; ++k) {
    const Complex rho = std::polar(0.999 * std::sqrt(u(rng)), kTwoPi * u(rng));
    const auto report = bas::blaschke_invariance_check(rho, 1000);
    CHECK(report.max_excess <= 1e-10);
    CHECK(report.critical_inside);
  }
  CHECK_THROWS_AS(bas::blaschke_invariance_check(Complex(0.6, 0.8), 1000), siegel::DomainError);
}

TEST_CASE("z^2 basins split along the unit circle") {
  const auto f = mod::NormalFormMap::from_coefficients(0.0, 0.0);
  for (int k = 0; k < 64; ++k) {
    const double t = kTwoPi * k / 64.0;
    CHECK(bas::classify_point(f, mod::RiemannSpherePoint::finite(std::polar(0.5, t)), 100) ==
          bas::BasinLabel::Zero);
    CHECK(bas::classify_point(f, mod::RiemannSpherePoint::finite(std::polar(2.0, t)), 100) ==
          bas::BasinLabel::Infinity);
  }
  const auto image = bas::rasterize_basins(f, {-2, 2, -2, 2}, 64, 64, 100);
  for (int y = 0; y < 64; ++y) {
    for (int x = 0; x < 64; ++x) {
      const double r = std::abs(image.pixel_center(x, y));
      if (r < 0.95) CHECK(image.label(x, y) == bas::BasinLabel::Zero);
      if (r > 1.05) CHECK(image.label(x, y) == bas::BasinLabel::Infinity);
    }
  }
}

TEST_CASE("undecided pixels shrink with more iterations") {
  const auto f = mod::NormalFormMap::from_coefficients(Complex(0.2, 0.5), Complex(-0.3, 0.1));
  const bas::Viewport view{-3, 3, -3, 3};
  const auto coarse = bas::rasterize_basins(f, view, 96, 96, 100);
  const auto fine = bas::rasterize_basins(f, view, 96, 96, 200);
  CHECK(fine.undecided_fraction() <= coarse.undecided_fraction());

  // A parabolic-adjacent map leaves a visible undecided set at 100 iterations.
  const auto slow = mod::NormalFormMap::from_coefficients(std::polar(0.999, 0.2), 0.0);
  const auto a = bas::rasterize_basins(slow, {-1.5, 1.5, -1.5, 1.5}, 64, 64, 100);
  const auto b = bas::rasterize_basins(slow, {-1.5, 1.5, -1.5, 1.5}, 64, 64, 200);
  CHECK(a.undecided_fraction() > 0.0);
  CHECK(b.undecided_fraction() < a.undecided_fraction());
}

TEST_CASE("basin labels are invariant under the map") {
  const auto f = mod::NormalFormMap::from_coefficients(Complex(0.1, -0.6), Complex(0.4, 0.3));
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  int decided = 0;
  while (decided < 1000) {
    const auto z = mod::RiemannSpherePoint::finite(Complex(u(rng), u(rng)));
    const auto label = bas::classify_point(f, z, 400);
    if (label == bas::BasinLabel::Undecided) continue;
    ++decided;
    CHECK(bas::classify_point(f, mod::evaluate(f, z), 400) == label);
  }
}

TEST_CASE("rasterization does not depend on the thread count") {
  const auto f = mod::NormalFormMap::from_coefficients(Complex(0.2, 0.5), Complex(-0.3, 0.1));
  const auto one = bas::rasterize_basins(f, {}, 80, 60, 150, 1);
  const auto four = bas::rasterize_basins(f, {}, 80, 60, 150, 4);
  CHECK(one.labels() == four.labels());
  CHECK_THROWS_AS(bas::RasterImage(0, 5, {}), siegel::DomainError);
}

TEST_CASE("Siegel boundary orbit of a golden-mean fixed point") {
  const auto f = mod::NormalFormMap::from_coefficients(std::polar(1.0, kTwoPi * kGolden), 0.5);
  constexpr int n = 10000;
  const auto cloud = bas::siegel_boundary_orbit(f, bas::MarkedFixedPoint::Zero, n);
  REQUIRE(cloud.points.size() == n);
  CHECK(std::abs(cloud.orbit.front() - cloud.critical_point) == 0.0);

  // Forward invariance: each orbit point but the last maps onto the next one.
  for (int k = 0; k + 1 < n; ++k) {
    const auto image = mod::evaluate(f, mod::RiemannSpherePoint::finite(cloud.orbit[k]));
    CHECK(std::abs(image.z - cloud.orbit[k + 1]) < 1e-6);
  }

  double min_r = 1e300;
  for (int k = 0; k < 100; ++k) min_r = std::min(min_r, std::abs(cloud.orbit[k]));
  double max_r = 0.0;
  for (const auto& z : cloud.orbit) max_r = std::max(max_r, std::abs(z));
  CHECK(max_r < 10.0 * min_r);

  for (std::size_t k = 1; k < cloud.points.size(); ++k) {
    CHECK(std::arg(cloud.points[k - 1]) <= std::arg(cloud.points[k]) + kTwoPi);
  }

  // Ranking the orbit by argument reproduces the rigid rotation by g: the
  // normalized cyclic rank of f^k(c) stays close to k g mod 1.
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  const auto angle = [](Complex z) {
    const double a = std::arg(z) / kTwoPi;
    return a < 0.0 ? a + 1.0 : a;
  };
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return angle(cloud.orbit[a]) < angle(cloud.orbit[b]); });
  std::vector<int> rank(n);
  for (int r = 0; r < n; ++r) rank[order[r]] = r;
  double discrepancy = 0.0;
  for (int k = 0; k < n; ++k) {
    double pos = static_cast<double>(rank[k] - rank[0]) / n;
    pos -= std::floor(pos);
    double rigid = k * kGolden;
    rigid -= std::floor(rigid);
    const double d = std::abs(pos - rigid);
    discrepancy = std::max(discrepancy, std::min(d, 1.0 - d));
  }
  CHECK(discrepancy < 0.05);
  MESSAGE("rotation-coordinate discrepancy " << discrepancy);
}

TEST_CASE("Siegel orbit needs a critical point in the chart") {
  // rho2 = 0 puts a critical point at infinity, i.e. at the fixed point.
  const auto poly = mod::NormalFormMap::from_coefficients(std::polar(1.0, kTwoPi * kGolden), 0.0);
  const auto cloud = bas::siegel_boundary_orbit(poly, bas::MarkedFixedPoint::Infinity, 10);
  CHECK(std::abs(cloud.critical_point) > 0.0);
  CHECK_THROWS_AS(bas::siegel_boundary_orbit(poly, bas::MarkedFixedPoint::Zero, 0),
                  siegel::DomainError);
}
