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

// Test-only reference computations. Each one takes a different route from
// the library code it checks (brute force, extended precision, enumeration).

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "siegel/rotation.hpp"

namespace oracle {

// [0; a_1, ..., a_terms] evaluated bottom-up in long double.
inline long double truncated_value(const siegel::rotation::RotationNumber& theta, int terms) {
  long double x = 0.0L;
  for (int n = terms; n >= 1; --n) {
    const auto a = theta.coefficient(n);
    if (a == 0) {
      x = 0.0L;
      continue;
    }
    x = 1.0L / (static_cast<long double>(a) + x);
  }
  return x;
}

// Denominators j <= limit at which ||j theta|| attains a new record minimum.
inline std::vector<std::int64_t> closest_return_denominators(
    const siegel::rotation::RotationNumber& theta, std::int64_t limit) {
  const long double t = truncated_value(theta, 60);
  std::vector<std::int64_t> out;
  long double best = 1.0L;
  for (std::int64_t j = 1; j <= limit; ++j) {
    long double x = t * static_cast<long double>(j);
    x -= std::floor(x);
    const long double d = std::min(x, 1.0L - x);
    if (d < best) {
      best = d;
      out.push_back(j);
    }
  }
  return out;
}

// Gaps between consecutive points of {c - j theta : j < count}, listed
// counterclockwise starting at c.
inline std::vector<double> sorted_orbit_gaps(const siegel::rotation::RotationNumber& theta,
                                             double c, std::int64_t count) {
  const long double t = truncated_value(theta, 60);
  std::vector<long double> offsets;
  for (std::int64_t j = 0; j < count; ++j) {
    long double x = -t * static_cast<long double>(j);
    x -= std::floor(x);
    offsets.push_back(x);
  }
  std::sort(offsets.begin(), offsets.end());
  std::vector<double> gaps;
  for (std::size_t k = 0; k < offsets.size(); ++k) {
    const long double next = k + 1 < offsets.size() ? offsets[k + 1] : 1.0L;
    gaps.push_back(static_cast<double>(next - offsets[k]));
  }
  (void)c;  // gaps are translation invariant
  return gaps;
}

// Spectral radius of a 2x2 or 3x3 matrix from the roots of its characteristic
// polynomial (closed form for 2x2, Cardano/trigonometric or Durand-Kerner for 3x3).
inline double char_poly_spectral_radius(const std::vector<std::vector<double>>& a) {
  const std::size_t n = a.size();
  if (n == 1) return std::abs(a[0][0]);
  if (n == 2) {
    const std::complex<double> tr = a[0][0] + a[1][1];
    const std::complex<double> det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    const auto disc = std::sqrt(tr * tr - 4.0 * det);
    return std::max(std::abs((tr + disc) / 2.0), std::abs((tr - disc) / 2.0));
  }
  // 3x3: lambda^3 - c2 lambda^2 + c1 lambda - c0, roots via Durand-Kerner.
  const double c2 = a[0][0] + a[1][1] + a[2][2];
  const double c1 = a[0][0] * a[1][1] - a[0][1] * a[1][0] + a[0][0] * a[2][2] -
                    a[0][2] * a[2][0] + a[1][1] * a[2][2] - a[1][2] * a[2][1];
  const double c0 = a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
                    a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
                    a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
  const auto p = [&](std::complex<double> z) { return ((z - c2) * z + c1) * z - c0; };
  std::array<std::complex<double>, 3> r = {std::complex<double>(0.4, 0.9),
                                           std::complex<double>(0.4, 0.9) * std::complex<double>(0.4, 0.9),
                                           std::pow(std::complex<double>(0.4, 0.9), 3)};
  for (int it = 0; it < 2000; ++it) {
    for (std::size_t i = 0; i < 3; ++i) {
      std::complex<double> denom = 1.0;
      for (std::size_t j = 0; j < 3; ++j) {
        if (j != i) denom *= (r[i] - r[j]);
      }
      r[i] -= p(r[i]) / denom;
    }
  }
  double best = 0.0;
  for (const auto& z : r) best = std::max(best, std::abs(z));
  return best;
}

// Exhaustive search over the simplex {v >= 0, sum v = 1} on a grid of step
// 1/resolution for v with max_i |(M v - D v)_i| < tol. Works for n <= 3.
inline bool simplex_has_near_solution(const std::vector<std::vector<double>>& m,
                                      const std::vector<double>& d, int resolution, double tol) {
  const std::size_t n = d.size();
  const auto residual = [&](const std::array<double, 3>& v) {
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double r = -d[i] * v[i];
      for (std::size_t j = 0; j < n; ++j) r += m[i][j] * v[j];
      worst = std::max(worst, std::abs(r));
    }
    return worst;
  };
  for (int a = 0; a <= resolution; ++a) {
    for (int b = 0; a + b <= resolution; ++b) {
      const int c = resolution - a - b;
      if (n == 1 && (b != 0 || c != 0)) continue;
      if (n == 2 && c != 0) continue;
      const std::array<double, 3> v = {static_cast<double>(a) / resolution,
                                       static_cast<double>(b) / resolution,
                                       static_cast<double>(c) / resolution};
      if (residual(v) < tol) return true;
    }
  }
  return false;
}

// |log(rho_2 / rho_1)| for two disjoint circles after the Möbius map that
// makes them concentric. The limit points are found as the attracting fixed
// points of the two compositions of circle inversions.
inline double concentric_log_ratio(std::complex<double> a1, double r1, std::complex<double> a2,
                                   double r2) {
  using C = std::complex<long double>;
  const C c1(a1.real(), a1.imag());
  const C c2(a2.real(), a2.imag());
  const long double s1 = static_cast<long double>(r1) * r1;
  const long double s2 = static_cast<long double>(r2) * r2;
  auto inv1 = [&](C z) { return c1 + s1 / std::conj(z - c1); };
  auto inv2 = [&](C z) { return c2 + s2 / std::conj(z - c2); };
  C p = c1 + C(0.3L * r1, 0.1L * r1);
  C q = p;
  for (int k = 0; k < 400; ++k) {
    p = inv2(inv1(p));
    q = inv1(inv2(q));
  }
  auto modulus_on = [&](C center, long double radius) {
    const C z = center + C(radius, 0.0L);
    return std::abs((z - p) / (z - q));
  };
  return static_cast<double>(std::abs(std::log(modulus_on(c2, r2) / modulus_on(c1, r1))));
}

}  // namespace oracle
