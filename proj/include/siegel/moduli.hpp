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

// Fixed-point multiplier coordinates on quadratic rational maps and the
// normal form f(z) = z (z + rho1) / (rho2 z + 1).

#pragma once

#include <array>
#include <complex>
#include <string>
#include <string_view>

namespace siegel::moduli {

using Complex = std::complex<double>;

inline constexpr double kDegenerateTol = 1e-12;

struct RiemannSpherePoint {
  Complex z{0.0, 0.0};
  bool infinite = false;

  static RiemannSpherePoint finite(Complex value) { return {value, false}; }
  static RiemannSpherePoint infinity() { return {{0.0, 0.0}, true}; }
};

// Chordal distance on the Riemann sphere (diameter 2 normalization).
double chordal_distance(const RiemannSpherePoint& a, const RiemannSpherePoint& b);

struct QuadraticMultiplierPoint {
  Complex rho1;
  Complex rho2;
  Complex rho3;      // NaN when degenerate
  bool degenerate;   // |1 - rho1 rho2| < 1e-12
};

// rho3 = (2 - rho1 - rho2) / (1 - rho1 rho2), from the holomorphic index formula.
QuadraticMultiplierPoint multiplier_point(Complex rho1, Complex rho2);

// rho1 rho2 rho3 - (rho1 + rho2 + rho3) + 2.
Complex index_residual(const QuadraticMultiplierPoint& p);

// "rho1=a+bi rho2=c+di"
QuadraticMultiplierPoint parse_multiplier_point(std::string_view text);
std::string format_multiplier_point(const QuadraticMultiplierPoint& p);
Complex parse_complex(std::string_view text);
std::string format_complex(Complex z);

enum class Chart { Z, W };  // W is the chart w = 1/z at infinity

class NormalFormMap {
 public:
  Complex rho1() const { return rho1_; }
  Complex rho2() const { return rho2_; }

  // (0, infinity, (1 - rho1) / (1 - rho2)).
  std::array<RiemannSpherePoint, 3> fixed_points() const;
  // Roots of rho2 z^2 + 2 z + rho1; the second is infinity when rho2 = 0.
  std::array<RiemannSpherePoint, 2> critical_points() const;

  // Multipliers at the three marked fixed points, each in its own chart.
  std::array<Complex, 3> multipliers() const;

  // f in the z chart (z finite); returns infinity at poles.
  RiemannSpherePoint eval_z_chart(Complex z) const;
  // f read in the chart w = 1/z on both sides: g(w) = w (w + rho2) / (rho1 w + 1),
  // returned as a point of the z sphere.
  RiemannSpherePoint eval_w_chart(Complex w) const;
  // f' in the z chart at a finite non-pole point.
  Complex derivative(Complex z) const;

  friend NormalFormMap normal_form(const QuadraticMultiplierPoint& p);
  static NormalFormMap from_coefficients(Complex rho1, Complex rho2);

 private:
  NormalFormMap(Complex rho1, Complex rho2) : rho1_(rho1), rho2_(rho2) {}
  Complex rho1_;
  Complex rho2_;
};

// Throws DegenerateParameter when rho1 rho2 = 1 or when rho1 or rho2 equals 1
// (the third fixed point would collide with 0 or infinity).
NormalFormMap normal_form(const QuadraticMultiplierPoint& p);

// Evaluates f with chart switching: |z| > 2 goes through w = 1/z.
RiemannSpherePoint evaluate(const NormalFormMap& f, const RiemannSpherePoint& z);

// For unimodular rho1, rho2: true iff |rho2 - conj(rho1)| < tol.
bool is_obstructed_direction(Complex rho1, Complex rho2, double tol);

}  // namespace siegel::moduli
