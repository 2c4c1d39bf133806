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

#include "siegel/moduli.hpp"

#include <charconv>
#include <cmath>
#include <limits>

#include "siegel/errors.hpp"

namespace siegel::moduli {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kUnitTol = 1e-10;

double parse_real(std::string_view token, std::string_view whole) {
  double value = 0.0;
  const auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (token.empty() || ec != std::errc() || end != token.data() + token.size()) {
    throw ParseError("bad number in '" + std::string(whole) + "'");
  }
  return value;
}

std::string shortest(double x) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, end);
}

}  // namespace

double chordal_distance(const RiemannSpherePoint& a, const RiemannSpherePoint& b) {
  if (a.infinite && b.infinite) return 0.0;
  if (a.infinite || b.infinite) {
    const Complex z = a.infinite ? b.z : a.z;
    return 2.0 / std::sqrt(1.0 + std::norm(z));
  }
  return 2.0 * std::abs(a.z - b.z) /
         (std::sqrt(1.0 + std::norm(a.z)) * std::sqrt(1.0 + std::norm(b.z)));
}

QuadraticMultiplierPoint multiplier_point(Complex rho1, Complex rho2) {
  const Complex denom = 1.0 - rho1 * rho2;
  if (std::abs(denom) < kDegenerateTol) {
    return {rho1, rho2, Complex(kNaN, kNaN), true};
  }
  return {rho1, rho2, (2.0 - rho1 - rho2) / denom, false};
}

Complex index_residual(const QuadraticMultiplierPoint& p) {
  return p.rho1 * p.rho2 * p.rho3 - (p.rho1 + p.rho2 + p.rho3) + 2.0;
}

Complex parse_complex(std::string_view text) {
  if (text.empty()) throw ParseError("empty complex number");
  if (text.back() != 'i') return {parse_real(text, text), 0.0};
  std::string_view body = text.substr(0, text.size() - 1);
  // Split at the last sign that is not a leading sign or an exponent sign.
  std::size_t split = std::string_view::npos;
  for (std::size_t k = body.size(); k-- > 1;) {
    if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  const auto imag_of = [&](std::string_view tok) {
    if (tok.empty() || tok == "+") return 1.0;
    if (tok == "-") return -1.0;
    if (tok.front() == '+') tok.remove_prefix(1);
    return parse_real(tok, text);
  };
  if (split == std::string_view::npos) return {0.0, imag_of(body)};
  return {parse_real(body.substr(0, split), text), imag_of(body.substr(split))};
}

std::string format_complex(Complex z) {
  std::string out = shortest(z.real());
  const double im = z.imag();
  out += (std::signbit(im) ? "-" : "+");
  out += shortest(std::abs(im));
  out += 'i';
  return out;
}

QuadraticMultiplierPoint parse_multiplier_point(std::string_view text) {
  Complex rho[2];
  bool seen[2] = {false, false};
  std::size_t pos = 0;
  while (pos < text.size()) {
    while (pos < text.size() && text[pos] == ' ') ++pos;
    if (pos >= text.size()) break;
    const auto end = text.find(' ', pos);
    const std::string_view token = text.substr(pos, end == std::string_view::npos ? end : end - pos);
    int which = -1;
    if (token.rfind("rho1=", 0) == 0) which = 0;
    if (token.rfind("rho2=", 0) == 0) which = 1;
    if (which < 0 || seen[which]) {
      throw ParseError("expected 'rho1=a+bi rho2=c+di', got '" + std::string(text) + "'");
    }
    rho[which] = parse_complex(token.substr(5));
    seen[which] = true;
    pos = end == std::string_view::npos ? text.size() : end;
  }
  if (!seen[0] || !seen[1]) throw ParseError("missing rho1 or rho2 in '" + std::string(text) + "'");
  return multiplier_point(rho[0], rho[1]);
}

std::string format_multiplier_point(const QuadraticMultiplierPoint& p) {
  return "rho1=" + format_complex(p.rho1) + " rho2=" + format_complex(p.rho2);
}

NormalFormMap NormalFormMap::from_coefficients(Complex rho1, Complex rho2) {
  return normal_form(multiplier_point(rho1, rho2));
}

NormalFormMap normal_form(const QuadraticMultiplierPoint& p) {
  if (p.degenerate) throw DegenerateParameter("rho1 * rho2 = 1: the map has degree one");
  if (std::abs(p.rho1 - 1.0) < kDegenerateTol || std::abs(p.rho2 - 1.0) < kDegenerateTol) {
    throw DegenerateParameter("a multiplier equal to 1 merges the third fixed point");
  }
  return NormalFormMap(p.rho1, p.rho2);
}

std::array<RiemannSpherePoint, 3> NormalFormMap::fixed_points() const {
  return {RiemannSpherePoint::finite(0.0), RiemannSpherePoint::infinity(),
          RiemannSpherePoint::finite((1.0 - rho1_) / (1.0 - rho2_))};
}

std::array<RiemannSpherePoint, 2> NormalFormMap::critical_points() const {
  // f' numerator: rho2 z^2 + 2 z + rho1.
  if (rho2_ == 0.0) {
    return {RiemannSpherePoint::finite(-rho1_ / 2.0), RiemannSpherePoint::infinity()};
  }
  const Complex root = std::sqrt(1.0 - rho1_ * rho2_);
  // Pair the roots to avoid cancellation: z1 z2 = rho1 / rho2.
  const Complex big = (std::real(root) >= 0.0) ? (-1.0 - root) : (-1.0 + root);
  const Complex z1 = big / rho2_;
  const Complex z2 = rho1_ / big;
  return {RiemannSpherePoint::finite(z2), RiemannSpherePoint::finite(z1)};
}

Complex NormalFormMap::derivative(Complex z) const {
  const Complex den = rho2_ * z + 1.0;
  return (rho2_ * z * z + 2.0 * z + rho1_) / (den * den);
}

std::array<Complex, 3> NormalFormMap::multipliers() const {
  // At infinity the conjugate g(w) = w (w + rho2) / (rho1 w + 1) has g'(0) = rho2.
  const Complex z3 = (1.0 - rho1_) / (1.0 - rho2_);
  return {rho1_, rho2_, derivative(z3)};
}

RiemannSpherePoint NormalFormMap::eval_z_chart(Complex z) const {
  const Complex den = rho2_ * z + 1.0;
  if (den == 0.0) return RiemannSpherePoint::infinity();
  return RiemannSpherePoint::finite(z * (z + rho1_) / den);
}

RiemannSpherePoint NormalFormMap::eval_w_chart(Complex w) const {
  if (w == 0.0) return RiemannSpherePoint::infinity();
  const Complex den = rho1_ * w + 1.0;
  if (den == 0.0) return RiemannSpherePoint::finite(0.0);
  const Complex g = w * (w + rho2_) / den;
  if (g == 0.0) return RiemannSpherePoint::infinity();
  return RiemannSpherePoint::finite(1.0 / g);
}

RiemannSpherePoint evaluate(const NormalFormMap& f, const RiemannSpherePoint& z) {
  if (z.infinite) return RiemannSpherePoint::infinity();
  if (std::abs(z.z) > 2.0) return f.eval_w_chart(1.0 / z.z);
  return f.eval_z_chart(z.z);
}

bool is_obstructed_direction(Complex rho1, Complex rho2, double tol) {
  if (std::abs(std::abs(rho1) - 1.0) > kUnitTol || std::abs(std::abs(rho2) - 1.0) > kUnitTol) {
    throw DomainError("multipliers must lie on the unit torus");
  }
  return std::abs(rho2 - std::conj(rho1)) < tol;
}

}  // namespace siegel::moduli
