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

// Attracting basins: the Blaschke model F(z) = z (z + rho) / (1 + conj(rho) z)
// of a basin with multiplier rho, its valuable sub-disk of radius
// max(1/2, |rho|), and orbit-based pictures of the normal-form family.

#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "siegel/moduli.hpp"

namespace siegel::basin {

using Complex = std::complex<double>;

class BlaschkeModel {
 public:
  explicit BlaschkeModel(Complex rho);  // DomainError unless |rho| < 1

  Complex rho() const { return rho_; }
  // Radius of the valuable disk, max(1/2, |rho|).
  double radius() const { return radius_; }
  Complex operator()(Complex z) const;
  // The critical point of F inside the unit disk: -rho / (1 + sqrt(1 - |rho|^2)).
  Complex critical_point() const;

 private:
  Complex rho_;
  double radius_;
};

// Modulus of the annulus between the basin and its valuable disk,
// (1 / 2 pi) log(1 / max(1/2, |rho|)).
double valuable_domain_modulus(Complex rho);

struct InvarianceReport {
  double max_excess;     // max over sampled |z| <= r of |F(z)| - r
  bool critical_inside;  // |c| < r
};

InvarianceReport blaschke_invariance_check(Complex rho, int samples);

struct Viewport {
  double re_min = -2.0;
  double re_max = 2.0;
  double im_min = -2.0;
  double im_max = 2.0;
};

enum class BasinLabel : std::uint8_t { Undecided = 0, Zero = 1, Infinity = 2, Third = 3 };

class RasterImage {
 public:
  RasterImage(int width, int height, Viewport viewport);

  int width() const { return width_; }
  int height() const { return height_; }
  const Viewport& viewport() const { return viewport_; }

  // Row 0 is the top of the viewport.
  Complex pixel_center(int x, int y) const;
  BasinLabel label(int x, int y) const;
  void set_label(int x, int y, BasinLabel label);
  const std::vector<BasinLabel>& labels() const { return labels_; }
  double undecided_fraction() const;

 private:
  int width_;
  int height_;
  Viewport viewport_;
  std::vector<BasinLabel> labels_;
};

inline constexpr double kCaptureRadius = 1e-6;

// Follows the orbit of z until it is within 1e-6 of an attracting fixed point
// (measured in the chart of that point) or max_iter steps have elapsed.
BasinLabel classify_point(const moduli::NormalFormMap& f, const moduli::RiemannSpherePoint& z,
                          int max_iter);

// Rows are split across `threads` workers; the result does not depend on it.
RasterImage rasterize_basins(const moduli::NormalFormMap& f, const Viewport& viewport,
                             int width, int height, int max_iter, int threads = 1);

// Fixed palette; the legend lists it as "label,name,r,g,b" lines.
std::array<std::uint8_t, 3> label_color(BasinLabel label);
std::string label_name(BasinLabel label);

// Binary P6. A non-empty comment is written as a "# ..." line after the magic.
void write_ppm(std::ostream& out, const RasterImage& image, const std::string& comment = "");
void write_legend(std::ostream& out, const RasterImage& image, const std::string& comment = "");

enum class MarkedFixedPoint { Zero, Infinity };

struct OrbitCloud {
  std::vector<Complex> orbit;   // f^k(c), k < n, in iteration order
  std::vector<Complex> points;  // the same points sorted by argument
  Complex critical_point;       // the starting point c
};

// Critical orbit of the critical point nearest the chosen fixed point, in the
// chart centred at that fixed point (z for Zero, w = 1/z for Infinity).
OrbitCloud siegel_boundary_orbit(const moduli::NormalFormMap& f, MarkedFixedPoint which,
                                 int n_points);

}  // namespace siegel::basin
