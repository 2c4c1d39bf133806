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

#include "siegel/basin.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <thread>

#include "siegel/errors.hpp"

namespace siegel::basin {

using moduli::NormalFormMap;
using moduli::RiemannSpherePoint;

BlaschkeModel::BlaschkeModel(Complex rho) : rho_(rho), radius_(0.0) {
  if (!(std::abs(rho) < 1.0)) throw DomainError("basin multiplier must satisfy |rho| < 1");
  radius_ = std::max(0.5, std::abs(rho));
}

Complex BlaschkeModel::operator()(Complex z) const {
  return z * (z + rho_) / (1.0 + std::conj(rho_) * z);
}

Complex BlaschkeModel::critical_point() const {
  return -rho_ / (1.0 + std::sqrt(1.0 - std::norm(rho_)));
}

double valuable_domain_modulus(Complex rho) {
  if (!(std::abs(rho) < 1.0)) throw DomainError("basin multiplier must satisfy |rho| < 1");
  return -std::log(std::max(0.5, std::abs(rho))) / (2.0 * std::numbers::pi);
}

InvarianceReport blaschke_invariance_check(Complex rho, int samples) {
  if (samples < 100) throw DomainError("need at least 100 samples");
  const BlaschkeModel model(rho);
  const double r = model.radius();
  double excess = -std::numeric_limits<double>::infinity();
  // Boundary circle plus a few interior rings; |F| is subharmonic so the
  // boundary carries the maximum, the rings guard the sampling itself.
  for (double scale : {1.0, 0.75, 0.5, 0.25}) {
    for (int k = 0; k < samples; ++k) {
      const Complex z = std::polar(scale * r, 2.0 * std::numbers::pi * k / samples);
      excess = std::max(excess, std::abs(model(z)) - r);
    }
  }
  excess = std::max(excess, std::abs(model(0.0)) - r);
  return {excess, std::abs(model.critical_point()) < r};
}

RasterImage::RasterImage(int width, int height, Viewport viewport)
    : width_(width), height_(height), viewport_(viewport) {
  if (width < 1 || height < 1) throw DomainError("raster dimensions must be positive");
  if (!(viewport.re_max > viewport.re_min) || !(viewport.im_max > viewport.im_min)) {
    throw DomainError("empty viewport");
  }
  labels_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height),
                 BasinLabel::Undecided);
}

Complex RasterImage::pixel_center(int x, int y) const {
  const double dx = (viewport_.re_max - viewport_.re_min) / width_;
  const double dy = (viewport_.im_max - viewport_.im_min) / height_;
  return {viewport_.re_min + (x + 0.5) * dx, viewport_.im_max - (y + 0.5) * dy};
}

BasinLabel RasterImage::label(int x, int y) const {
  return labels_[static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
                 static_cast<std::size_t>(x)];
}

void RasterImage::set_label(int x, int y, BasinLabel label) {
  labels_[static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
          static_cast<std::size_t>(x)] = label;
}

double RasterImage::undecided_fraction() const {
  const auto count = std::count(labels_.begin(), labels_.end(), BasinLabel::Undecided);
  return static_cast<double>(count) / static_cast<double>(labels_.size());
}

BasinLabel classify_point(const NormalFormMap& f, const RiemannSpherePoint& start,
                          int max_iter) {
  const auto mult = f.multipliers();
  const bool zero_attracts = std::abs(mult[0]) < 1.0;
  const bool inf_attracts = std::abs(mult[1]) < 1.0;
  const bool third_attracts = std::abs(mult[2]) < 1.0;
  const Complex z3 = f.fixed_points()[2].z;

  RiemannSpherePoint z = start;
  for (int k = 0; k <= max_iter; ++k) {
    if (inf_attracts && (z.infinite || 1.0 / std::abs(z.z) < kCaptureRadius)) {
      return BasinLabel::Infinity;
    }
    if (!z.infinite) {
      if (zero_attracts && std::abs(z.z) < kCaptureRadius) return BasinLabel::Zero;
      if (third_attracts && std::abs(z.z - z3) < kCaptureRadius) return BasinLabel::Third;
    }
    if (k == max_iter) break;
    z = moduli::evaluate(f, z);
  }
  return BasinLabel::Undecided;
}

RasterImage rasterize_basins(const NormalFormMap& f, const Viewport& viewport, int width,
                             int height, int max_iter, int threads) {
  RasterImage image(width, height, viewport);
  const auto fill_rows = [&](int first, int stride) {
    for (int y = first; y < height; y += stride) {
      for (int x = 0; x < width; ++x) {
        image.set_label(
            x, y, classify_point(f, RiemannSpherePoint::finite(image.pixel_center(x, y)), max_iter));
      }
    }
  };
  const int workers = std::clamp(threads, 1, height);
  if (workers == 1) {
    fill_rows(0, 1);
    return image;
  }
  std::vector<std::jthread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int t = 0; t < workers; ++t) pool.emplace_back(fill_rows, t, workers);
  pool.clear();  // joins
  return image;
}

OrbitCloud siegel_boundary_orbit(const NormalFormMap& f, MarkedFixedPoint which, int n_points) {
  if (n_points < 1) throw DomainError("need at least one orbit point");
  const auto to_chart = [which](const RiemannSpherePoint& p) -> std::optional<Complex> {
    if (which == MarkedFixedPoint::Zero) {
      if (p.infinite) return std::nullopt;
      return p.z;
    }
    if (p.infinite) return Complex(0.0, 0.0);
    if (p.z == 0.0) return std::nullopt;
    return 1.0 / p.z;
  };
  const auto from_chart = [which](Complex c) {
    if (which == MarkedFixedPoint::Zero) return RiemannSpherePoint::finite(c);
    if (c == 0.0) return RiemannSpherePoint::infinity();
    return RiemannSpherePoint::finite(1.0 / c);
  };

  std::optional<Complex> start;
  for (const auto& c : f.critical_points()) {
    const auto local = to_chart(c);
    // A critical point sitting on the fixed point itself is superattracting, not Siegel.
    if (!local || std::abs(*local) == 0.0) continue;
    if (!start || std::abs(*local) < std::abs(*start)) start = local;
  }
  if (!start) throw NoCriticalPoint("no critical point in the chart of the fixed point");

  OrbitCloud cloud;
  cloud.critical_point = *start;
  cloud.orbit.reserve(static_cast<std::size_t>(n_points));
  RiemannSpherePoint z = from_chart(*start);
  for (int k = 0; k < n_points; ++k) {
    const auto local = to_chart(z);
    if (!local) throw NoCriticalPoint("critical orbit left the chart");
    cloud.orbit.push_back(*local);
    z = moduli::evaluate(f, z);
  }
  cloud.points = cloud.orbit;
  const auto angle = [](Complex c) {
    const double a = std::arg(c);
    return a < 0.0 ? a + 2.0 * std::numbers::pi : a;
  };
  std::stable_sort(cloud.points.begin(), cloud.points.end(),
                   [&](Complex a, Complex b) { return angle(a) < angle(b); });
  return cloud;
}

std::array<std::uint8_t, 3> label_color(BasinLabel label) {
  switch (label) {
    case BasinLabel::Undecided: return {0, 0, 0};
    case BasinLabel::Zero: return {230, 159, 0};
    case BasinLabel::Infinity: return {86, 180, 233};
    case BasinLabel::Third: return {0, 158, 115};
  }
  return {255, 255, 255};
}

std::string label_name(BasinLabel label) {
  switch (label) {
    case BasinLabel::Undecided: return "undecided";
    case BasinLabel::Zero: return "basin-0";
    case BasinLabel::Infinity: return "basin-inf";
    case BasinLabel::Third: return "basin-third";
  }
  return "unknown";
}

void write_ppm(std::ostream& out, const RasterImage& image, const std::string& comment) {
  out << "P6\n";
  if (!comment.empty()) out << "# " << comment << '\n';
  out << image.width() << ' ' << image.height() << "\n255\n";
  std::string row(static_cast<std::size_t>(image.width()) * 3, '\0');
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      const auto rgb = label_color(image.label(x, y));
      for (int k = 0; k < 3; ++k) row[static_cast<std::size_t>(3 * x + k)] = static_cast<char>(rgb[k]);
    }
    out.write(row.data(), static_cast<std::streamsize>(row.size()));
  }
}

void write_legend(std::ostream& out, const RasterImage& image, const std::string& comment) {
  if (!comment.empty()) out << "# " << comment << '\n';
  std::array<std::int64_t, 4> counts{};
  for (auto l : image.labels()) ++counts[static_cast<std::size_t>(l)];
  out << "label,name,r,g,b,pixels\n";
  for (int k = 0; k < 4; ++k) {
    const auto label = static_cast<BasinLabel>(k);
    const auto rgb = label_color(label);
    out << k << ',' << label_name(label) << ',' << int{rgb[0]} << ',' << int{rgb[1]} << ','
        << int{rgb[2]} << ',' << counts[static_cast<std::size_t>(k)] << '\n';
  }
}

}  // namespace siegel::basin
