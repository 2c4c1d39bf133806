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

#include "siegel/planner.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>

#include "siegel/errors.hpp"

namespace siegel::planner {

namespace {

using moduli::Complex;
using moduli::RiemannSpherePoint;

std::string shortest(double x) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, end);
}

double offset_base(double threshold) { return std::exp(std::sqrt(std::log(threshold))); }

void check_thresholds(double k_f, const Thresholds& t) {
  if (!(k_f > 0.0)) throw InvalidThresholds("K_F must be positive");
  if (!(t.big_k > 0.0)) throw InvalidThresholds("K must be positive");
  if (!(t.big_m >= 2.0)) throw InvalidThresholds("M must be at least 2");
  if (!(t.w > t.v && t.v > 1.0)) throw InvalidThresholds("need w > v > 1");
}

}  // namespace

std::string Extended::to_string() const { return infinite ? "inf" : shortest(value); }

bool operator<(const Extended& a, const Extended& b) {
  if (a.infinite) return false;
  if (b.infinite) return true;
  return a.value < b.value;
}

double Thresholds::apply_h(double x) const {
  const double out = h ? h(x) : std::max(big_m, x);
  if (!(out >= big_m)) throw InvalidThresholds("H must map into [M, inf)");
  return out;
}

char to_char(Regime r) {
  switch (r) {
    case Regime::A: return 'A';
    case Regime::B: return 'B';
    case Regime::C: return 'C';
  }
  return '?';
}

const LevelRecord& RegularizationPlan::level(int m) const {
  for (const auto& rec : levels) {
    if (rec.m == m) return rec;
  }
  throw DepthExceeded("level " + std::to_string(m) + " is not in the plan");
}

std::vector<int> RegularizationPlan::near_parabolic_levels() const {
  std::vector<int> out;
  for (const auto& rec : levels) {
    if (rec.near_parabolic) out.push_back(rec.m);
  }
  return out;
}

int transition_level(const rotation::RotationNumber& theta, double k_f, double big_k, int depth) {
  if (!(k_f > 0.0) || !(big_k > 0.0)) throw DomainError("K_F and K must be positive");
  if (depth < 2) throw DomainError("depth must be at least 2");
  if (k_f <= big_k) return -2;
  const auto table = rotation::convergents(theta, depth);
  // l_{-1} = 1 gives K / l_{-1} < K_F, so the search starts at m = -1.
  for (int m = -1; m + 1 < depth; ++m) {
    if (k_f <= big_k / table.length(m + 1)) return m;
  }
  throw DepthExceeded("transition level lies beyond depth " + std::to_string(depth));
}

std::int64_t fjord_offset_cells(double threshold) {
  return static_cast<std::int64_t>(std::floor(offset_base(threshold)));
}

std::int64_t inner_buffer_cells(double threshold, double v) {
  return static_cast<std::int64_t>(std::floor(offset_base(threshold) / v));
}

std::int64_t outer_mark_cells(double threshold, double w) {
  return static_cast<std::int64_t>(std::floor(offset_base(threshold) / w));
}

RegularizationPlan build_plan(const rotation::RotationNumber& theta, double k_f,
                              const Thresholds& thresholds, int depth) {
  check_thresholds(k_f, thresholds);
  const int m_f = transition_level(theta, k_f, thresholds.big_k, depth);
  const auto table = rotation::convergents(theta, depth);
  RegularizationPlan plan{theta, k_f, thresholds, m_f, {}, {}};
  for (int m = -1; m + 1 < depth; ++m) {
    LevelRecord rec{};
    rec.m = m;
    rec.length = table.length(m);
    rec.next_length = table.length(m + 1);
    if (m > m_f) {
      rec.threshold = Extended::of(thresholds.big_m);
      rec.regime = Regime::A;
    } else if (m == m_f) {
      rec.threshold = Extended::of(thresholds.apply_h(rec.length * k_f));
      rec.regime = Regime::C;
    } else {
      rec.threshold = Extended::infinity();
      rec.regime = Regime::B;
    }
    rec.near_parabolic = !rec.threshold.infinite && rec.length > rec.threshold.value * rec.next_length;
    if (rec.near_parabolic) {
      rec.fjord_offset_cells = fjord_offset_cells(rec.threshold.value);
      rec.inner_buffer_cells = inner_buffer_cells(rec.threshold.value, thresholds.v);
      rec.outer_mark_cells = outer_mark_cells(rec.threshold.value, thresholds.w);
      if (!(rec.fjord_offset_length() < rec.length / 4.0)) {
        plan.failures.push_back("level " + std::to_string(m) +
                                ": fjord offset is not small against the interval");
      }
    }
    plan.levels.push_back(rec);
  }
  return plan;
}

Extended StabilityReport::k_at(const RegularizationPlan& plan, int m) const {
  for (std::size_t i = 0; i < plan.levels.size(); ++i) {
    if (plan.levels[i].m == m) return k_by_level[i];
  }
  throw DepthExceeded("level " + std::to_string(m) + " is not in the plan");
}

StabilityReport stability_report(const RegularizationPlan& plan) {
  StabilityReport report;
  report.k_by_level.assign(plan.levels.size(), Extended::infinity());
  Extended running = Extended::infinity();
  for (std::size_t i = plan.levels.size(); i-- > 0;) {
    const auto& rec = plan.levels[i];
    if (rec.near_parabolic) {
      const double k = static_cast<double>(rec.outer_mark_cells) - 2.0;
      const double k_plus = std::max(k, 0.0);
      report.intervals.push_back({rec.m, k, k_plus});
      if (Extended::of(k_plus) < running) running = Extended::of(k_plus);
    }
    report.k_by_level[i] = running;
  }
  std::reverse(report.intervals.begin(), report.intervals.end());
  return report;
}

WidthPrediction predicted_width_regime(const RegularizationPlan& plan, int m, double interval_length) {
  const auto& rec = plan.level(m);
  if (!(interval_length > rec.next_length && interval_length <= rec.length)) {
    throw DomainError("interval length must lie in (l_{m+1}, l_m]");
  }
  const double lk = rec.length * plan.k_f;
  WidthPrediction out{rec.regime, "", "", 1.0, 1.0, lk + 1.0, std::sqrt(lk) + 1.0};
  switch (rec.regime) {
    case Regime::A:
      out.vertical_form = "O(1)";
      out.peripheral_form = "O(1)";
      break;
    case Regime::B:
      out.vertical_form = "|J| K_F";
      out.peripheral_form = "O(1)";
      out.vertical_driver = interval_length * plan.k_f;
      break;
    case Regime::C:
      out.vertical_form = "O(l_m K_F)";
      out.peripheral_form = "O(sqrt(l_m K_F))";
      out.vertical_driver = lk;
      out.peripheral_driver = std::sqrt(lk);
      break;
  }
  return out;
}

GeodesicDam::GeodesicDam(double a, double b) : diameter_(false), radius_(0.0), start_angle_(0.0), sweep_(0.0) {
  const double tau = 2.0 * std::numbers::pi;
  double delta = rotation::wrap(a - b + 0.5) - 0.5;  // angle of q minus angle of p, in turns
  if (std::abs(delta) < 1e-12) throw DomainError("dam endpoints must differ");
  // 1/e^{2 pi i t} = e^{-2 pi i t}.
  const double alpha = -tau * a;
  p_ = std::polar(1.0, alpha);
  q_ = std::polar(1.0, -tau * b);
  const double half = 0.5 * tau * delta;
  if (std::abs(std::abs(delta) - 0.5) < 1e-12) {
    diameter_ = true;
    return;
  }
  center_ = std::polar(1.0 / std::cos(half), alpha + half);
  radius_ = std::abs(std::tan(half));
  start_angle_ = std::arg(p_ - center_);
  double sweep = std::arg(q_ - center_) - start_angle_;
  sweep -= tau * std::round(sweep / tau);
  sweep_ = sweep;
}

Complex GeodesicDam::inner_point(double s) const {
  if (s <= 0.0) return p_;
  if (s >= 1.0) return q_;
  if (diameter_) return p_ + s * (q_ - p_);
  return center_ + radius_ * std::polar(1.0, start_angle_ + s * sweep_);
}

RiemannSpherePoint GeodesicDam::point(double s) const {
  const Complex z = inner_point(s);
  if (z == 0.0) return RiemannSpherePoint::infinity();
  return RiemannSpherePoint::finite(1.0 / z);
}

std::vector<RiemannSpherePoint> GeodesicDam::polyline(int samples) const {
  if (samples < 2) throw DomainError("need at least two samples");
  std::vector<RiemannSpherePoint> out;
  out.reserve(static_cast<std::size_t>(samples));
  for (int k = 0; k < samples; ++k) out.push_back(point(static_cast<double>(k) / (samples - 1)));
  return out;
}

std::vector<RiemannSpherePoint> geodesic_dam(double a, double b, int samples) {
  return GeodesicDam(a, b).polyline(samples);
}

void write_plan_csv(std::ostream& out, const RegularizationPlan& plan) {
  out << "m,length,M_m,near_parabolic,fjord_offset_cells,inner_buffer_cells,outer_mark_cells,"
         "fjord_offset_length,regime\n";
  for (const auto& rec : plan.levels) {
    out << rec.m << ',' << shortest(rec.length) << ',' << rec.threshold.to_string() << ','
        << (rec.near_parabolic ? 1 : 0) << ',' << rec.fjord_offset_cells << ','
        << rec.inner_buffer_cells << ',' << rec.outer_mark_cells << ','
        << shortest(rec.fjord_offset_length()) << ',' << to_char(rec.regime) << '\n';
  }
}

}  // namespace siegel::planner
