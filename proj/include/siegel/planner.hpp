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

// Combinatorial skeleton of a geodesic pseudo-Siegel disk: the transition
// level, per-level thresholds, near-parabolic levels with their fjord and
// buffer offsets, stability constants and predicted width regimes.

#pragma once

#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "siegel/moduli.hpp"
#include "siegel/rotation.hpp"

namespace siegel::planner {

// A threshold or constant that may be the distinguished value "infinity".
struct Extended {
  double value = 0.0;
  bool infinite = false;

  static Extended of(double v) { return {v, false}; }
  static Extended infinity() { return {0.0, true}; }
  std::string to_string() const;
  friend bool operator==(const Extended&, const Extended&) = default;
};

bool operator<(const Extended& a, const Extended& b);

struct Thresholds {
  double big_k = 100.0;  // K
  double big_m = 10.0;   // M
  double v = 8.0;
  double w = 64.0;
  // Monotone into [M, inf); empty means H(x) = max(M, x).
  std::function<double(double)> h;

  double apply_h(double x) const;
};

enum class Regime { A, B, C };
char to_char(Regime r);

struct LevelRecord {
  int m;
  double length;       // l_m
  double next_length;  // l_{m+1}
  Extended threshold;  // M_m
  bool near_parabolic;
  std::int64_t fjord_offset_cells;  // zero unless near-parabolic
  std::int64_t inner_buffer_cells;
  std::int64_t outer_mark_cells;
  Regime regime;

  double fjord_offset_length() const { return static_cast<double>(fjord_offset_cells) * next_length; }
  double inner_buffer_length() const { return static_cast<double>(inner_buffer_cells) * next_length; }
  double outer_mark_length() const { return static_cast<double>(outer_mark_cells) * next_length; }
};

struct RegularizationPlan {
  rotation::RotationNumber theta;
  double k_f;
  Thresholds thresholds;
  int transition_level;
  std::vector<LevelRecord> levels;  // m = -1, 0, 1, ...
  std::vector<std::string> failures;

  const LevelRecord& level(int m) const;
  std::vector<int> near_parabolic_levels() const;
  bool trivial() const { return near_parabolic_levels().empty(); }
};

// -2 when K_F <= K; otherwise the m >= -1 with K / l_m < K_F <= K / l_{m+1}.
int transition_level(const rotation::RotationNumber& theta, double k_f, double big_k, int depth);

// Levels -1 .. depth - 2 are planned.
RegularizationPlan build_plan(const rotation::RotationNumber& theta, double k_f,
                              const Thresholds& thresholds, int depth);

std::int64_t fjord_offset_cells(double threshold);
std::int64_t inner_buffer_cells(double threshold, double v);
std::int64_t outer_mark_cells(double threshold, double w);

struct IntervalStability {
  int m;
  double k;       // outer_mark_cells - 2
  double k_plus;  // max(k, 0)
};

struct StabilityReport {
  std::vector<IntervalStability> intervals;  // one per regularized level
  std::vector<Extended> k_by_level;          // parallel to plan.levels; running minimum
  Extended k_at(const RegularizationPlan& plan, int m) const;
};

StabilityReport stability_report(const RegularizationPlan& plan);

struct WidthPrediction {
  Regime regime;
  std::string vertical_form;
  std::string peripheral_form;
  double vertical_driver;
  double peripheral_driver;
  double merged_vertical;    // l_m K_F + 1
  double merged_peripheral;  // sqrt(l_m K_F) + 1
};

WidthPrediction predicted_width_regime(const RegularizationPlan& plan, int m, double interval_length);

// Hyperbolic geodesic of the exterior of the closed unit disk joining the
// boundary points at angles a and b (turns): the image under z -> 1/z of the
// arc orthogonal to the circle joining 1/a and 1/b.
class GeodesicDam {
 public:
  GeodesicDam(double a, double b);

  // s in [0, 1] runs from the point at angle a to the point at angle b.
  moduli::RiemannSpherePoint point(double s) const;
  std::vector<moduli::RiemannSpherePoint> polyline(int samples = 256) const;

 private:
  moduli::Complex inner_point(double s) const;

  moduli::Complex p_;
  moduli::Complex q_;
  bool diameter_;
  moduli::Complex center_;
  double radius_;
  double start_angle_;
  double sweep_;
};

std::vector<moduli::RiemannSpherePoint> geodesic_dam(double a, double b, int samples = 256);

void write_plan_csv(std::ostream& out, const RegularizationPlan& plan);

}  // namespace siegel::planner
