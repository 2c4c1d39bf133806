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

// Rotation numbers, their closest returns, and combinatorial intervals on the
// rigid-rotation model of a Siegel disk boundary. Angles live in R/Z (turns).

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace siegel::rotation {

// Golden mean g = (sqrt(5) - 1) / 2 = [0; 1, 1, 1, ...].
inline constexpr double kGoldenMean = 0.61803398874989484820;

enum class Tail { Golden, Finite };

// A continued fraction [0; a_1, ..., a_T, tail]. With a golden tail every
// a_n with n > T equals 1; a finite tail stops at a_T (a rational number,
// kept for testing only).
class RotationNumber {
 public:
  static RotationNumber golden_tail(std::vector<std::int64_t> prefix);
  static RotationNumber finite(std::vector<std::int64_t> coefficients);
  static RotationNumber golden() { return golden_tail({}); }

  // Parses "[0;a1,a2,...,(1)*]" (golden tail) or "[0;a1,...,aT]" (finite).
  static RotationNumber parse(std::string_view text);
  std::string to_string() const;

  Tail tail() const { return tail_; }
  bool is_irrational() const { return tail_ == Tail::Golden; }
  const std::vector<std::int64_t>& prefix() const { return prefix_; }

  // a_n for n >= 1; zero past the end of a finite expansion.
  std::int64_t coefficient(int n) const;
  double value() const { return value_; }

  // n-th Gauss-map iterate [0; a_{n+1}, a_{n+2}, ...]; tail_value(0) = value().
  double tail_value(int n) const;

  // Smallest index after which every partial quotient is 1.
  int golden_index() const;
  bool is_bounded_type(std::int64_t bound) const;

  friend bool operator==(const RotationNumber&, const RotationNumber&) = default;

 private:
  RotationNumber(std::vector<std::int64_t> prefix, Tail tail);

  std::vector<std::int64_t> prefix_;
  Tail tail_;
  double value_;
};

// Classical convergent P_k/Q_k of [0; a_1, ...] together with the signed
// return Q_k * theta - P_k = (-1)^k * beta_k.
struct StandardConvergent {
  int index;
  std::int64_t p;
  std::int64_t q;
  double signed_return;
};

// Convergents k = 0 .. count-1; the return values are formed as products of
// Gauss-map iterates, so they stay accurate to relative machine precision.
std::vector<StandardConvergent> standard_convergents(const RotationNumber& theta,
                                                     int count);

struct Convergent {
  int level;
  std::int64_t p;
  std::int64_t q;
  double signed_return;  // theta_m
  double length;         // l_m = |theta_m|
};

// Closest returns indexed by level. When a_1 = 1 the level is shifted by one
// so that l_0 = dist(x, f(x)) remains the first closest return.
class ConvergentTable {
 public:
  ConvergentTable(std::vector<Convergent> entries, bool a1_shift);

  const std::vector<Convergent>& entries() const { return entries_; }
  bool convention_a1() const { return a1_shift_; }
  int depth() const { return static_cast<int>(entries_.size()); }

  const Convergent& at(int level) const;
  std::int64_t q(int level) const { return at(level).q; }
  // l_level, with l_{-1} = 1.
  double length(int level) const;

 private:
  std::vector<Convergent> entries_;
  bool a1_shift_;
};

ConvergentTable convergents(const RotationNumber& theta, int depth);

// Fractional part in [0, 1).
double wrap(double x);
// x rotated by t.
double rotate(double x, double t);
// Distance on R/Z, in [0, 1/2].
double comb_distance(double x, double y);

// j * theta mod 1 for j >= 0, computed through the Ostrowski expansion of j.
double orbit_angle(const RotationNumber& theta, std::int64_t j);

// Counterclockwise arc [left, left + length].
struct CombinatorialInterval {
  double left = 0.0;
  double length = 0.0;
  std::optional<int> level;

  double right() const { return wrap(left + length); }
  bool contains(double x, double tol = 0.0) const;
};

// Level-m interval [x, x + l_m].
CombinatorialInterval level_interval(const ConvergentTable& table, double x, int level);

struct ScaledInterval {
  CombinatorialInterval interval;
  bool saturated;  // lambda * |I| >= 1; interval is then the whole circle
};

ScaledInterval scale_interval(const CombinatorialInterval& interval, double lambda);

struct SpreadPiece {
  CombinatorialInterval interval;
  std::int64_t iterate;  // i such that the piece is f^i(I)
};

// The images f^i(I), i < q_{m+1}, enumerated counterclockwise from I.
std::vector<SpreadPiece> spread_around(const CombinatorialInterval& interval,
                                       const RotationNumber& theta);

enum class CellClass { Short, Long, Other };

struct DiffeoTiling {
  int level;
  double critical_angle;
  std::vector<CombinatorialInterval> cells;  // starting at the critical angle
};

// Partition of the circle by the backward orbit {c - j*theta : j < q_{m+1}}.
DiffeoTiling diffeo_tiling(const RotationNumber& theta, double critical_angle, int level);

// Short = l_m, Long = l_m + l_{m+1}, within tol.
CellClass classify_cell(const ConvergentTable& table, int level, double length,
                        double tol = 1e-12);

}  // namespace siegel::rotation
