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

#include "siegel/rotation.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>

#include "siegel/errors.hpp"

namespace siegel::rotation {

namespace {

constexpr std::string_view kGoldenToken = "(1)*";
constexpr double kDegenerateGap = 1e-13;

std::int64_t checked_affine(std::int64_t a, std::int64_t x, std::int64_t y) {
  std::int64_t prod = 0;
  std::int64_t sum = 0;
  if (__builtin_mul_overflow(a, x, &prod) || __builtin_add_overflow(prod, y, &sum)) {
    throw DomainError("convergent exceeds 64-bit range");
  }
  return sum;
}

// Precomputed convergents for repeated orbit evaluations.
class OrbitSampler {
 public:
  OrbitSampler(const RotationNumber& theta, std::int64_t max_j) {
    int count = 2;
    while (true) {
      conv_ = standard_convergents(theta, count);
      if (conv_.back().q > max_j || static_cast<int>(conv_.size()) < count) break;
      count += 8;
    }
  }

  double operator()(std::int64_t j) const {
    double acc = 0.0;
    for (auto it = conv_.rbegin(); it != conv_.rend() && j > 0; ++it) {
      if (it->q > j) continue;
      const std::int64_t digit = j / it->q;
      j -= digit * it->q;
      acc += static_cast<double>(digit) * it->signed_return;
    }
    return wrap(acc);
  }

 private:
  std::vector<StandardConvergent> conv_;
};

}  // namespace

RotationNumber::RotationNumber(std::vector<std::int64_t> prefix, Tail tail)
    : prefix_(std::move(prefix)), tail_(tail), value_(0.0) {
  for (std::int64_t a : prefix_) {
    if (a < 1) throw DomainError("partial quotients must be >= 1");
  }
  if (tail_ == Tail::Finite) {
    if (prefix_.empty()) throw DomainError("finite expansion needs at least one term");
    if (prefix_.size() == 1 && prefix_[0] == 1) {
      throw DomainError("[0;1] = 1 is not a rotation number in (0,1)");
    }
  }
  value_ = tail_value(0);
}

RotationNumber RotationNumber::golden_tail(std::vector<std::int64_t> prefix) {
  return RotationNumber(std::move(prefix), Tail::Golden);
}

RotationNumber RotationNumber::finite(std::vector<std::int64_t> coefficients) {
  return RotationNumber(std::move(coefficients), Tail::Finite);
}

RotationNumber RotationNumber::parse(std::string_view text) {
  const auto fail = [&](const char* why) {
    return ParseError(std::string(why) + " in rotation number '" + std::string(text) + "'");
  };
  if (text.size() < 4 || text.substr(0, 3) != "[0;" || text.back() != ']') {
    throw fail("expected [0;...]");
  }
  std::string_view body = text.substr(3, text.size() - 4);
  std::vector<std::int64_t> coeffs;
  bool golden = false;
  while (!body.empty()) {
    const auto comma = body.find(',');
    const std::string_view token = body.substr(0, comma);
    if (golden) throw fail("golden tail must be last");
    if (token == kGoldenToken) {
      golden = true;
    } else {
      std::int64_t a = 0;
      const auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), a);
      if (ec != std::errc() || end != token.data() + token.size() || token.empty()) {
        throw fail("bad partial quotient");
      }
      if (a < 1) throw fail("partial quotient must be >= 1");
      coeffs.push_back(a);
    }
    if (comma == std::string_view::npos) break;
    body.remove_prefix(comma + 1);
    if (body.empty()) throw fail("trailing comma");
  }
  if (!golden && coeffs.empty()) throw fail("empty expansion");
  try {
    return golden ? golden_tail(std::move(coeffs)) : finite(std::move(coeffs));
  } catch (const DomainError& e) {
    throw ParseError(e.what());
  }
}

std::string RotationNumber::to_string() const {
  std::string out = "[0;";
  for (std::size_t i = 0; i < prefix_.size(); ++i) {
    if (i > 0) out += ',';
    out += std::to_string(prefix_[i]);
  }
  if (tail_ == Tail::Golden) {
    if (!prefix_.empty()) out += ',';
    out += kGoldenToken;
  }
  out += ']';
  return out;
}

std::int64_t RotationNumber::coefficient(int n) const {
  if (n < 1) throw DomainError("partial quotients are indexed from 1");
  const auto idx = static_cast<std::size_t>(n - 1);
  if (idx < prefix_.size()) return prefix_[idx];
  return tail_ == Tail::Golden ? 1 : 0;
}

double RotationNumber::tail_value(int n) const {
  if (n < 0) throw DomainError("negative Gauss-map index");
  const int len = static_cast<int>(prefix_.size());
  double x = tail_ == Tail::Golden ? kGoldenMean : 0.0;
  if (n >= len) return x;
  for (int k = len; k > n; --k) {
    x = 1.0 / (static_cast<double>(prefix_[static_cast<std::size_t>(k - 1)]) + x);
  }
  return x;
}

int RotationNumber::golden_index() const {
  int idx = static_cast<int>(prefix_.size());
  while (idx > 0 && prefix_[static_cast<std::size_t>(idx - 1)] == 1) --idx;
  return idx;
}

bool RotationNumber::is_bounded_type(std::int64_t bound) const {
  if (!is_irrational()) return false;
  return std::all_of(prefix_.begin(), prefix_.end(),
                     [bound](std::int64_t a) { return a <= bound; }) &&
         bound >= 1;
}

std::vector<StandardConvergent> standard_convergents(const RotationNumber& theta,
                                                     int count) {
  if (count < 1) throw DomainError("need at least one convergent");
  std::vector<StandardConvergent> out;
  out.reserve(static_cast<std::size_t>(count));
  std::int64_t p_prev = 1, q_prev = 0;  // k = -1
  std::int64_t p = 0, q = 1;            // k = 0
  double beta = theta.value();          // x_0
  out.push_back({0, p, q, beta});
  for (int k = 1; k < count; ++k) {
    const std::int64_t a = theta.coefficient(k);
    if (a == 0) break;  // end of a finite expansion
    const std::int64_t p_next = checked_affine(a, p, p_prev);
    const std::int64_t q_next = checked_affine(a, q, q_prev);
    p_prev = p;
    q_prev = q;
    p = p_next;
    q = q_next;
    beta *= theta.tail_value(k);
    out.push_back({k, p, q, (k % 2 == 0) ? beta : -beta});
  }
  return out;
}

ConvergentTable::ConvergentTable(std::vector<Convergent> entries, bool a1_shift)
    : entries_(std::move(entries)), a1_shift_(a1_shift) {}

const Convergent& ConvergentTable::at(int level) const {
  if (level < 0 || level >= depth()) {
    throw DepthExceeded("level " + std::to_string(level) + " outside table of depth " +
                        std::to_string(depth()));
  }
  return entries_[static_cast<std::size_t>(level)];
}

double ConvergentTable::length(int level) const {
  if (level == -1) return 1.0;
  return at(level).length;
}

ConvergentTable convergents(const RotationNumber& theta, int depth) {
  if (depth < 1) throw DomainError("depth must be >= 1");
  if (!theta.is_irrational()) {
    throw DomainError("closest returns need an irrational rotation number");
  }
  const bool shift = theta.coefficient(1) == 1;
  const int offset = shift ? 1 : 0;
  const auto standard = standard_convergents(theta, depth + offset);
  std::vector<Convergent> entries;
  entries.reserve(static_cast<std::size_t>(depth));
  for (int m = 0; m < depth; ++m) {
    const auto& s = standard[static_cast<std::size_t>(m + offset)];
    entries.push_back({m, s.p, s.q, s.signed_return, std::abs(s.signed_return)});
  }
  return ConvergentTable(std::move(entries), shift);
}

double wrap(double x) {
  double r = x - std::floor(x);
  if (r >= 1.0) r = 0.0;
  return r;
}

double rotate(double x, double t) { return wrap(x + t); }

double comb_distance(double x, double y) {
  const double d = wrap(x - y);
  return std::min(d, 1.0 - d);
}

double orbit_angle(const RotationNumber& theta, std::int64_t j) {
  if (j < 0) throw DomainError("orbit index must be non-negative");
  return OrbitSampler(theta, j)(j);
}

bool CombinatorialInterval::contains(double x, double tol) const {
  if (length >= 1.0) return true;
  const double offset = wrap(x - left);
  return offset <= length + tol || offset >= 1.0 - tol;
}

CombinatorialInterval level_interval(const ConvergentTable& table, double x, int level) {
  return {wrap(x), table.length(level), level};
}

ScaledInterval scale_interval(const CombinatorialInterval& interval, double lambda) {
  if (!(lambda >= 1.0)) throw DomainError("scale factor must be >= 1");
  const double length = lambda * interval.length;
  if (length >= 1.0) {
    return {{wrap(interval.left), 1.0, std::nullopt}, true};
  }
  const double left = wrap(interval.left - 0.5 * (lambda - 1.0) * interval.length);
  std::optional<int> level = lambda == 1.0 ? interval.level : std::nullopt;
  return {{left, length, level}, false};
}

std::vector<SpreadPiece> spread_around(const CombinatorialInterval& interval,
                                       const RotationNumber& theta) {
  if (!interval.level) throw DomainError("spreading around needs a level-m interval");
  const int m = *interval.level;
  if (m < 0) throw DomainError("level must be non-negative");
  const auto table = convergents(theta, m + 2);
  if (std::abs(interval.length - table.length(m)) > 1e-12) {
    throw DomainError("interval length does not match l_m");
  }
  const std::int64_t count = table.q(m + 1);
  const OrbitSampler orbit(theta, count);
  std::vector<SpreadPiece> pieces;
  pieces.reserve(static_cast<std::size_t>(count));
  for (std::int64_t i = 0; i < count; ++i) {
    pieces.push_back({{wrap(interval.left + orbit(i)), interval.length, m}, i});
  }
  const double origin = interval.left;
  std::sort(pieces.begin(), pieces.end(), [origin](const SpreadPiece& a, const SpreadPiece& b) {
    return wrap(a.interval.left - origin) < wrap(b.interval.left - origin);
  });
  return pieces;
}

DiffeoTiling diffeo_tiling(const RotationNumber& theta, double critical_angle, int level) {
  if (level < 0) throw DomainError("level must be non-negative");
  const auto table = convergents(theta, level + 2);
  const std::int64_t count = table.q(level + 1);
  const OrbitSampler orbit(theta, count);
  const double c = wrap(critical_angle);

  std::vector<double> offsets(static_cast<std::size_t>(count));
  for (std::int64_t j = 0; j < count; ++j) {
    offsets[static_cast<std::size_t>(j)] = wrap(-orbit(j));
  }
  std::sort(offsets.begin(), offsets.end());

  DiffeoTiling tiling{level, c, {}};
  tiling.cells.reserve(offsets.size());
  for (std::size_t k = 0; k < offsets.size(); ++k) {
    const double next = k + 1 < offsets.size() ? offsets[k + 1] : 1.0;
    const double gap = next - offsets[k];
    if (gap < kDegenerateGap) {
      throw DegenerateOrbit("critical orbit points coincide at level " +
                            std::to_string(level));
    }
    tiling.cells.push_back({wrap(c + offsets[k]), gap, std::nullopt});
  }
  return tiling;
}

CellClass classify_cell(const ConvergentTable& table, int level, double length,
                        double tol) {
  const double short_len = table.length(level);
  const double long_len = short_len + table.length(level + 1);
  if (std::abs(length - short_len) <= tol) return CellClass::Short;
  if (std::abs(length - long_len) <= tol) return CellClass::Long;
  return CellClass::Other;
}

}  // namespace siegel::rotation
