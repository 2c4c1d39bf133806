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

// Linear algebra of Thurston obstructions: curve-system transition matrices,
// Perron roots with certified brackets, Markov/degree pairs of tree maps, and
// the chord-pullback model of the pulled-off constant.

#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace siegel::obstruction {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr double kSpectralTol = 1e-8;

struct PreimageComponent {
  int sigma;   // 0-based curve the component is isotopic to
  int tau;     // 0-based curve it covers
  int degree;  // >= 1
};

class CurveSystem {
 public:
  explicit CurveSystem(int n);

  int size() const { return n_; }
  void add_component(int sigma, int tau, int degree);
  const std::vector<PreimageComponent>& components() const { return components_; }

 private:
  int n_;
  std::vector<PreimageComponent> components_;
};

// A(sigma, tau) = sum over components of 1 / degree.
Matrix transition_matrix(const CurveSystem& cs);

struct SpectralBounds {
  double value;  // midpoint estimate
  double lower;  // certified: lower <= rho(A)
  double upper;  // certified: rho(A) <= upper
};

// Perron root of a nonnegative matrix. Irreducible classes are found first;
// each is handled by power iteration on (B + I) with Collatz-Wielandt brackets,
// falling back to a dense eigensolver when the iteration stalls.
SpectralBounds spectral_bounds(const Matrix& a);
double spectral_radius(const Matrix& a);

bool is_unobstructed(const CurveSystem& cs);

enum class Verdict { Unobstructed, Obstructed, Critical };

// Unobstructed when upper < 1 - 1e-8, Obstructed when lower >= 1, Critical
// otherwise (the root sits within tolerance below 1 or the bracket straddles 1).
Verdict classify(const SpectralBounds& bounds);
std::string to_string(Verdict v);

// Strongly connected components in a topological order of the condensation
// (a class appears before every class it can reach). Edge i -> j iff a(i, j) > 0.
std::vector<std::vector<int>> irreducible_classes(const Matrix& a);

struct TreeDynamics {
  std::vector<std::pair<int, int>> edges;  // vertex labels of E_1..E_k
  std::map<int, int> vertex_map;           // F on vertices; may be partial or empty
  std::vector<std::vector<int>> image_paths;  // 0-based edge indices covering F(E_j)
  std::vector<int> degrees;                   // delta(E_j) >= 1
};

// Throws InvalidTree unless the edges form a tree, every image path is an
// embedded edge path, and the vertex map (where given) matches path endpoints.
void validate(const TreeDynamics& t);

struct TreeMatrices {
  Matrix m;  // m(i, j) = 1 iff E_i lies in F(E_j)
  Matrix d;  // diag(delta)
};

TreeMatrices tree_matrices(const TreeDynamics& t);

std::optional<Vector> solve_MvDv(const Matrix& m, const Matrix& d);

// Line formats, 1-based, '#' starts a comment:
//   curve n / pre sigma tau deg
//   edge u v / map v w / path E_j: E_a E_b ... / delta E_j d
CurveSystem parse_curve_system(std::istream& in);
TreeDynamics parse_tree(std::istream& in);

struct ChordModel {
  double theta1;
  double theta2;
  double x = 0.0;  // endpoint on the circle of the first Siegel disk
  double y = 0.0;  // endpoint on the circle of the second
  bool opposite_orientation = true;
};

struct PulloffResult {
  std::optional<std::int64_t> n;  // empty means Unbounded below the cap
  bool unbounded() const { return !n.has_value(); }
};

PulloffResult pulled_off_constant(const ChordModel& chord, std::int64_t cap);

// dist in R/Z between theta1 and -theta2.
double rotation_speed_gap(double theta1, double theta2);

struct SweepPoint {
  double dist;
  double theta2;
  PulloffResult result;
};

// count samples with theta2 = dist - theta1, dist evenly spaced in [dist_lo, dist_hi].
std::vector<SweepPoint> pulloff_sweep(double theta1, double dist_lo, double dist_hi, int count,
                                      std::int64_t cap);

}  // namespace siegel::obstruction
