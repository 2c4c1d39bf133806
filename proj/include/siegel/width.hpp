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

// Discrete extremal width: resistor-network Laplace solves on cell grids,
// quadrilaterals with marked sides, round annuli, and families of curves on
// the sphere minus finitely many round disks.

#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <istream>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "siegel/rotation.hpp"

namespace siegel::width {

using Complex = std::complex<double>;

inline constexpr double kSolverTolerance = 1e-10;
inline constexpr double kLawSlack = 0.03;

enum class Method { GridLaplace, ClosedForm };
std::string to_string(Method m);

struct WidthEstimate {
  double value = 0.0;
  Method method = Method::GridLaplace;
  double grid_spacing = 0.0;    // zero for closed forms
  double error_estimate = 0.0;  // |W_h - W_2h| when two grids were solved
  std::int64_t unknowns = 0;
};

// Conductances between nodes plus Dirichlet ties to fixed potentials. The
// width of a two-potential problem (0 and 1) is the minimal energy.
class Network {
 public:
  explicit Network(int nodes);

  int size() const { return n_; }
  void connect(int a, int b, double conductance);
  void tie(int node, double potential, double conductance);

  struct Solution {
    std::vector<double> potential;  // nodes with no path to a tie are left at 0
    double energy = 0.0;
    int iterations = 0;
    double residual = 0.0;
  };

  // Conjugate gradients preconditioned by a sparse LDL^T factorization.
  Solution solve(double tolerance = kSolverTolerance) const;

 private:
  struct Edge {
    int a;
    int b;
    double c;
  };
  struct Tie {
    int node;
    double value;
    double c;
  };
  int n_;
  std::vector<Edge> edges_;
  std::vector<Tie> ties_;
};

// Counterclockwise order along the boundary: base, side A, roof, side B.
enum class FaceLabel { Base, SideA, Roof, SideB };

// A boundary face of the cell mask: the midpoint, the outward unit normal
// (nx, ny) and the grid spacing.
struct FaceInfo {
  double x;
  double y;
  int nx;
  int ny;
  double h;

  double outside_x() const { return x + 0.5 * h * nx; }
  double outside_y() const { return y + 0.5 * h * ny; }
};

// Continuous description of a quadrilateral, rasterized on demand.
struct QuadShape {
  double x0 = 0.0;
  double y0 = 0.0;
  double x1 = 1.0;
  double y1 = 1.0;
  std::function<bool(double, double)> inside;
  std::function<FaceLabel(const FaceInfo&)> label;

  double shorter_side() const;
};

QuadShape rectangle_shape(double width, double height);

// [0,2]x[0,1] union [0,1]x[1,2]; base y = 0, roof y = 2 (0 <= x <= 1), side
// B the left edge and side A the three remaining edges.
QuadShape l_shape();

// Roles exchanged: side A becomes the base and side B the roof.
QuadShape swapped(const QuadShape& q);

class GridQuadrilateral {
 public:
  // Cells are [x0 + i h, x0 + (i+1) h] x [y0 + j h, y0 + (j+1) h]. Throws
  // DomainError unless the mask is connected, simply connected without pinch
  // points, and the boundary labels form four runs base, side, roof, side.
  GridQuadrilateral(int nx, int ny, double h, double x0, double y0, std::vector<char> mask,
                    const std::function<FaceLabel(const FaceInfo&)>& label);

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double h() const { return h_; }
  bool in_mask(int i, int j) const;
  int cell_count() const;
  // Face counts along the traced boundary, by label.
  int face_count(FaceLabel label) const;

  Network network() const;

 private:
  struct BoundaryFace {
    int i;
    int j;
    int dir;  // 0 bottom, 1 right, 2 top, 3 left
    FaceLabel label;
  };

  int nx_;
  int ny_;
  double h_;
  double x0_;
  double y0_;
  std::vector<char> mask_;
  std::vector<BoundaryFace> boundary_;
};

// cells_short cells across the shorter side of the bounding box.
GridQuadrilateral rasterize(const QuadShape& q, int cells_short);
// Cells of side h anchored at (x0, y0).
GridQuadrilateral rasterize_spacing(const QuadShape& q, double h);

// Single solve; error_estimate stays 0.
WidthEstimate width_rectangle(const GridQuadrilateral& q);
// Solves at cells_short and cells_short / 2. Requires cells_short >= 16.
WidthEstimate width_rectangle(const QuadShape& q, int cells_short = 128);

// x y / (x + y); an infinite argument returns the other one.
double harmonic_sum(double x, double y);

struct LawReport {
  double whole;
  double part1;
  double part2;
  double combined;  // harmonic sum for series, plain sum for parallel
  bool holds;       // whole <= combined * (1 + slack)
};

// cut(x) is the height of the cut over abscissa x; q1 lies below it.
LawReport check_series_law(const QuadShape& q, const std::function<double(double)>& cut,
                           int cells_short = 128, double slack = kLawSlack);

// The base is split at abscissa split_x; each part sees the other as insulated.
LawReport check_parallel_law(const QuadShape& q, double split_x, int cells_short = 128,
                             double slack = kLawSlack);

struct ThinThickReport {
  double whole;
  std::vector<double> pieces;
  double pieces_sum;
  double constant;  // whole - pieces_sum
};

// All shapes are rasterized with the same spacing h.
ThinThickReport thin_thick_check(const QuadShape& whole, const std::vector<QuadShape>& pieces,
                                 double h);

struct Circle {
  Complex center;
  double radius;
};

// Modulus of the annulus between two nested circles. Concentric annuli use
// log(R/r) / (2 pi); otherwise a cut-cell grid with `cells` across the outer
// diameter is solved twice.
WidthEstimate modulus_annulus(const Circle& outer, const Circle& inner, int cells = 512);
WidthEstimate modulus_annulus_grid(const Circle& outer, const Circle& inner, int cells = 512);
// Möbius-invariant closed form through the inversive distance.
WidthEstimate modulus_annulus_closed_form(const Circle& outer, const Circle& inner);

struct Disk {
  Complex center;
  double radius;
  bool exterior = false;  // the complement of the closed round disk, containing infinity

  bool contains(Complex z) const;
  Complex boundary_point(double turns) const;
  double angle_of(Complex z) const;  // in turns
};

struct Mark {
  int disk;  // 0-based
  rotation::CombinatorialInterval interval;
};

class DiskConfiguration {
 public:
  DiskConfiguration() = default;
  // Throws DomainError unless radii are positive, at most one disk is
  // exterior, and closures are pairwise disjoint.
  explicit DiskConfiguration(std::vector<Disk> disks, std::vector<Mark> marks = {});

  const std::vector<Disk>& disks() const { return disks_; }
  const std::vector<Mark>& marks() const { return marks_; }
  int boundary_count() const { return static_cast<int>(disks_.size()); }
  int euler_characteristic() const { return 2 - boundary_count(); }

 private:
  std::vector<Disk> disks_;
  std::vector<Mark> marks_;
};

// Inversive distance of two disks with disjoint closures; > 1.
double inversive_distance(const Disk& a, const Disk& b);

// Lines "disk cx cy r", "disk cx cy r exterior", "mark k theta0 theta1"
// (0-based disk, angles in turns, counterclockwise from theta0 to theta1).
DiskConfiguration parse_disk_configuration(std::istream& in);

struct LogPolarOptions {
  int n_phi = 256;  // cells around the circle on the fine grid
  bool two_grids = true;
  bool allow_saturation = false;
};

struct LocalDegeneration {
  WidthEstimate w_plus;
  WidthEstimate w_sphere;
  int outer_disk;  // disk sent to the outside of the chart
};

// Curves from I on the boundary of disk k to B = (boundary of the complement)
// minus lambda I. Requires lambda >= 10 and at least two disks.
LocalDegeneration local_degeneration(const DiskConfiguration& cfg, int disk,
                                     const rotation::CombinatorialInterval& interval, double lambda,
                                     const LogPolarOptions& options = {});
LocalDegeneration local_degeneration(const DiskConfiguration& cfg, int mark_index, double lambda,
                                     const LogPolarOptions& options = {});

// Curves joining the boundaries of disks i and j in the complement of all
// disks. Throws DomainError unless the bounded disks have centers in convex
// position.
WidthEstimate arc_degeneration_pair(const DiskConfiguration& cfg, int i, int j,
                                    const LogPolarOptions& options = {});

bool centers_in_convex_position(const DiskConfiguration& cfg);

void write_width_csv(std::ostream& out,
                     const std::vector<std::pair<std::string, WidthEstimate>>& rows);

}  // namespace siegel::width
