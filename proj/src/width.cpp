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

#include "siegel/width.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include "siegel/errors.hpp"

namespace siegel::width {

namespace {

constexpr double kTau = 2.0 * std::numbers::pi;
constexpr double kMinCut = 0.01;
constexpr int kFaceSamples = 32;

std::string shortest(double x) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, end);
}

int find_root(std::vector<int>& parent, int x) {
  while (parent[static_cast<std::size_t>(x)] != x) {
    auto& p = parent[static_cast<std::size_t>(x)];
    p = parent[static_cast<std::size_t>(p)];
    x = p;
  }
  return x;
}

// Crossing parameter in (0, 1] where `inside` turns false on the segment a -> b.
template <class Pred>
double crossing(double ax, double ay, double bx, double by, const Pred& inside) {
  double lo = 0.0;
  double hi = 1.0;
  for (int it = 0; it < 50; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (inside(ax + mid * (bx - ax), ay + mid * (by - ay))) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Sparse LDL^T factorization used as a conjugate-gradient preconditioner; the
// iteration then only polishes the residual down to the tolerance.
class FactorPreconditioner {
 public:
  FactorPreconditioner() = default;
  template <typename Mat>
  explicit FactorPreconditioner(const Mat& m) {
    compute(m);
  }
  template <typename Mat>
  FactorPreconditioner& analyzePattern(const Mat&) {
    return *this;
  }
  template <typename Mat>
  FactorPreconditioner& factorize(const Mat& m) {
    return compute(m);
  }
  template <typename Mat>
  FactorPreconditioner& compute(const Mat& m) {
    ldlt_.compute(Eigen::SparseMatrix<double>(m));
    return *this;
  }
  template <typename Rhs>
  Eigen::VectorXd solve(const Rhs& b) const {
    return ldlt_.solve(b);
  }
  Eigen::ComputationInfo info() const { return ldlt_.info(); }

 private:
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt_;
};

class Mobius {
 public:
  Mobius(Complex a, Complex b, Complex c, Complex d) : a_(a), b_(b), c_(c), d_(d) {}

  Complex apply(Complex z) const { return (a_ * z + b_) / (c_ * z + d_); }
  Complex inverse(Complex w) const { return (d_ * w - b_) / (-c_ * w + a_); }

  // Image of a circle that avoids the pole.
  Circle image(const Circle& circle) const {
    if (c_ == 0.0) return {(a_ * circle.center + b_) / d_, std::abs(a_ / d_) * circle.radius};
    const Complex q = -d_ / c_;
    const Complex k = -(a_ * d_ - b_ * c_) / (c_ * c_);
    const Complex big_a = circle.center - q;
    const double denom = std::norm(big_a) - circle.radius * circle.radius;
    if (std::abs(denom) < 1e-300) throw DomainError("circle passes through the pole");
    const Complex inv_center = std::conj(big_a) / denom;
    const double inv_radius = circle.radius / std::abs(denom);
    return {a_ / c_ + k * inv_center, std::abs(k) * inv_radius};
  }

 private:
  Complex a_;
  Complex b_;
  Complex c_;
  Complex d_;
};

Circle circle_of(const Disk& d) { return {d.center, d.radius}; }

// Möbius map sending disk `in` to {|w| < rho_in} and disk `out` to {|w| > rho_out}.
struct Normalization {
  Mobius map;
  double rho_in;
  double rho_out;
};

Normalization normalize_pair(const Disk& in, const Disk& out) {
  const Complex a1 = in.center;
  const Complex a2 = out.center;
  const double r1 = in.radius;
  const double r2 = out.radius;
  const double d = std::abs(a2 - a1);
  Mobius map(1.0, 0.0, 0.0, 1.0);
  if (d < 1e-12 * (r1 + r2)) {
    if (in.contains(a1)) {
      map = Mobius(1.0, -a1, 0.0, 1.0);
    } else {
      map = Mobius(0.0, 1.0, 1.0, -a1);
    }
  } else {
    const Complex u = (a2 - a1) / d;
    const double s = (r1 * r1 - r2 * r2 + d * d) / d;
    const double disc = s * s - 4.0 * r1 * r1;
    if (!(disc > 0.0)) throw DomainError("circles are not disjoint");
    const double big = 0.5 * (s + std::copysign(std::sqrt(disc), s));
    const Complex p1 = a1 + big * u;
    const Complex p2 = a1 + (r1 * r1 / big) * u;
    Complex p_in = p1;
    Complex p_out = p2;
    if (!in.contains(p_in)) std::swap(p_in, p_out);
    if (!in.contains(p_in) || !out.contains(p_out)) {
      throw DomainError("limit points are not separated by the two disks");
    }
    map = Mobius(1.0, -p_in, 1.0, -p_out);
  }
  const Circle ci = map.image(circle_of(in));
  const Circle co = map.image(circle_of(out));
  if (!(ci.radius < co.radius)) throw DomainError("normalization failed to nest the disks");
  return {map, ci.radius, co.radius};
}

enum class InnerKind { Zero, One, Free };

struct LogPolarProblem {
  double s_lo;
  double s_hi;
  std::function<InnerKind(double)> inner_kind;  // by angle in radians on the inner circle
  std::vector<Circle> obstacles;                // in the w-plane
  bool obstacles_dirichlet;                     // tied to 1; otherwise insulated
  bool interior;                                // include the inner disk as a half-cylinder
  double interior_depth;
};

struct GridSolve {
  double width;
  double h;
  std::int64_t unknowns;
};

GridSolve solve_log_polar(const LogPolarProblem& pb, int n_phi) {
  const double h = kTau / n_phi;
  const int n_out = static_cast<int>(std::ceil((pb.s_hi - pb.s_lo) / h - 0.5));
  if (n_out < 2) throw DomainError("the annulus is thinner than two grid cells");
  const int n_in = pb.interior ? static_cast<int>(std::ceil(pb.interior_depth / h)) : 0;
  const int rows = n_out + n_in;

  // Row r < n_out sits at s_lo + (r + 1/2) h; row n_out + k at s_lo - (k + 1/2) h.
  auto row_s = [&](int r) {
    return r < n_out ? pb.s_lo + (r + 0.5) * h : pb.s_lo - (r - n_out + 0.5) * h;
  };
  auto in_obstacle = [&](double s, double phi) {
    const Complex w = std::polar(std::exp(s), phi);
    for (const auto& c : pb.obstacles) {
      if (std::abs(w - c.center) < c.radius) return true;
    }
    return false;
  };

  std::vector<int> index(static_cast<std::size_t>(rows) * n_phi, -1);
  int count = 0;
  for (int r = 0; r < rows; ++r) {
    for (int j = 0; j < n_phi; ++j) {
      const bool active = r >= n_out || !in_obstacle(row_s(r), (j + 0.5) * h);
      if (active) index[static_cast<std::size_t>(r) * n_phi + j] = count++;
    }
  }
  auto node = [&](int r, int j) {
    j = ((j % n_phi) + n_phi) % n_phi;
    return index[static_cast<std::size_t>(r) * n_phi + j];
  };

  Network net(count);
  auto obstacle_tie = [&](int a, double s, double phi, double ds, double dphi) {
    if (!pb.obstacles_dirichlet) return;
    const double t = crossing(s, phi, s + ds, phi + dphi,
                              [&](double x, double y) { return !in_obstacle(x, y); });
    net.tie(a, 1.0, 1.0 / std::max(t, kMinCut));
  };

  for (int r = 0; r < n_out; ++r) {
    const double s = row_s(r);
    for (int j = 0; j < n_phi; ++j) {
      const int a = node(r, j);
      if (a < 0) continue;
      const double phi = (j + 0.5) * h;
      for (int dj : {-1, 1}) {
        const int b = node(r, j + dj);
        if (b >= 0) {
          if (dj == 1) net.connect(a, b, 1.0);
        } else {
          obstacle_tie(a, s, phi, 0.0, dj * h);
        }
      }
      if (r + 1 == n_out) {
        const double t = (pb.s_hi - s) / h;
        net.tie(a, 1.0, 1.0 / std::max(t, kMinCut));
      } else {
        const int b = node(r + 1, j);
        if (b >= 0) {
          net.connect(a, b, 1.0);
        } else {
          obstacle_tie(a, s, phi, h, 0.0);
        }
      }
      if (r > 0) {
        if (node(r - 1, j) < 0) obstacle_tie(a, s, phi, -h, 0.0);
        continue;
      }
      // Faces straddling an endpoint are split by the fraction of each kind.
      double frac[3] = {0.0, 0.0, 0.0};
      for (int k = 0; k < kFaceSamples; ++k) {
        const double sample = (j + (k + 0.5) / kFaceSamples) * h;
        frac[static_cast<int>(pb.inner_kind(sample))] += 1.0 / kFaceSamples;
      }
      const int c = pb.interior ? node(n_out, j) : -1;
      for (int kind = 0; kind < 2; ++kind) {
        if (frac[kind] == 0.0) continue;
        net.tie(a, kind, 2.0 * frac[kind]);
        if (c >= 0) net.tie(c, kind, 2.0 * frac[kind]);
      }
      if (c >= 0 && frac[2] > 0.0) net.connect(a, c, frac[2]);
    }
  }
  for (int r = n_out; r < rows; ++r) {
    for (int j = 0; j < n_phi; ++j) {
      const int a = node(r, j);
      net.connect(a, node(r, j + 1), 1.0);
      if (r + 1 < rows) net.connect(a, node(r + 1, j), 1.0);
    }
  }
  return {net.solve().energy, h, count};
}

WidthEstimate two_grid_log_polar(const LogPolarProblem& pb, const LogPolarOptions& options) {
  if (options.n_phi < 16) throw DomainError("need at least 16 cells around the circle");
  const GridSolve fine = solve_log_polar(pb, options.n_phi);
  WidthEstimate est{fine.width, Method::GridLaplace, fine.h, 0.0, fine.unknowns};
  if (options.two_grids) {
    const GridSolve coarse = solve_log_polar(pb, options.n_phi / 2);
    est.error_estimate = std::abs(fine.width - coarse.width);
  }
  return est;
}

void check_disk_index(const DiskConfiguration& cfg, int k) {
  if (k < 0 || k >= cfg.boundary_count()) {
    throw DomainError("disk index " + std::to_string(k) + " is out of range");
  }
}

std::vector<Circle> obstacle_images(const DiskConfiguration& cfg, const Mobius& map, int skip1,
                                    int skip2) {
  std::vector<Circle> out;
  for (int m = 0; m < cfg.boundary_count(); ++m) {
    if (m == skip1 || m == skip2) continue;
    out.push_back(map.image(circle_of(cfg.disks()[static_cast<std::size_t>(m)])));
  }
  return out;
}

double cross(Complex o, Complex a, Complex b) {
  return (a.real() - o.real()) * (b.imag() - o.imag()) - (a.imag() - o.imag()) * (b.real() - o.real());
}

}  // namespace

std::string to_string(Method m) { return m == Method::GridLaplace ? "grid_laplace" : "closed_form"; }

Network::Network(int nodes) : n_(nodes) {
  if (nodes < 0) throw DomainError("negative node count");
}

void Network::connect(int a, int b, double conductance) {
  if (a < 0 || b < 0 || a >= n_ || b >= n_ || a == b) throw DomainError("bad network edge");
  if (!(conductance > 0.0)) throw DomainError("conductance must be positive");
  edges_.push_back({a, b, conductance});
}

void Network::tie(int node, double potential, double conductance) {
  if (node < 0 || node >= n_) throw DomainError("bad network node");
  if (!(conductance > 0.0)) throw DomainError("conductance must be positive");
  ties_.push_back({node, potential, conductance});
}

Network::Solution Network::solve(double tolerance) const {
  std::vector<int> parent(static_cast<std::size_t>(n_));
  std::iota(parent.begin(), parent.end(), 0);
  for (const auto& e : edges_) {
    const int ra = find_root(parent, e.a);
    const int rb = find_root(parent, e.b);
    if (ra != rb) parent[static_cast<std::size_t>(ra)] = rb;
  }
  std::vector<char> grounded(static_cast<std::size_t>(n_), 0);
  for (const auto& t : ties_) grounded[static_cast<std::size_t>(find_root(parent, t.node))] = 1;
  std::vector<int> slot(static_cast<std::size_t>(n_), -1);
  int m = 0;
  for (int v = 0; v < n_; ++v) {
    if (grounded[static_cast<std::size_t>(find_root(parent, v))]) slot[static_cast<std::size_t>(v)] = m++;
  }

  Solution sol;
  sol.potential.assign(static_cast<std::size_t>(n_), 0.0);
  if (m == 0) return sol;

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(edges_.size() * 4 + ties_.size());
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
  for (const auto& e : edges_) {
    const int a = slot[static_cast<std::size_t>(e.a)];
    const int b = slot[static_cast<std::size_t>(e.b)];
    if (a < 0) continue;
    trip.emplace_back(a, a, e.c);
    trip.emplace_back(b, b, e.c);
    trip.emplace_back(a, b, -e.c);
    trip.emplace_back(b, a, -e.c);
  }
  for (const auto& t : ties_) {
    const int a = slot[static_cast<std::size_t>(t.node)];
    trip.emplace_back(a, a, t.c);
    rhs(a) += t.c * t.value;
  }
  Eigen::SparseMatrix<double> mat(m, m);
  mat.setFromTriplets(trip.begin(), trip.end());

  Eigen::VectorXd x = Eigen::VectorXd::Zero(m);
  if (rhs.norm() > 0.0) {
    Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper,
                             FactorPreconditioner>
        cg;
    cg.setTolerance(tolerance);
    cg.setMaxIterations(std::max(1000, 20 * m));
    cg.compute(mat);
    if (cg.info() != Eigen::Success) throw SolverDiverged("preconditioner setup failed");
    x = cg.solve(rhs);
    sol.iterations = static_cast<int>(cg.iterations());
    sol.residual = cg.error();
    if (cg.info() != Eigen::Success || !(cg.error() <= tolerance)) {
      throw SolverDiverged("residual " + shortest(cg.error()) + " after " +
                           std::to_string(cg.iterations()) + " iterations");
    }
  }
  for (int v = 0; v < n_; ++v) {
    const int a = slot[static_cast<std::size_t>(v)];
    if (a >= 0) sol.potential[static_cast<std::size_t>(v)] = x(a);
  }
  double energy = 0.0;
  for (const auto& e : edges_) {
    const double d = sol.potential[static_cast<std::size_t>(e.a)] - sol.potential[static_cast<std::size_t>(e.b)];
    energy += e.c * d * d;
  }
  for (const auto& t : ties_) {
    const double d = sol.potential[static_cast<std::size_t>(t.node)] - t.value;
    energy += t.c * d * d;
  }
  sol.energy = energy;
  return sol;
}

double QuadShape::shorter_side() const { return std::min(x1 - x0, y1 - y0); }

QuadShape rectangle_shape(double width, double height) {
  if (!(width > 0.0 && height > 0.0)) throw DomainError("rectangle sides must be positive");
  QuadShape q;
  q.x1 = width;
  q.y1 = height;
  q.inside = [width, height](double x, double y) { return x > 0.0 && x < width && y > 0.0 && y < height; };
  q.label = [](const FaceInfo& f) {
    if (f.ny < 0) return FaceLabel::Base;
    if (f.ny > 0) return FaceLabel::Roof;
    return f.nx > 0 ? FaceLabel::SideA : FaceLabel::SideB;
  };
  return q;
}

QuadShape l_shape() {
  QuadShape q;
  q.x1 = 2.0;
  q.y1 = 2.0;
  q.inside = [](double x, double y) {
    return (x > 0.0 && x < 2.0 && y > 0.0 && y < 1.0) || (x > 0.0 && x < 1.0 && y > 0.0 && y < 2.0);
  };
  q.label = [](const FaceInfo& f) {
    if (f.ny < 0) return FaceLabel::Base;
    if (f.nx < 0) return FaceLabel::SideB;
    if (f.nx > 0) return FaceLabel::SideA;
    return f.y > 1.5 ? FaceLabel::Roof : FaceLabel::SideA;
  };
  return q;
}

QuadShape swapped(const QuadShape& q) {
  QuadShape out = q;
  out.label = [inner = q.label](const FaceInfo& f) {
    switch (inner(f)) {
      case FaceLabel::Base: return FaceLabel::SideB;
      case FaceLabel::SideA: return FaceLabel::Base;
      case FaceLabel::Roof: return FaceLabel::SideA;
      case FaceLabel::SideB: return FaceLabel::Roof;
    }
    return FaceLabel::SideA;
  };
  return out;
}

GridQuadrilateral::GridQuadrilateral(int nx, int ny, double h, double x0, double y0,
                                     std::vector<char> mask,
                                     const std::function<FaceLabel(const FaceInfo&)>& label)
    : nx_(nx), ny_(ny), h_(h), x0_(x0), y0_(y0), mask_(std::move(mask)) {
  if (nx <= 0 || ny <= 0 || !(h > 0.0)) throw DomainError("empty grid");
  if (mask_.size() != static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny)) {
    throw DomainError("mask size does not match the grid");
  }
  const int cells = cell_count();
  if (cells == 0) throw DomainError("mask is empty");

  // Connectivity.
  std::vector<char> seen(mask_.size(), 0);
  std::vector<std::pair<int, int>> stack;
  for (int j = 0; j < ny && stack.empty(); ++j) {
    for (int i = 0; i < nx; ++i) {
      if (in_mask(i, j)) {
        stack.emplace_back(i, j);
        seen[static_cast<std::size_t>(j) * nx + i] = 1;
        break;
      }
    }
  }
  int reached = 0;
  while (!stack.empty()) {
    const auto [i, j] = stack.back();
    stack.pop_back();
    ++reached;
    const int di[4] = {1, -1, 0, 0};
    const int dj[4] = {0, 0, 1, -1};
    for (int k = 0; k < 4; ++k) {
      const int a = i + di[k];
      const int b = j + dj[k];
      if (in_mask(a, b) && !seen[static_cast<std::size_t>(b) * nx + a]) {
        seen[static_cast<std::size_t>(b) * nx + a] = 1;
        stack.emplace_back(a, b);
      }
    }
  }
  if (reached != cells) throw DomainError("mask is not connected");

  // Boundary faces, oriented with the mask on the left.
  struct Directed {
    int i, j, dir;
    std::int64_t from, to;
  };
  std::vector<Directed> faces;
  auto key = [ny](int vx, int vy) { return static_cast<std::int64_t>(vx) * (ny + 1) + vy; };
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      if (!in_mask(i, j)) continue;
      if (!in_mask(i, j - 1)) faces.push_back({i, j, 0, key(i, j), key(i + 1, j)});
      if (!in_mask(i + 1, j)) faces.push_back({i, j, 1, key(i + 1, j), key(i + 1, j + 1)});
      if (!in_mask(i, j + 1)) faces.push_back({i, j, 2, key(i + 1, j + 1), key(i, j + 1)});
      if (!in_mask(i - 1, j)) faces.push_back({i, j, 3, key(i, j + 1), key(i, j)});
    }
  }
  std::unordered_map<std::int64_t, int> by_start;
  for (int f = 0; f < static_cast<int>(faces.size()); ++f) {
    if (!by_start.emplace(faces[static_cast<std::size_t>(f)].from, f).second) {
      throw DomainError("mask boundary has a pinch point");
    }
  }
  std::vector<int> order;
  order.reserve(faces.size());
  int f = 0;
  do {
    order.push_back(f);
    f = by_start.at(faces[static_cast<std::size_t>(f)].to);
  } while (f != 0 && order.size() <= faces.size());
  if (order.size() != faces.size()) throw DomainError("mask is not simply connected");

  for (int idx : order) {
    const auto& d = faces[static_cast<std::size_t>(idx)];
    FaceInfo info{x0 + (d.i + 0.5) * h, y0 + (d.j + 0.5) * h, 0, 0, h};
    switch (d.dir) {
      case 0: info.y -= 0.5 * h; info.ny = -1; break;
      case 1: info.x += 0.5 * h; info.nx = 1; break;
      case 2: info.y += 0.5 * h; info.ny = 1; break;
      default: info.x -= 0.5 * h; info.nx = -1; break;
    }
    boundary_.push_back({d.i, d.j, d.dir, label(info)});
  }

  // The labels must form exactly four cyclic runs in the order base, A, roof, B.
  const std::size_t n = boundary_.size();
  std::size_t start = n;
  for (std::size_t k = 0; k < n; ++k) {
    if (boundary_[k].label != boundary_[(k + n - 1) % n].label) {
      start = k;
      break;
    }
  }
  if (start == n) throw DomainError("boundary carries a single label");
  std::vector<FaceLabel> runs;
  for (std::size_t k = 0; k < n; ++k) {
    const FaceLabel l = boundary_[(start + k) % n].label;
    if (runs.empty() || runs.back() != l) runs.push_back(l);
  }
  if (runs.size() != 4) throw DomainError("boundary labels do not form four arcs");
  const auto first = std::find(runs.begin(), runs.end(), FaceLabel::Base);
  if (first == runs.end()) throw DomainError("no base arc");
  std::rotate(runs.begin(), first, runs.end());
  if (runs[1] != FaceLabel::SideA || runs[2] != FaceLabel::Roof || runs[3] != FaceLabel::SideB) {
    throw DomainError("boundary arcs are not in the order base, side, roof, side");
  }
}

bool GridQuadrilateral::in_mask(int i, int j) const {
  if (i < 0 || j < 0 || i >= nx_ || j >= ny_) return false;
  return mask_[static_cast<std::size_t>(j) * nx_ + i] != 0;
}

int GridQuadrilateral::cell_count() const {
  return static_cast<int>(std::count_if(mask_.begin(), mask_.end(), [](char c) { return c != 0; }));
}

int GridQuadrilateral::face_count(FaceLabel label) const {
  return static_cast<int>(
      std::count_if(boundary_.begin(), boundary_.end(), [label](const BoundaryFace& f) { return f.label == label; }));
}

Network GridQuadrilateral::network() const {
  std::vector<int> index(mask_.size(), -1);
  int count = 0;
  for (std::size_t k = 0; k < mask_.size(); ++k) {
    if (mask_[k]) index[k] = count++;
  }
  auto at = [&](int i, int j) { return index[static_cast<std::size_t>(j) * nx_ + i]; };
  Network net(count);
  for (int j = 0; j < ny_; ++j) {
    for (int i = 0; i < nx_; ++i) {
      if (!in_mask(i, j)) continue;
      if (in_mask(i + 1, j)) net.connect(at(i, j), at(i + 1, j), 1.0);
      if (in_mask(i, j + 1)) net.connect(at(i, j), at(i, j + 1), 1.0);
    }
  }
  // A boundary face sits half a cell from the center: conductance 2.
  for (const auto& f : boundary_) {
    if (f.label == FaceLabel::Base) net.tie(at(f.i, f.j), 0.0, 2.0);
    if (f.label == FaceLabel::Roof) net.tie(at(f.i, f.j), 1.0, 2.0);
  }
  return net;
}

GridQuadrilateral rasterize_spacing(const QuadShape& q, double h) {
  if (!q.inside || !q.label) throw DomainError("shape needs an inside test and a labeling");
  if (!(h > 0.0) || !(q.x1 > q.x0) || !(q.y1 > q.y0)) throw DomainError("bad grid spacing or box");
  const int nx = std::max(1, static_cast<int>(std::ceil((q.x1 - q.x0) / h - 1e-9)));
  const int ny = std::max(1, static_cast<int>(std::ceil((q.y1 - q.y0) / h - 1e-9)));
  std::vector<char> mask(static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny), 0);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      mask[static_cast<std::size_t>(j) * nx + i] = q.inside(q.x0 + (i + 0.5) * h, q.y0 + (j + 0.5) * h) ? 1 : 0;
    }
  }
  return GridQuadrilateral(nx, ny, h, q.x0, q.y0, std::move(mask), q.label);
}

GridQuadrilateral rasterize(const QuadShape& q, int cells_short) {
  if (cells_short < 1) throw DomainError("need at least one cell");
  return rasterize_spacing(q, q.shorter_side() / cells_short);
}

WidthEstimate width_rectangle(const GridQuadrilateral& q) {
  const auto sol = q.network().solve();
  return {sol.energy, Method::GridLaplace, q.h(), 0.0, q.cell_count()};
}

WidthEstimate width_rectangle(const QuadShape& q, int cells_short) {
  if (cells_short < 16) throw DomainError("need at least 16 cells across the shorter side");
  WidthEstimate fine = width_rectangle(rasterize(q, cells_short));
  const WidthEstimate coarse = width_rectangle(rasterize(q, cells_short / 2));
  fine.error_estimate = std::abs(fine.value - coarse.value);
  return fine;
}

double harmonic_sum(double x, double y) {
  if (std::isinf(x)) return y;
  if (std::isinf(y)) return x;
  if (!(x > 0.0 && y > 0.0)) throw DomainError("harmonic sum needs positive arguments");
  return x * y / (x + y);
}

LawReport check_series_law(const QuadShape& q, const std::function<double(double)>& cut,
                           int cells_short, double slack) {
  QuadShape lower = q;
  lower.inside = [q, cut](double x, double y) { return q.inside(x, y) && y < cut(x); };
  lower.label = [q, cut](const FaceInfo& f) {
    const double ox = f.outside_x();
    const double oy = f.outside_y();
    if (q.inside(ox, oy) && oy >= cut(ox)) return FaceLabel::Roof;
    const FaceLabel l = q.label(f);
    if (l == FaceLabel::Roof) throw DomainError("cut does not separate base from roof");
    return l;
  };
  QuadShape upper = q;
  upper.inside = [q, cut](double x, double y) { return q.inside(x, y) && y >= cut(x); };
  upper.label = [q, cut](const FaceInfo& f) {
    const double ox = f.outside_x();
    const double oy = f.outside_y();
    if (q.inside(ox, oy) && oy < cut(ox)) return FaceLabel::Base;
    const FaceLabel l = q.label(f);
    if (l == FaceLabel::Base) throw DomainError("cut does not separate base from roof");
    return l;
  };
  const double h = q.shorter_side() / cells_short;
  LawReport r{};
  r.whole = width_rectangle(rasterize_spacing(q, h)).value;
  r.part1 = width_rectangle(rasterize_spacing(lower, h)).value;
  r.part2 = width_rectangle(rasterize_spacing(upper, h)).value;
  r.combined = harmonic_sum(r.part1, r.part2);
  r.holds = r.whole <= r.combined * (1.0 + slack);
  return r;
}

LawReport check_parallel_law(const QuadShape& q, double split_x, int cells_short, double slack) {
  QuadShape left = q;
  left.label = [q, split_x](const FaceInfo& f) {
    const FaceLabel l = q.label(f);
    return l == FaceLabel::Base && f.x > split_x ? FaceLabel::SideA : l;
  };
  QuadShape right = q;
  right.label = [q, split_x](const FaceInfo& f) {
    const FaceLabel l = q.label(f);
    return l == FaceLabel::Base && f.x < split_x ? FaceLabel::SideB : l;
  };
  const double h = q.shorter_side() / cells_short;
  LawReport r{};
  r.whole = width_rectangle(rasterize_spacing(q, h)).value;
  r.part1 = width_rectangle(rasterize_spacing(left, h)).value;
  r.part2 = width_rectangle(rasterize_spacing(right, h)).value;
  r.combined = r.part1 + r.part2;
  r.holds = r.whole <= r.combined * (1.0 + slack);
  return r;
}

ThinThickReport thin_thick_check(const QuadShape& whole, const std::vector<QuadShape>& pieces, double h) {
  ThinThickReport r{};
  r.whole = width_rectangle(rasterize_spacing(whole, h)).value;
  r.pieces_sum = 0.0;
  for (const auto& p : pieces) {
    r.pieces.push_back(width_rectangle(rasterize_spacing(p, h)).value);
    r.pieces_sum += r.pieces.back();
  }
  r.constant = r.whole - r.pieces_sum;
  return r;
}

namespace {

void check_nested(const Circle& outer, const Circle& inner) {
  if (!(outer.radius > 0.0 && inner.radius > 0.0)) throw DomainError("radii must be positive");
  if (!(std::abs(outer.center - inner.center) + inner.radius < outer.radius)) {
    throw DomainError("inner disk must lie inside the outer disk");
  }
}

double annulus_conductance(const Circle& outer, const Circle& inner, int cells, std::int64_t* unknowns) {
  const double big_r = outer.radius;
  const double h = 2.0 * big_r / cells;
  const double x0 = outer.center.real() - big_r;
  const double y0 = outer.center.imag() - big_r;
  auto inside = [&](double x, double y) {
    const Complex z(x, y);
    return std::abs(z - outer.center) < big_r && std::abs(z - inner.center) > inner.radius;
  };
  std::vector<int> index(static_cast<std::size_t>(cells) * cells, -1);
  int count = 0;
  for (int j = 0; j < cells; ++j) {
    for (int i = 0; i < cells; ++i) {
      if (inside(x0 + (i + 0.5) * h, y0 + (j + 0.5) * h)) index[static_cast<std::size_t>(j) * cells + i] = count++;
    }
  }
  auto at = [&](int i, int j) {
    if (i < 0 || j < 0 || i >= cells || j >= cells) return -1;
    return index[static_cast<std::size_t>(j) * cells + i];
  };
  Network net(count);
  const int di[4] = {1, 0, -1, 0};
  const int dj[4] = {0, 1, 0, -1};
  for (int j = 0; j < cells; ++j) {
    for (int i = 0; i < cells; ++i) {
      const int a = at(i, j);
      if (a < 0) continue;
      const double x = x0 + (i + 0.5) * h;
      const double y = y0 + (j + 0.5) * h;
      for (int k = 0; k < 4; ++k) {
        const int b = at(i + di[k], j + dj[k]);
        if (b >= 0) {
          if (k < 2) net.connect(a, b, 1.0);
          continue;
        }
        const double bx = x + di[k] * h;
        const double by = y + dj[k] * h;
        const double t = crossing(x, y, bx, by, inside);
        const Complex p(x + t * (bx - x), y + t * (by - y));
        const double to_inner = std::abs(std::abs(p - inner.center) - inner.radius);
        const double to_outer = std::abs(std::abs(p - outer.center) - big_r);
        net.tie(a, to_inner < to_outer ? 0.0 : 1.0, 1.0 / std::max(t, kMinCut));
      }
    }
  }
  *unknowns = count;
  return net.solve().energy;
}

}  // namespace

WidthEstimate modulus_annulus_closed_form(const Circle& outer, const Circle& inner) {
  check_nested(outer, inner);
  const double d = std::abs(outer.center - inner.center);
  const double big_r = outer.radius;
  const double r = inner.radius;
  double value;
  if (d == 0.0) {
    value = std::log(big_r / r) / kTau;
  } else {
    const double delta = (big_r * big_r + r * r - d * d) / (2.0 * big_r * r);
    value = std::acosh(delta) / kTau;
  }
  return {value, Method::ClosedForm, 0.0, 0.0, 0};
}

WidthEstimate modulus_annulus_grid(const Circle& outer, const Circle& inner, int cells) {
  check_nested(outer, inner);
  if (cells < 32) throw DomainError("need at least 32 cells across the outer diameter");
  std::int64_t unknowns = 0;
  std::int64_t coarse_unknowns = 0;
  const double fine = 1.0 / annulus_conductance(outer, inner, cells, &unknowns);
  const double coarse = 1.0 / annulus_conductance(outer, inner, cells / 2, &coarse_unknowns);
  return {fine, Method::GridLaplace, 2.0 * outer.radius / cells, std::abs(fine - coarse), unknowns};
}

WidthEstimate modulus_annulus(const Circle& outer, const Circle& inner, int cells) {
  check_nested(outer, inner);
  if (std::abs(outer.center - inner.center) == 0.0) return modulus_annulus_closed_form(outer, inner);
  return modulus_annulus_grid(outer, inner, cells);
}

bool Disk::contains(Complex z) const {
  const double d = std::abs(z - center);
  return exterior ? d > radius : d < radius;
}

Complex Disk::boundary_point(double turns) const { return center + std::polar(radius, kTau * turns); }

double Disk::angle_of(Complex z) const { return rotation::wrap(std::arg(z - center) / kTau); }

double inversive_distance(const Disk& a, const Disk& b) {
  const double d2 = std::norm(a.center - b.center);
  const double ra = a.radius;
  const double rb = b.radius;
  if (a.exterior == b.exterior) return (d2 - ra * ra - rb * rb) / (2.0 * ra * rb);
  return (ra * ra + rb * rb - d2) / (2.0 * ra * rb);
}

DiskConfiguration::DiskConfiguration(std::vector<Disk> disks, std::vector<Mark> marks)
    : disks_(std::move(disks)), marks_(std::move(marks)) {
  int exterior = 0;
  for (const auto& d : disks_) {
    if (!(d.radius > 0.0) || !std::isfinite(d.radius)) throw DomainError("disk radii must be positive");
    if (d.exterior) ++exterior;
  }
  if (exterior > 1) throw DomainError("at most one disk may contain infinity");
  for (std::size_t i = 0; i < disks_.size(); ++i) {
    for (std::size_t j = i + 1; j < disks_.size(); ++j) {
      const auto& a = disks_[i];
      const auto& b = disks_[j];
      const double d = std::abs(a.center - b.center);
      bool ok;
      if (!a.exterior && !b.exterior) {
        ok = d > a.radius + b.radius;
      } else {
        const Disk& out = a.exterior ? a : b;
        const Disk& in = a.exterior ? b : a;
        ok = d + in.radius < out.radius;
      }
      if (!ok) {
        throw DomainError("disks " + std::to_string(i) + " and " + std::to_string(j) +
                          " have overlapping closures");
      }
    }
  }
  for (const auto& m : marks_) {
    if (m.disk < 0 || m.disk >= boundary_count()) throw DomainError("mark refers to a missing disk");
    if (!(m.interval.length > 0.0 && m.interval.length < 1.0)) {
      throw DomainError("marked interval must be a proper arc");
    }
  }
}

DiskConfiguration parse_disk_configuration(std::istream& in) {
  std::vector<Disk> disks;
  std::vector<Mark> marks;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string word;
    if (!(ls >> word)) continue;
    const std::string where = "line " + std::to_string(lineno);
    if (word == "disk") {
      double cx, cy, r;
      if (!(ls >> cx >> cy >> r)) throw ParseError(where + ": expected 'disk cx cy r'");
      Disk d{{cx, cy}, r, false};
      std::string flag;
      if (ls >> flag) {
        if (flag != "exterior") throw ParseError(where + ": unknown disk flag '" + flag + "'");
        d.exterior = true;
      }
      disks.push_back(d);
    } else if (word == "mark") {
      int k;
      double t0, t1;
      if (!(ls >> k >> t0 >> t1)) throw ParseError(where + ": expected 'mark disk theta0 theta1'");
      const double length = rotation::wrap(t1 - t0);
      if (length == 0.0) throw ParseError(where + ": empty marked interval");
      marks.push_back({k, {rotation::wrap(t0), length, std::nullopt}});
    } else {
      throw ParseError(where + ": unknown keyword '" + word + "'");
    }
    std::string extra;
    if (ls >> extra) throw ParseError(where + ": trailing token '" + extra + "'");
  }
  return DiskConfiguration(std::move(disks), std::move(marks));
}

LocalDegeneration local_degeneration(const DiskConfiguration& cfg, int disk,
                                     const rotation::CombinatorialInterval& interval, double lambda,
                                     const LogPolarOptions& options) {
  if (cfg.boundary_count() < 2) throw DomainError("need at least two disks");
  check_disk_index(cfg, disk);
  if (!(lambda >= 10.0)) throw DomainError("lambda must be at least 10");
  if (!(interval.length > 0.0 && interval.length < 1.0)) throw DomainError("interval must be a proper arc");
  const auto scaled = rotation::scale_interval(interval, lambda);
  if (scaled.saturated && !options.allow_saturation) {
    throw SaturatedInterval("lambda I covers the whole circle");
  }

  const auto& disks = cfg.disks();
  const Disk& home = disks[static_cast<std::size_t>(disk)];
  int far = -1;
  double best = std::numeric_limits<double>::infinity();
  for (int m = 0; m < cfg.boundary_count(); ++m) {
    if (m == disk) continue;
    const double delta = inversive_distance(home, disks[static_cast<std::size_t>(m)]);
    if (delta < best) {
      best = delta;
      far = m;
    }
  }
  const Normalization norm = normalize_pair(home, disks[static_cast<std::size_t>(far)]);

  LogPolarProblem pb;
  pb.s_lo = std::log(norm.rho_in);
  pb.s_hi = std::log(norm.rho_out);
  pb.obstacles = obstacle_images(cfg, norm.map, disk, far);
  pb.obstacles_dirichlet = true;
  pb.interior_depth = 3.0 * std::numbers::pi;
  const Mobius map = norm.map;
  const double rho = norm.rho_in;
  pb.inner_kind = [map, rho, home, interval, scaled](double phi) {
    const double theta = home.angle_of(map.inverse(std::polar(rho, phi)));
    if (interval.contains(theta)) return InnerKind::Zero;
    if (scaled.interval.contains(theta)) return InnerKind::Free;
    return InnerKind::One;
  };

  LocalDegeneration out;
  out.outer_disk = far;
  pb.interior = false;
  out.w_plus = two_grid_log_polar(pb, options);
  pb.interior = true;
  out.w_sphere = two_grid_log_polar(pb, options);
  return out;
}

LocalDegeneration local_degeneration(const DiskConfiguration& cfg, int mark_index, double lambda,
                                     const LogPolarOptions& options) {
  if (mark_index < 0 || mark_index >= static_cast<int>(cfg.marks().size())) {
    throw DomainError("mark index out of range");
  }
  const Mark& m = cfg.marks()[static_cast<std::size_t>(mark_index)];
  return local_degeneration(cfg, m.disk, m.interval, lambda, options);
}

bool centers_in_convex_position(const DiskConfiguration& cfg) {
  std::vector<Complex> pts;
  for (const auto& d : cfg.disks()) {
    if (!d.exterior) pts.push_back(d.center);
  }
  if (pts.size() <= 2) return true;
  std::sort(pts.begin(), pts.end(), [](Complex a, Complex b) {
    return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
  });
  // Monotone chain keeping strict turns only.
  std::vector<Complex> hull;
  for (int pass = 0; pass < 2; ++pass) {
    const std::size_t base = hull.size();
    for (const auto& p : pts) {
      while (hull.size() >= base + 2 && cross(hull[hull.size() - 2], hull.back(), p) <= 0.0) hull.pop_back();
      hull.push_back(p);
    }
    hull.pop_back();
    std::reverse(pts.begin(), pts.end());
  }
  return hull.size() == pts.size();
}

WidthEstimate arc_degeneration_pair(const DiskConfiguration& cfg, int i, int j,
                                    const LogPolarOptions& options) {
  check_disk_index(cfg, i);
  check_disk_index(cfg, j);
  if (i == j) throw DomainError("need two different disks");
  if (!centers_in_convex_position(cfg)) throw DomainError("disk centers are not in convex position");
  const auto& disks = cfg.disks();
  const Normalization norm = normalize_pair(disks[static_cast<std::size_t>(i)], disks[static_cast<std::size_t>(j)]);
  LogPolarProblem pb;
  pb.s_lo = std::log(norm.rho_in);
  pb.s_hi = std::log(norm.rho_out);
  pb.inner_kind = [](double) { return InnerKind::Zero; };
  pb.obstacles = obstacle_images(cfg, norm.map, i, j);
  pb.obstacles_dirichlet = false;
  pb.interior = false;
  pb.interior_depth = 0.0;
  return two_grid_log_polar(pb, options);
}

void write_width_csv(std::ostream& out, const std::vector<std::pair<std::string, WidthEstimate>>& rows) {
  out << "name,value,error_estimate,grid\n";
  for (const auto& [name, est] : rows) {
    out << name << ',' << shortest(est.value) << ',' << shortest(est.error_estimate) << ','
        << shortest(est.grid_spacing) << '\n';
  }
}

}  // namespace siegel::width
