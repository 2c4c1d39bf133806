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

#include "siegel/obstruction.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "siegel/errors.hpp"

namespace siegel::obstruction {

namespace {

constexpr int kPowerIterations = 20000;
constexpr double kBracketTol = 1e-12;
constexpr double kRoundingSlack = 1e-14;

struct ClassRoot {
  double value;
  double lower;
  double upper;
  Vector perron;  // positive, sums to one; empty for a zero singleton
};

void require_nonnegative(const Matrix& a) {
  if (a.rows() != a.cols() || a.rows() == 0) throw DomainError("matrix must be square and nonempty");
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      if (!(a(i, j) >= 0.0) || !std::isfinite(a(i, j))) {
        throw DomainError("matrix entries must be finite and nonnegative");
      }
    }
  }
}

std::pair<double, double> row_sum_bounds(const Matrix& a) {
  const Vector sums = a.rowwise().sum();
  return {sums.minCoeff(), sums.maxCoeff()};
}

// Collatz-Wielandt bracket of s = b + I at a positive vector x.
std::pair<double, double> bracket(const Matrix& s, const Vector& x, Vector& y) {
  y = s * x;
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double r = y(i) / x(i);
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  return {lo, hi};
}

ClassRoot perron_of_block(const Matrix& b, const Matrix& whole) {
  const Eigen::Index n = b.rows();
  if (n == 1) {
    const double r = b(0, 0);
    return {r, r, r, r > 0.0 ? Vector::Ones(1) : Vector()};
  }
  const Matrix s = b + Matrix::Identity(n, n);
  const auto run = [&](Vector x, int steps) -> std::optional<ClassRoot> {
    Vector y(n);
    for (int k = 0; k < steps; ++k) {
      const auto [lo, hi] = bracket(s, x, y);
      if (hi - lo <= kBracketTol * hi) {
        return ClassRoot{0.5 * (lo + hi) - 1.0, lo - 1.0, hi - 1.0, x / x.sum()};
      }
      x = y / y.sum();
    }
    return std::nullopt;
  };

  if (auto root = run(Vector::Constant(n, 1.0 / static_cast<double>(n)), kPowerIterations)) {
    return *root;
  }
  // Seed from a dense eigensolver and let a short iteration certify it.
  Eigen::EigenSolver<Matrix> es(b);
  Eigen::Index best = 0;
  for (Eigen::Index k = 1; k < n; ++k) {
    if (es.eigenvalues()(k).real() > es.eigenvalues()(best).real()) best = k;
  }
  Vector seed = es.eigenvectors().col(best).real().cwiseAbs();
  const double floor = 1e-300 + 1e-14 * seed.maxCoeff();
  seed = seed.cwiseMax(floor);
  if (auto root = run(seed / seed.sum(), 2000)) return *root;
  const auto [glo, ghi] = row_sum_bounds(whole);
  throw ConvergenceFailure("power iteration did not settle", glo, ghi);
}

Matrix sub_block(const Matrix& a, const std::vector<int>& rows, const std::vector<int>& cols) {
  Matrix out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) out(i, j) = a(rows[i], cols[j]);
  }
  return out;
}

std::vector<std::string> tokens_of(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream ss(line.substr(0, line.find('#')));
  for (std::string tok; ss >> tok;) out.push_back(tok);
  return out;
}

int parse_int(std::string_view tok, int line_no) {
  int value = 0;
  const auto [end, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (tok.empty() || ec != std::errc() || end != tok.data() + tok.size()) {
    throw ParseError("line " + std::to_string(line_no) + ": bad integer '" + std::string(tok) + "'");
  }
  return value;
}

int parse_edge_ref(std::string_view tok, int line_no) {
  if (!tok.empty() && (tok.front() == 'E' || tok.front() == 'e')) tok.remove_prefix(1);
  return parse_int(tok, line_no);
}

}  // namespace

CurveSystem::CurveSystem(int n) : n_(n) {
  if (n < 1) throw DomainError("a curve system needs at least one curve");
}

void CurveSystem::add_component(int sigma, int tau, int degree) {
  if (sigma < 0 || sigma >= n_ || tau < 0 || tau >= n_) throw DomainError("curve index out of range");
  if (degree < 1) throw DomainError("component degree must be at least 1");
  components_.push_back({sigma, tau, degree});
}

Matrix transition_matrix(const CurveSystem& cs) {
  Matrix a = Matrix::Zero(cs.size(), cs.size());
  for (const auto& c : cs.components()) a(c.sigma, c.tau) += 1.0 / c.degree;
  return a;
}

std::vector<std::vector<int>> irreducible_classes(const Matrix& a) {
  const int n = static_cast<int>(a.rows());
  std::vector<int> index(n, -1), low(n, 0), stack;
  std::vector<bool> on_stack(n, false);
  std::vector<std::vector<int>> classes;
  int counter = 0;
  std::function<void(int)> visit = [&](int v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack[v] = true;
    for (int w = 0; w < n; ++w) {
      if (!(a(v, w) > 0.0)) continue;
      if (index[w] < 0) {
        visit(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack[w]) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      std::vector<int> cls;
      int w = -1;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        cls.push_back(w);
      } while (w != v);
      std::sort(cls.begin(), cls.end());
      classes.push_back(std::move(cls));
    }
  };
  for (int v = 0; v < n; ++v) {
    if (index[v] < 0) visit(v);
  }
  // Tarjan finishes sinks first.
  std::reverse(classes.begin(), classes.end());
  return classes;
}

SpectralBounds spectral_bounds(const Matrix& a) {
  require_nonnegative(a);
  SpectralBounds out{0.0, 0.0, 0.0};
  for (const auto& cls : irreducible_classes(a)) {
    const auto root = perron_of_block(sub_block(a, cls, cls), a);
    out.value = std::max(out.value, root.value);
    out.lower = std::max(out.lower, root.lower);
    out.upper = std::max(out.upper, root.upper);
  }
  return out;
}

double spectral_radius(const Matrix& a) { return spectral_bounds(a).value; }

bool is_unobstructed(const CurveSystem& cs) {
  return spectral_radius(transition_matrix(cs)) < 1.0 - kSpectralTol;
}

Verdict classify(const SpectralBounds& bounds) {
  if (bounds.upper < 1.0 - kSpectralTol) return Verdict::Unobstructed;
  if (bounds.lower >= 1.0 - kRoundingSlack) return Verdict::Obstructed;
  return Verdict::Critical;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Unobstructed: return "UNOBSTRUCTED";
    case Verdict::Obstructed: return "OBSTRUCTED";
    case Verdict::Critical: return "CRITICAL";
  }
  return "CRITICAL";
}

void validate(const TreeDynamics& t) {
  const std::size_t k = t.edges.size();
  if (k == 0) throw InvalidTree("tree has no edges");
  if (t.image_paths.size() != k || t.degrees.size() != k) {
    throw InvalidTree("every edge needs an image path and a degree");
  }
  std::map<int, int> parent;
  const std::function<int(int)> find = [&](int v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  for (const auto& [u, v] : t.edges) {
    parent.try_emplace(u, u);
    parent.try_emplace(v, v);
  }
  if (parent.size() != k + 1) throw InvalidTree("edge and vertex counts do not form a tree");
  for (const auto& [u, v] : t.edges) {
    if (u == v) throw InvalidTree("loop edge");
    const int ru = find(u), rv = find(v);
    if (ru == rv) throw InvalidTree("edges contain a cycle");
    parent[ru] = rv;
  }
  for (const auto& [from, to] : t.vertex_map) {
    if (!parent.contains(from) || !parent.contains(to)) throw InvalidTree("vertex map names an unknown vertex");
  }

  for (std::size_t j = 0; j < k; ++j) {
    const auto& path = t.image_paths[j];
    const std::string where = "image of E" + std::to_string(j + 1);
    if (t.degrees[j] < 1) throw InvalidTree("degree of E" + std::to_string(j + 1) + " must be >= 1");
    if (path.empty()) throw InvalidTree(where + " is empty");
    for (int e : path) {
      if (e < 0 || static_cast<std::size_t>(e) >= k) throw InvalidTree(where + " names an unknown edge");
    }
    const auto [a0, b0] = t.edges[static_cast<std::size_t>(path[0])];
    int start = a0;
    if (path.size() > 1) {
      const auto [a1, b1] = t.edges[static_cast<std::size_t>(path[1])];
      start = (a0 == a1 || a0 == b1) ? b0 : a0;
    }
    std::set<int> seen{start};
    int at = start;
    for (int e : path) {
      const auto [a, b] = t.edges[static_cast<std::size_t>(e)];
      if (at != a && at != b) throw InvalidTree(where + " is not connected");
      at = (at == a) ? b : a;
      if (!seen.insert(at).second) throw InvalidTree(where + " is not an embedded arc");
    }
    const auto [u, v] = t.edges[j];
    const auto fu = t.vertex_map.find(u);
    const auto fv = t.vertex_map.find(v);
    if (fu != t.vertex_map.end() && fv != t.vertex_map.end()) {
      const bool same = (fu->second == start && fv->second == at) ||
                        (fu->second == at && fv->second == start);
      if (!same) throw InvalidTree(where + " does not join the images of its endpoints");
    }
  }
}

TreeMatrices tree_matrices(const TreeDynamics& t) {
  validate(t);
  const auto k = static_cast<Eigen::Index>(t.edges.size());
  TreeMatrices out{Matrix::Zero(k, k), Matrix::Zero(k, k)};
  for (Eigen::Index j = 0; j < k; ++j) {
    for (int e : t.image_paths[static_cast<std::size_t>(j)]) out.m(e, j) = 1.0;
    out.d(j, j) = t.degrees[static_cast<std::size_t>(j)];
  }
  return out;
}

std::optional<Vector> solve_MvDv(const Matrix& m, const Matrix& d) {
  require_nonnegative(m);
  if (d.rows() != m.rows() || d.cols() != m.cols()) throw DomainError("M and D differ in shape");
  const Eigen::Index n = m.rows();
  Matrix p(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i != j && d(i, j) != 0.0) throw DomainError("D must be diagonal");
    }
    if (!(d(i, i) > 0.0)) throw DomainError("D must have a positive diagonal");
    p.row(i) = m.row(i) / d(i, i);
  }

  const auto classes = irreducible_classes(p);
  std::vector<ClassRoot> roots;
  std::vector<int> class_of(static_cast<std::size_t>(n));
  for (std::size_t c = 0; c < classes.size(); ++c) {
    roots.push_back(perron_of_block(sub_block(p, classes[c], classes[c]), p));
    for (int v : classes[c]) class_of[static_cast<std::size_t>(v)] = static_cast<int>(c);
  }

  for (std::size_t c = 0; c < classes.size(); ++c) {
    if (std::abs(roots[c].value - 1.0) > kSpectralTol || roots[c].perron.size() == 0) continue;
    // Vertices that reach class c; v must vanish everywhere else.
    std::vector<bool> reaches(static_cast<std::size_t>(n), false);
    for (int v : classes[c]) reaches[static_cast<std::size_t>(v)] = true;
    for (bool grew = true; grew;) {
      grew = false;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (reaches[static_cast<std::size_t>(i)]) continue;
        for (Eigen::Index j = 0; j < n; ++j) {
          if (p(i, j) > 0.0 && reaches[static_cast<std::size_t>(j)]) {
            reaches[static_cast<std::size_t>(i)] = grew = true;
            break;
          }
        }
      }
    }
    std::vector<int> upstream;
    bool dominated = false;
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto ci = static_cast<std::size_t>(class_of[static_cast<std::size_t>(i)]);
      if (!reaches[static_cast<std::size_t>(i)] || ci == c) continue;
      upstream.push_back(static_cast<int>(i));
      if (roots[ci].value >= 1.0 - kSpectralTol) dominated = true;
    }
    if (dominated) continue;

    Vector v = Vector::Zero(n);
    for (std::size_t k = 0; k < classes[c].size(); ++k) v(classes[c][k]) = roots[c].perron(k);
    if (!upstream.empty()) {
      const auto u = static_cast<Eigen::Index>(upstream.size());
      const Matrix lhs = Matrix::Identity(u, u) - sub_block(p, upstream, upstream);
      const Vector rhs = sub_block(p, upstream, classes[c]) * roots[c].perron;
      const Vector vu = lhs.partialPivLu().solve(rhs);
      for (Eigen::Index k = 0; k < u; ++k) v(upstream[static_cast<std::size_t>(k)]) = vu(k);
    }
    v /= v.sum();
    return v;
  }
  return std::nullopt;
}

CurveSystem parse_curve_system(std::istream& in) {
  std::optional<CurveSystem> cs;
  std::string line;
  for (int line_no = 1; std::getline(in, line); ++line_no) {
    const auto tok = tokens_of(line);
    if (tok.empty()) continue;
    const auto where = "line " + std::to_string(line_no);
    if (tok[0] == "curve" && tok.size() == 2) {
      if (cs) throw ParseError(where + ": duplicate 'curve'");
      cs.emplace(parse_int(tok[1], line_no));
    } else if (tok[0] == "pre" && tok.size() == 4) {
      if (!cs) throw ParseError(where + ": 'pre' before 'curve'");
      try {
        cs->add_component(parse_int(tok[1], line_no) - 1, parse_int(tok[2], line_no) - 1,
                          parse_int(tok[3], line_no));
      } catch (const DomainError& e) {
        throw ParseError(where + ": " + e.what());
      }
    } else {
      throw ParseError(where + ": expected 'curve n' or 'pre sigma tau deg'");
    }
  }
  if (!cs) throw ParseError("missing 'curve n'");
  return *cs;
}

TreeDynamics parse_tree(std::istream& in) {
  TreeDynamics t;
  std::map<int, std::vector<int>> paths;
  std::map<int, int> degrees;
  std::string line;
  for (int line_no = 1; std::getline(in, line); ++line_no) {
    auto tok = tokens_of(line);
    if (tok.empty()) continue;
    const auto where = "line " + std::to_string(line_no);
    if (tok[0] == "edge" && tok.size() == 3) {
      t.edges.emplace_back(parse_int(tok[1], line_no), parse_int(tok[2], line_no));
    } else if (tok[0] == "map" && tok.size() == 3) {
      if (!t.vertex_map.emplace(parse_int(tok[1], line_no), parse_int(tok[2], line_no)).second) {
        throw ParseError(where + ": vertex mapped twice");
      }
    } else if (tok[0] == "path" && tok.size() >= 2) {
      std::string head = tok[1];
      std::size_t first = 2;
      if (head.back() == ':') {
        head.pop_back();
      } else if (tok.size() >= 3 && tok[2] == ":") {
        first = 3;
      } else {
        throw ParseError(where + ": expected 'path E_j: E_a E_b ...'");
      }
      std::vector<int> path;
      for (std::size_t k = first; k < tok.size(); ++k) path.push_back(parse_edge_ref(tok[k], line_no) - 1);
      if (!paths.emplace(parse_edge_ref(head, line_no) - 1, std::move(path)).second) {
        throw ParseError(where + ": path given twice");
      }
    } else if (tok[0] == "delta" && tok.size() == 3) {
      if (!degrees.emplace(parse_edge_ref(tok[1], line_no) - 1, parse_int(tok[2], line_no)).second) {
        throw ParseError(where + ": degree given twice");
      }
    } else {
      throw ParseError(where + ": unknown directive '" + tok[0] + "'");
    }
  }
  const int k = static_cast<int>(t.edges.size());
  t.image_paths.resize(static_cast<std::size_t>(k));
  t.degrees.assign(static_cast<std::size_t>(k), 1);
  for (auto& [j, path] : paths) {
    if (j < 0 || j >= k) throw ParseError("path for unknown edge E" + std::to_string(j + 1));
    t.image_paths[static_cast<std::size_t>(j)] = std::move(path);
  }
  for (const auto& [j, deg] : degrees) {
    if (j < 0 || j >= k) throw ParseError("degree for unknown edge E" + std::to_string(j + 1));
    t.degrees[static_cast<std::size_t>(j)] = deg;
  }
  return t;
}

double rotation_speed_gap(double theta1, double theta2) {
  double s = theta1 + theta2;
  s -= std::floor(s);
  return std::min(s, 1.0 - s);
}

PulloffResult pulled_off_constant(const ChordModel& chord, std::int64_t cap) {
  if (cap < 1) throw DomainError("cap must be at least 1");
  // Angles become exact multiples of 2^-64; rotation is then wrap-around
  // integer arithmetic with no accumulated rounding.
  const auto fixed = [](double t) {
    t -= std::floor(t);
    if (t >= 1.0) t = 0.0;
    return static_cast<std::uint64_t>(std::ldexp(t, 64));
  };
  const std::uint64_t t1 = fixed(chord.theta1), t2 = fixed(chord.theta2);
  const std::uint64_t x = fixed(chord.x), y = fixed(chord.y);
  const auto second_coord = [&](std::uint64_t j) {
    const std::uint64_t p = y - j * t2;
    return chord.opposite_orientation ? std::uint64_t{0} - p : p;
  };

  // Both cyclic orders agree on {0..n-1}; they still agree after adding n
  // exactly when n lands in corresponding gaps, i.e. has the same successor.
  using Entry = std::pair<std::uint64_t, std::int64_t>;
  std::set<Entry> first{{x, 0}};
  std::set<Entry> second{{second_coord(0), 0}};
  const auto successor = [](const std::set<Entry>& s, std::uint64_t t) -> std::optional<std::int64_t> {
    auto it = s.lower_bound({t, -1});
    if (it != s.end() && it->first == t) return std::nullopt;
    if (it == s.end()) it = s.begin();
    return it->second;
  };
  for (std::int64_t n = 1; n <= cap; ++n) {
    const auto j = static_cast<std::uint64_t>(n);
    const std::uint64_t a = x - j * t1;
    const std::uint64_t b = second_coord(j);
    const auto sa = successor(first, a);
    const auto sb = successor(second, b);
    if (!sa || !sb) return {n};
    if (n >= 2 && *sa != *sb) return {n};
    first.emplace(a, n);
    second.emplace(b, n);
  }
  return {std::nullopt};
}

std::vector<SweepPoint> pulloff_sweep(double theta1, double dist_lo, double dist_hi, int count,
                                      std::int64_t cap) {
  if (count < 2 || !(dist_lo > 0.0) || !(dist_hi >= dist_lo) || dist_hi > 0.5) {
    throw DomainError("sweep needs count >= 2 and 0 < dist_lo <= dist_hi <= 1/2");
  }
  std::vector<SweepPoint> out;
  for (int k = 0; k < count; ++k) {
    const double dist = dist_lo + (dist_hi - dist_lo) * k / (count - 1);
    double theta2 = dist - theta1;
    theta2 -= std::floor(theta2);
    out.push_back({dist, theta2, pulled_off_constant({theta1, theta2}, cap)});
  }
  return out;
}

}  // namespace siegel::obstruction
