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

#include "cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <utility>

#include "siegel/basin.hpp"
#include "siegel/errors.hpp"
#include "siegel/moduli.hpp"
#include "siegel/obstruction.hpp"
#include "siegel/planner.hpp"
#include "siegel/rotation.hpp"
#include "siegel/width.hpp"

#ifndef SIEGEL_VERSION
#define SIEGEL_VERSION "0.0.0"
#endif

namespace siegel::cli {

namespace {

using moduli::Complex;

std::string shortest(double x) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, end);
}

std::string significant(double x, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, x);
  return buf;
}

class Header {
 public:
  explicit Header(std::string command) : command_(std::move(command)) {}

  void set(const std::string& key, std::string value) { params_[key] = std::move(value); }
  void set_num(const std::string& key, double value) { set(key, shortest(value)); }
  void set_int(const std::string& key, std::int64_t value) { set(key, std::to_string(value)); }

  // "siegel <version> <command> key=value ..." with keys sorted.
  std::string text() const {
    std::string out = "siegel " + version() + " " + command_;
    for (const auto& [k, v] : params_) out += " " + k + "=" + v;
    return out;
  }
  std::string line() const { return "# " + text() + "\n"; }

 private:
  std::string command_;
  std::map<std::string, std::string> params_;
};

struct Common {
  std::string output;
  std::uint64_t seed = 0;
  int threads = 1;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--output", c.output, "Write to this file instead of stdout");
  sub->add_option("--seed", c.seed, "Seed recorded in the header")->capture_default_str();
  sub->add_option("--threads", c.threads, "Worker threads; output does not depend on it")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

// Either the fallback stream or a freshly opened file.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback, bool binary = false) : stream_(&fallback) {
    if (path.empty()) return;
    auto mode = std::ios::out | std::ios::trunc;
    if (binary) mode |= std::ios::binary;
    file_ = std::make_unique<std::ofstream>(path, mode);
    if (!*file_) throw DomainError("cannot open " + path + " for writing");
    stream_ = file_.get();
  }

  std::ostream& stream() { return *stream_; }

  void finish() {
    stream_->flush();
    if (!*stream_) throw DomainError("write failed");
  }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_;
};

void record_common(Header& h, const Common& c) { h.set("seed", std::to_string(c.seed)); }

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  return in;
}

// A rotation number as a continued fraction "[0;...]" or as a decimal.
struct Angle {
  double value;
  std::string text;
};

Angle parse_angle(const std::string& s) {
  if (!s.empty() && s.front() == '[') {
    const auto theta = rotation::RotationNumber::parse(s);
    return {theta.value(), theta.to_string()};
  }
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw ParseError("not a rotation number: '" + s + "'");
  }
  return {v, shortest(v)};
}

std::string format_point(const moduli::RiemannSpherePoint& p) {
  return p.infinite ? "inf" : moduli::format_complex(p.z);
}

void write_matrix(std::ostream& os, const std::string& name, const obstruction::Matrix& a) {
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    os << name;
    for (Eigen::Index j = 0; j < a.cols(); ++j) os << ',' << shortest(a(i, j));
    os << '\n';
  }
}

// ---------------------------------------------------------------------------

struct TilingArgs {
  Common common;
  std::string theta;
  int m = 0;
  double c = 0.0;
};

int cmd_tiling(const TilingArgs& a, std::ostream& out) {
  const auto theta = rotation::RotationNumber::parse(a.theta);
  Header h("tiling");
  h.set("theta", theta.to_string());
  h.set_int("m", a.m);
  h.set_num("c", a.c);
  record_common(h, a.common);

  const auto tiling = rotation::diffeo_tiling(theta, a.c, a.m);
  const auto table = rotation::convergents(theta, a.m + 2);
  Sink sink(a.common.output, out);
  auto& os = sink.stream();
  os << h.line() << "index,left,length,length_class\n";
  for (std::size_t k = 0; k < tiling.cells.size(); ++k) {
    const auto& cell = tiling.cells[k];
    const char* cls = "other";
    switch (rotation::classify_cell(table, a.m, cell.length)) {
      case rotation::CellClass::Short: cls = "short"; break;
      case rotation::CellClass::Long: cls = "long"; break;
      case rotation::CellClass::Other: break;
    }
    os << k << ',' << shortest(cell.left) << ',' << significant(cell.length, 12) << ',' << cls
       << '\n';
  }
  sink.finish();
  return kExitOk;
}

struct PointArgs {
  std::string point;
  std::string rho1;
  std::string rho2;
};

void add_point(CLI::App* sub, PointArgs& p) {
  auto* point = sub->add_option("--point", p.point, "Multiplier point \"rho1=a+bi rho2=c+di\"");
  auto* r1 = sub->add_option("--rho1", p.rho1, "Multiplier at 0");
  auto* r2 = sub->add_option("--rho2", p.rho2, "Multiplier at infinity");
  point->excludes(r1)->excludes(r2);
  r1->needs(r2);
  r2->needs(r1);
}

moduli::QuadraticMultiplierPoint resolve_point(const PointArgs& p) {
  if (!p.point.empty()) return moduli::parse_multiplier_point(p.point);
  if (p.rho1.empty()) throw ParseError("give --point or --rho1 and --rho2");
  return moduli::multiplier_point(moduli::parse_complex(p.rho1), moduli::parse_complex(p.rho2));
}

struct MapArgs {
  Common common;
  PointArgs point;
  std::string orbit;
  int steps = 0;
};

int cmd_map(const MapArgs& a, std::ostream& out) {
  const auto mp = resolve_point(a.point);
  const auto f = moduli::normal_form(mp);
  Header h("map");
  h.set("point", "rho1=" + moduli::format_complex(mp.rho1) + ",rho2=" +
                     moduli::format_complex(mp.rho2));
  if (!a.orbit.empty()) {
    h.set("orbit", moduli::format_complex(moduli::parse_complex(a.orbit)));
    h.set_int("steps", a.steps);
  }
  record_common(h, a.common);

  Sink sink(a.common.output, out);
  auto& os = sink.stream();
  os << h.line() << "quantity,value\n";
  os << "rho1," << moduli::format_complex(mp.rho1) << '\n';
  os << "rho2," << moduli::format_complex(mp.rho2) << '\n';
  os << "rho3," << moduli::format_complex(mp.rho3) << '\n';
  os << "index_residual," << shortest(std::abs(moduli::index_residual(mp))) << '\n';
  const auto fixed = f.fixed_points();
  const auto mult = f.multipliers();
  for (int k = 0; k < 3; ++k) {
    os << "fixed_point_" << k + 1 << ',' << format_point(fixed[static_cast<std::size_t>(k)]) << '\n';
    os << "multiplier_" << k + 1 << ',' << moduli::format_complex(mult[static_cast<std::size_t>(k)])
       << '\n';
  }
  const auto crit = f.critical_points();
  for (int k = 0; k < 2; ++k) {
    os << "critical_point_" << k + 1 << ',' << format_point(crit[static_cast<std::size_t>(k)])
       << '\n';
  }
  if (!a.orbit.empty()) {
    auto z = moduli::RiemannSpherePoint::finite(moduli::parse_complex(a.orbit));
    for (int k = 0; k <= a.steps; ++k) {
      os << "orbit_" << k << ',' << format_point(z) << '\n';
      z = moduli::evaluate(f, z);
    }
  }
  sink.finish();
  return kExitOk;
}

struct RenderArgs {
  Common common;
  PointArgs point;
  std::string viewport = "-2,2,-2,2";
  int res = 256;
  int max_iter = 500;
};

std::vector<double> parse_list(const std::string& s, std::size_t count, const std::string& what) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    double x = 0.0;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), x);
    if (ec != std::errc() || ptr != item.data() + item.size() || !std::isfinite(x)) {
      throw ParseError("bad " + what + " component '" + item + "'");
    }
    v.push_back(x);
  }
  if (v.size() != count) throw ParseError(what + " needs " + std::to_string(count) + " numbers");
  return v;
}

basin::Viewport parse_viewport(const std::string& s) {
  const auto v = parse_list(s, 4, "viewport");
  if (!(v[0] < v[1] && v[2] < v[3])) throw ParseError("viewport must have positive extent");
  return {v[0], v[1], v[2], v[3]};
}

int cmd_render(const RenderArgs& a, std::ostream& out) {
  const auto mp = resolve_point(a.point);
  const auto f = moduli::normal_form(mp);
  const auto vp = parse_viewport(a.viewport);
  const int width = a.res;
  const int height = std::max(
      1, static_cast<int>(std::lround(a.res * (vp.im_max - vp.im_min) / (vp.re_max - vp.re_min))));

  Header h("render");
  h.set("point", "rho1=" + moduli::format_complex(mp.rho1) + ",rho2=" +
                     moduli::format_complex(mp.rho2));
  h.set("viewport", shortest(vp.re_min) + "," + shortest(vp.re_max) + "," + shortest(vp.im_min) +
                        "," + shortest(vp.im_max));
  h.set_int("res", a.res);
  h.set_int("max_iter", a.max_iter);
  record_common(h, a.common);

  const auto image = basin::rasterize_basins(f, vp, width, height, a.max_iter, a.common.threads);
  const std::string legend_path = a.common.output + ".legend.csv";
  {
    Sink ppm(a.common.output, out, true);
    basin::write_ppm(ppm.stream(), image, h.text());
    ppm.finish();
  }
  {
    Sink legend(legend_path, out);
    basin::write_legend(legend.stream(), image, h.text());
    legend.finish();
  }
  out << h.line() << "file,width,height,undecided_fraction\n"
      << a.common.output << ',' << width << ',' << height << ','
      << shortest(image.undecided_fraction()) << '\n'
      << legend_path << ",,,\n";
  return kExitOk;
}

struct WidthArgs {
  Common common;
  std::string config;
  std::vector<int> pair;
  int mark = -1;
  double lambda = 10.0;
  int n_phi = 256;
  bool allow_saturation = false;
  double rectangle = 0.0;
  int cells = 128;
  std::string outer;
  std::string inner;
};

width::Circle parse_circle(const std::string& s) {
  const auto v = parse_list(s, 3, "circle");
  return {Complex(v[0], v[1]), v[2]};
}

int cmd_width(const WidthArgs& a, std::ostream& out) {
  const int modes = (!a.pair.empty() ? 1 : 0) + (a.mark >= 0 ? 1 : 0) + (a.rectangle > 0.0 ? 1 : 0) +
                    (!a.outer.empty() ? 1 : 0);
  if (modes != 1) throw ParseError("choose exactly one of --pair, --mark, --rectangle, --outer");
  Header h("width");
  record_common(h, a.common);
  std::vector<std::pair<std::string, width::WidthEstimate>> rows;
  width::LogPolarOptions opts;
  opts.n_phi = a.n_phi;
  opts.allow_saturation = a.allow_saturation;

  if (!a.pair.empty() || a.mark >= 0) {
    if (a.config.empty()) throw ParseError("--pair and --mark need --config");
    auto in = open_input(a.config);
    const auto cfg = width::parse_disk_configuration(in);
    h.set("config", a.config);
    h.set_int("n_phi", a.n_phi);
    if (!a.pair.empty()) {
      h.set("pair", std::to_string(a.pair[0]) + "," + std::to_string(a.pair[1]));
      rows.emplace_back("arc_" + std::to_string(a.pair[0]) + "_" + std::to_string(a.pair[1]),
                        width::arc_degeneration_pair(cfg, a.pair[0], a.pair[1], opts));
    } else {
      h.set_int("mark", a.mark);
      h.set_num("lambda", a.lambda);
      h.set("allow_saturation", a.allow_saturation ? "1" : "0");
      const auto ld = width::local_degeneration(cfg, a.mark, a.lambda, opts);
      rows.emplace_back("w_plus", ld.w_plus);
      rows.emplace_back("w_sphere", ld.w_sphere);
    }
  } else if (a.rectangle > 0.0) {
    h.set_num("rectangle", a.rectangle);
    h.set_int("cells", a.cells);
    rows.emplace_back("rectangle",
                      width::width_rectangle(width::rectangle_shape(a.rectangle, 1.0), a.cells));
  } else {
    if (a.inner.empty()) throw ParseError("--outer needs --inner");
    const auto outer = parse_circle(a.outer);
    const auto inner = parse_circle(a.inner);
    h.set("outer", a.outer);
    h.set("inner", a.inner);
    h.set_int("cells", a.cells);
    rows.emplace_back("annulus", width::modulus_annulus(outer, inner, a.cells));
  }

  Sink sink(a.common.output, out);
  sink.stream() << h.line();
  width::write_width_csv(sink.stream(), rows);
  sink.finish();
  return kExitOk;
}

struct FileArgs {
  Common common;
  std::string input;
};

int cmd_obstruct(const FileArgs& a, std::ostream& out) {
  auto in = open_input(a.input);
  const auto cs = obstruction::parse_curve_system(in);
  Header h("obstruct");
  h.set("input", a.input);
  record_common(h, a.common);

  const auto matrix = obstruction::transition_matrix(cs);
  const auto bounds = obstruction::spectral_bounds(matrix);
  const auto verdict = obstruction::classify(bounds);
  Sink sink(a.common.output, out);
  auto& os = sink.stream();
  os << h.line();
  int code = kExitOk;
  switch (verdict) {
    case obstruction::Verdict::Unobstructed:
      os << "UNOBSTRUCTED λ=" << significant(bounds.value, 10) << '\n';
      break;
    case obstruction::Verdict::Obstructed:
      os << "OBSTRUCTED λ=" << significant(bounds.value, 10) << '\n';
      code = kExitObstructed;
      break;
    case obstruction::Verdict::Critical:
      os << "CRITICAL λ≈1\n";
      code = kExitNumerical;
      break;
  }
  os << "bounds," << shortest(bounds.lower) << ',' << shortest(bounds.upper) << '\n';
  write_matrix(os, "A", matrix);
  sink.finish();
  return code;
}

int cmd_tree(const FileArgs& a, std::ostream& out) {
  auto in = open_input(a.input);
  const auto tree = obstruction::parse_tree(in);
  obstruction::validate(tree);
  Header h("tree");
  h.set("input", a.input);
  record_common(h, a.common);

  const auto mats = obstruction::tree_matrices(tree);
  const auto v = obstruction::solve_MvDv(mats.m, mats.d);
  Sink sink(a.common.output, out);
  auto& os = sink.stream();
  os << h.line();
  if (v) {
    os << "Mv=Dv SOLUTION v=";
    for (Eigen::Index i = 0; i < v->size(); ++i) os << (i ? ";" : "") << shortest((*v)(i));
    os << '\n';
  } else {
    os << "NO Mv=Dv SOLUTION\n";
  }
  write_matrix(os, "M", mats.m);
  write_matrix(os, "D", mats.d);
  sink.finish();
  return kExitOk;
}

struct PulloffArgs {
  Common common;
  std::string theta1;
  std::string theta2;
  double x = 0.0;
  double y = 0.0;
  bool same_orientation = false;
  std::int64_t cap = 100000;
  int sweep = 0;
  double dist_lo = 0.05;
  double dist_hi = 0.45;
};

std::string format_n(const obstruction::PulloffResult& r) {
  return r.unbounded() ? "unbounded" : std::to_string(*r.n);
}

int cmd_pulloff(const PulloffArgs& a, std::ostream& out) {
  if (a.cap < 1) throw ParseError("--cap must be positive");
  const auto t1 = parse_angle(a.theta1);
  Header h("pulloff");
  h.set("theta1", t1.text);
  h.set_int("cap", a.cap);
  record_common(h, a.common);
  Sink sink(a.common.output, out);
  auto& os = sink.stream();

  if (a.sweep > 0) {
    h.set_int("sweep", a.sweep);
    h.set_num("dist_lo", a.dist_lo);
    h.set_num("dist_hi", a.dist_hi);
    const auto points = obstruction::pulloff_sweep(t1.value, a.dist_lo, a.dist_hi, a.sweep, a.cap);
    os << h.line() << "dist,theta2,N,N_times_dist\n";
    for (const auto& p : points) {
      os << shortest(p.dist) << ',' << shortest(p.theta2) << ',' << format_n(p.result) << ','
         << (p.result.unbounded() ? "" : shortest(static_cast<double>(*p.result.n) * p.dist))
         << '\n';
    }
  } else {
    if (a.theta2.empty()) throw ParseError("--theta2 is required without --sweep");
    const auto t2 = parse_angle(a.theta2);
    h.set("theta2", t2.text);
    h.set_num("x", a.x);
    h.set_num("y", a.y);
    h.set("orientation", a.same_orientation ? "same" : "opposite");
    const obstruction::ChordModel chord{t1.value, t2.value, a.x, a.y, !a.same_orientation};
    const auto r = obstruction::pulled_off_constant(chord, a.cap);
    os << h.line();
    if (r.unbounded()) {
      os << "UNBOUNDED cap=" << a.cap << '\n';
    } else {
      os << "N=" << *r.n << '\n';
    }
    os << "dist=" << shortest(obstruction::rotation_speed_gap(t1.value, t2.value)) << '\n';
  }
  sink.finish();
  return kExitOk;
}

struct PlanArgs {
  Common common;
  std::string theta;
  double k_f = 0.0;
  double big_k = 100.0;
  double big_m = 10.0;
  double v = 8.0;
  double w = 64.0;
  int depth = 30;
};

int cmd_psd_plan(const PlanArgs& a, std::ostream& out, std::ostream& err) {
  const auto theta = rotation::RotationNumber::parse(a.theta);
  planner::Thresholds t;
  t.big_k = a.big_k;
  t.big_m = a.big_m;
  t.v = a.v;
  t.w = a.w;
  const auto plan = planner::build_plan(theta, a.k_f, t, a.depth);
  Header h("psd-plan");
  h.set("theta", theta.to_string());
  h.set_num("KF", a.k_f);
  h.set_num("K", a.big_k);
  h.set_num("M", a.big_m);
  h.set_num("v", a.v);
  h.set_num("w", a.w);
  h.set_int("depth", a.depth);
  record_common(h, a.common);

  Sink sink(a.common.output, out);
  sink.stream() << h.line();
  planner::write_plan_csv(sink.stream(), plan);
  sink.finish();
  for (const auto& f : plan.failures) err << "warning: " << f << '\n';
  return kExitOk;
}

}  // namespace

std::string version() { return SIEGEL_VERSION; }

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Combinatorial and numerical experiments around Siegel disks", "siegel"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);
  app.set_version_flag("--version", version());

  TilingArgs tiling;
  auto* s_tiling = app.add_subcommand("tiling", "Diffeo-tiling of the circle as CSV");
  s_tiling->add_option("--theta", tiling.theta, "Rotation number [0;a1,...,(1)*]")->required();
  s_tiling->add_option("--m", tiling.m, "Level")->required()->check(CLI::NonNegativeNumber);
  s_tiling->add_option("--c", tiling.c, "Critical angle in turns")->capture_default_str();
  add_common(s_tiling, tiling.common);

  MapArgs map;
  auto* s_map = app.add_subcommand("map", "Normal form, fixed points and multipliers");
  add_point(s_map, map.point);
  s_map->add_option("--orbit", map.orbit, "Starting point of an orbit to print");
  s_map->add_option("--steps", map.steps, "Orbit length")->check(CLI::NonNegativeNumber);
  add_common(s_map, map.common);

  RenderArgs render;
  auto* s_render = app.add_subcommand("render", "Basin raster as binary PPM plus legend");
  add_point(s_render, render.point);
  s_render->add_option("--viewport", render.viewport, "re_min,re_max,im_min,im_max")
      ->capture_default_str();
  s_render->add_option("--res", render.res, "Pixels across the real extent")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  s_render->add_option("--max-iter", render.max_iter, "Orbit steps per pixel")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  add_common(s_render, render.common);

  WidthArgs wa;
  auto* s_width = app.add_subcommand("width", "Extremal widths as CSV");
  s_width->add_option("--config", wa.config, "Disk configuration file");
  s_width->add_option("--pair", wa.pair, "Two disk indices")->expected(2);
  s_width->add_option("--mark", wa.mark, "Marked interval index")->check(CLI::NonNegativeNumber);
  s_width->add_option("--lambda", wa.lambda, "Scaling factor")->capture_default_str();
  s_width->add_option("--n-phi", wa.n_phi, "Angular cells")->check(CLI::Range(16, 1 << 14))
      ->capture_default_str();
  s_width->add_flag("--allow-saturation", wa.allow_saturation);
  s_width->add_option("--rectangle", wa.rectangle, "Width of the rectangle [0,x]x[0,1]")
      ->check(CLI::PositiveNumber);
  s_width->add_option("--cells", wa.cells, "Grid cells across the short side")
      ->check(CLI::Range(16, 1 << 14))
      ->capture_default_str();
  s_width->add_option("--outer", wa.outer, "Outer circle cx,cy,R");
  s_width->add_option("--inner", wa.inner, "Inner circle cx,cy,r");
  add_common(s_width, wa.common);

  FileArgs obstruct;
  auto* s_obstruct = app.add_subcommand("obstruct", "Thurston matrix verdict");
  s_obstruct->add_option("--input", obstruct.input, "Curve system file")->required();
  add_common(s_obstruct, obstruct.common);

  FileArgs tree;
  auto* s_tree = app.add_subcommand("tree", "Markov and degree matrices of tree dynamics");
  s_tree->add_option("--input", tree.input, "Tree file")->required();
  add_common(s_tree, tree.common);

  PulloffArgs pull;
  auto* s_pull = app.add_subcommand("pulloff", "Pulled-off constant of the chord model");
  s_pull->add_option("--theta1", pull.theta1, "First rotation number")->required();
  s_pull->add_option("--theta2", pull.theta2, "Second rotation number");
  s_pull->add_option("--x", pull.x, "Chord endpoint on the first circle");
  s_pull->add_option("--y", pull.y, "Chord endpoint on the second circle");
  s_pull->add_flag("--same-orientation", pull.same_orientation);
  s_pull->add_option("--cap", pull.cap, "Largest n examined")->capture_default_str();
  s_pull->add_option("--sweep", pull.sweep, "Sample count of a distance sweep")
      ->check(CLI::PositiveNumber);
  s_pull->add_option("--dist-lo", pull.dist_lo)->capture_default_str();
  s_pull->add_option("--dist-hi", pull.dist_hi)->capture_default_str();
  add_common(s_pull, pull.common);

  PlanArgs plan;
  auto* s_plan = app.add_subcommand("psd-plan", "Pseudo-Siegel regularization plan as CSV");
  s_plan->add_option("--theta", plan.theta, "Rotation number")->required();
  s_plan->add_option("--KF", plan.k_f, "Constant K_F")->required();
  s_plan->add_option("--K", plan.big_k)->capture_default_str();
  s_plan->add_option("--M", plan.big_m)->capture_default_str();
  s_plan->add_option("--v", plan.v)->capture_default_str();
  s_plan->add_option("--w", plan.w)->capture_default_str();
  s_plan->add_option("--depth", plan.depth)->capture_default_str();
  add_common(s_plan, plan.common);

  std::vector<const char*> argv{"siegel"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*s_tiling) return cmd_tiling(tiling, out);
    if (*s_map) return cmd_map(map, out);
    if (*s_render) {
      if (render.common.output.empty()) throw ParseError("render needs --output");
      return cmd_render(render, out);
    }
    if (*s_width) return cmd_width(wa, out);
    if (*s_obstruct) return cmd_obstruct(obstruct, out);
    if (*s_tree) return cmd_tree(tree, out);
    if (*s_pull) return cmd_pulloff(pull, out);
    if (*s_plan) return cmd_psd_plan(plan, out, err);
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace siegel::cli
