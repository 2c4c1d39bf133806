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

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "cli.hpp"
#include "siegel/basin.hpp"
#include "siegel/errors.hpp"
#include "siegel/moduli.hpp"
#include "siegel/obstruction.hpp"
#include "siegel/planner.hpp"
#include "siegel/rotation.hpp"
#include "siegel/width.hpp"

namespace py = pybind11;

namespace {

using siegel::moduli::Complex;

py::dict estimate_dict(const siegel::width::WidthEstimate& e) {
  py::dict d;
  d["value"] = e.value;
  d["method"] = siegel::width::to_string(e.method);
  d["grid_spacing"] = e.grid_spacing;
  d["error_estimate"] = e.error_estimate;
  return d;
}

void export_rotation(py::module_& m) {
  namespace rot = siegel::rotation;
  py::class_<rot::RotationNumber>(m, "RotationNumber")
      .def_static("parse", &rot::RotationNumber::parse, py::arg("text"))
      .def_static("golden", &rot::RotationNumber::golden)
      .def_static("golden_tail", &rot::RotationNumber::golden_tail, py::arg("prefix"))
      .def("coefficient", &rot::RotationNumber::coefficient, py::arg("n"))
      .def_property_readonly("value", &rot::RotationNumber::value)
      .def("__str__", &rot::RotationNumber::to_string)
      .def("__repr__",
           [](const rot::RotationNumber& t) { return "RotationNumber('" + t.to_string() + "')"; });

  m.def(
      "convergents",
      [](const rot::RotationNumber& theta, int depth) {
        const auto table = rot::convergents(theta, depth);
        std::vector<std::tuple<int, std::int64_t, std::int64_t, double>> rows;
        for (const auto& c : table.entries()) rows.emplace_back(c.level, c.p, c.q, c.length);
        return rows;
      },
      py::arg("theta"), py::arg("depth"),
      "(level, p, q, length) for each closest return");

  m.def(
      "diffeo_tiling",
      [](const rot::RotationNumber& theta, double c, int level) {
        std::vector<std::pair<double, double>> cells;
        for (const auto& cell : rot::diffeo_tiling(theta, c, level).cells) {
          cells.emplace_back(cell.left, cell.length);
        }
        return cells;
      },
      py::arg("theta"), py::arg("critical_angle"), py::arg("level"));
}

void export_moduli(py::module_& m) {
  namespace mod = siegel::moduli;
  m.def(
      "multiplier_point",
      [](Complex rho1, Complex rho2) {
        const auto p = mod::multiplier_point(rho1, rho2);
        return py::make_tuple(p.rho1, p.rho2, p.rho3, p.degenerate);
      },
      py::arg("rho1"), py::arg("rho2"));
  m.def(
      "index_residual",
      [](Complex rho1, Complex rho2) {
        return mod::index_residual(mod::multiplier_point(rho1, rho2));
      },
      py::arg("rho1"), py::arg("rho2"));
}

void export_basin(py::module_& m) {
  namespace bas = siegel::basin;
  m.def("valuable_domain_modulus", &bas::valuable_domain_modulus, py::arg("rho"));
  m.def(
      "blaschke_invariance_check",
      [](Complex rho, int samples) {
        const auto r = bas::blaschke_invariance_check(rho, samples);
        return py::make_tuple(r.max_excess, r.critical_inside);
      },
      py::arg("rho"), py::arg("samples") = 1000);

  m.def(
      "rasterize_basins",
      [](Complex rho1, Complex rho2, std::array<double, 4> viewport, int width, int height,
         int max_iter, int threads) {
        const auto f = siegel::moduli::normal_form(siegel::moduli::multiplier_point(rho1, rho2));
        const bas::Viewport vp{viewport[0], viewport[1], viewport[2], viewport[3]};
        bas::RasterImage image(1, 1, vp);
        {
          py::gil_scoped_release release;
          image = bas::rasterize_basins(f, vp, width, height, max_iter, threads);
        }
        py::array_t<std::uint8_t> out({height, width});
        auto view = out.mutable_unchecked<2>();
        for (int y = 0; y < height; ++y) {
          for (int x = 0; x < width; ++x) view(y, x) = static_cast<std::uint8_t>(image.label(x, y));
        }
        return out;
      },
      py::arg("rho1"), py::arg("rho2"), py::arg("viewport") = std::array<double, 4>{-2, 2, -2, 2},
      py::arg("width") = 256, py::arg("height") = 256, py::arg("max_iter") = 500,
      py::arg("threads") = 1,
      "Labels per pixel: 0 undecided, 1 basin of 0, 2 basin of infinity, 3 third basin");
}

void export_obstruction(py::module_& m) {
  namespace obs = siegel::obstruction;
  m.def(
      "spectral_bounds",
      [](const obs::Matrix& a) {
        const auto b = obs::spectral_bounds(a);
        return py::make_tuple(b.value, b.lower, b.upper);
      },
      py::arg("matrix"));
  m.def(
      "classify",
      [](const obs::Matrix& a) { return obs::to_string(obs::classify(obs::spectral_bounds(a))); },
      py::arg("matrix"));
  m.def("solve_MvDv", &obs::solve_MvDv, py::arg("m"), py::arg("d"));
  m.def(
      "pulled_off_constant",
      [](double theta1, double theta2, double x, double y, bool opposite,
         std::int64_t cap) -> std::optional<std::int64_t> {
        return obs::pulled_off_constant({theta1, theta2, x, y, opposite}, cap).n;
      },
      py::arg("theta1"), py::arg("theta2"), py::arg("x") = 0.0, py::arg("y") = 0.0,
      py::arg("opposite_orientation") = true, py::arg("cap") = 100000,
      "None when no failure occurs below the cap");
}

void export_planner(py::module_& m) {
  namespace pl = siegel::planner;
  m.def(
      "near_parabolic_levels",
      [](const siegel::rotation::RotationNumber& theta, double k_f, double big_k, double big_m,
         double v, double w, int depth) {
        pl::Thresholds t;
        t.big_k = big_k;
        t.big_m = big_m;
        t.v = v;
        t.w = w;
        return pl::build_plan(theta, k_f, t, depth).near_parabolic_levels();
      },
      py::arg("theta"), py::arg("k_f"), py::arg("big_k") = 100.0, py::arg("big_m") = 10.0,
      py::arg("v") = 8.0, py::arg("w") = 64.0, py::arg("depth") = 30);
  m.def(
      "plan_csv",
      [](const siegel::rotation::RotationNumber& theta, double k_f, double big_k, double big_m,
         int depth) {
        pl::Thresholds t;
        t.big_k = big_k;
        t.big_m = big_m;
        std::ostringstream os;
        pl::write_plan_csv(os, pl::build_plan(theta, k_f, t, depth));
        return os.str();
      },
      py::arg("theta"), py::arg("k_f"), py::arg("big_k") = 100.0, py::arg("big_m") = 10.0,
      py::arg("depth") = 30);
}

void export_width(py::module_& m) {
  namespace wd = siegel::width;
  m.def("harmonic_sum", &wd::harmonic_sum, py::arg("x"), py::arg("y"));
  m.def(
      "width_rectangle",
      [](double width, double height, int cells) {
        py::gil_scoped_release release;
        return wd::width_rectangle(wd::rectangle_shape(width, height), cells);
      },
      py::arg("width"), py::arg("height") = 1.0, py::arg("cells") = 128);
  m.def(
      "modulus_annulus",
      [](Complex outer_center, double outer_radius, Complex inner_center, double inner_radius,
         int cells) {
        py::gil_scoped_release release;
        return wd::modulus_annulus({outer_center, outer_radius}, {inner_center, inner_radius},
                                   cells);
      },
      py::arg("outer_center"), py::arg("outer_radius"), py::arg("inner_center"),
      py::arg("inner_radius"), py::arg("cells") = 512);
  m.def(
      "arc_width",
      [](const std::string& config, int i, int j, int n_phi) {
        std::istringstream in(config);
        const auto cfg = wd::parse_disk_configuration(in);
        wd::LogPolarOptions opts;
        opts.n_phi = n_phi;
        py::gil_scoped_release release;
        return wd::arc_degeneration_pair(cfg, i, j, opts);
      },
      py::arg("config"), py::arg("i"), py::arg("j"), py::arg("n_phi") = 256,
      "Width of the arcs joining disks i and j; config uses the disk/mark line format");

  py::class_<wd::WidthEstimate>(m, "WidthEstimate")
      .def_readonly("value", &wd::WidthEstimate::value)
      .def_readonly("grid_spacing", &wd::WidthEstimate::grid_spacing)
      .def_readonly("error_estimate", &wd::WidthEstimate::error_estimate)
      .def_property_readonly("method",
                             [](const wd::WidthEstimate& e) { return wd::to_string(e.method); })
      .def("as_dict", &estimate_dict);
}

}  // namespace

PYBIND11_MODULE(_siegel, m) {
  m.doc() = "Bindings for the siegel library";
  m.attr("__version__") = siegel::cli::version();

  auto& error = py::register_exception<siegel::Error>(m, "SiegelError");
  py::register_exception<siegel::NumericalError>(m, "NumericalError", error.ptr());

  export_rotation(m);
  export_moduli(m);
  export_basin(m);
  export_obstruction(m);
  export_planner(m);
  export_width(m);

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out;
        std::ostringstream err;
        int code = 0;
        {
          py::gil_scoped_release release;
          code = siegel::cli::run(args, out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs the command-line front end; returns (exit code, stdout, stderr)");
}
