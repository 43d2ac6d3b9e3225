#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "polarframes/catalog.hpp"
#include "polarframes/errors.hpp"
#include "polarframes/polar.hpp"
#include "polarframes/run.hpp"
#include "polarframes/structure.hpp"

namespace py = pybind11;
namespace pf = polarframes;

namespace {

pf::Gauge gauge_from(const std::string& s) {
  if (s == "generic") return pf::Gauge::generic;
  if (s == "b_aligned") return pf::Gauge::b_aligned;
  throw py::value_error("gauge must be 'generic' or 'b_aligned'");
}

pf::SurfaceImmersion surface_from(const std::string& name, const std::string& mode) {
  pf::SurfaceImmersion s = pf::get(name).surface;
  if (mode == "fd") return s.with_mode(pf::DerivativeMode::finite_difference);
  if (mode != "analytic") throw py::value_error("mode must be 'analytic' or 'fd'");
  return s;
}

py::dict invariants_at(const std::string& name, double u, double v, const std::string& gauge, const std::string& mode) {
  const pf::SurfaceImmersion s = surface_from(name, mode);
  const pf::ChartPoint p{u, v};
  const pf::SecondFundamentalTensor h = pf::second_fundamental_form(s, p, pf::build_frame(s, p, gauge_from(gauge)));
  const pf::CurvatureInvariants c = pf::curvature_invariants(h, true);
  py::dict d;
  d["K"] = c.K;
  d["KN"] = c.KN;
  d["S"] = c.S;
  d["H"] = c.H_vec;
  d["R3412"] = c.R3412;
  d["R3512"] = c.R3512;
  d["R4512"] = c.R4512;
  d["superminimal_residual"] = c.superminimal_residual;
  d["rank_case"] = pf::to_string(c.rank_case);
  d["h"] = std::vector<pf::Mat2>(h.h.begin(), h.h.end());
  return d;
}

py::dict polar_point(const std::string& name, double u, double v, double theta, double phi) {
  const pf::FrameField field(pf::get(name).surface, pf::Gauge::b_aligned);
  pf::FiberPoint fp;
  fp.base = {u, v};
  fp.theta = theta;
  fp.phi = phi;
  const pf::Mat4 g = pf::induced_metric(field, fp);
  const pf::Mat4 II = pf::second_fundamental_form_x(field, fp);
  const pf::HypersurfaceData data = pf::shape_and_H(g, II);
  py::dict d;
  d["x"] = pf::x_map(field, fp);
  d["metric"] = g;
  d["II"] = II;
  d["lambdas"] = data.lambdas;
  d["H"] = data.H;
  return d;
}

}  // namespace

PYBIND11_MODULE(_polarframes, m) {
  m.doc() = "Moving-frame verification of minimal surfaces in S^5 and their polar hypersurfaces";

  auto base = py::register_exception<pf::Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<pf::InvalidConfig>(m, "InvalidConfig", base.ptr());
  py::register_exception<pf::UnknownSurface>(m, "UnknownSurface", base.ptr());
  py::register_exception<pf::WrongSpectrum>(m, "WrongSpectrum", base.ptr());
  py::register_exception<pf::SingularMetric>(m, "SingularMetric", base.ptr());
  py::register_exception<pf::NonpositiveLambda>(m, "NonpositiveLambda", base.ptr());

  m.def("catalog_names", &pf::catalog_names);
  m.def("point", [](const std::string& name, double u, double v) { return pf::Vec6(pf::get(name).surface.point({u, v})); },
        py::arg("name"), py::arg("u"), py::arg("v"));
  m.def("invariants", &invariants_at, py::arg("name"), py::arg("u"), py::arg("v"), py::arg("gauge") = "generic",
        py::arg("mode") = "analytic", "Curvature invariants of a catalog surface at a chart point.");
  m.def("polar_point", &polar_point, py::arg("name"), py::arg("u"), py::arg("v"), py::arg("theta"), py::arg("phi"),
        "Metric, second fundamental form and mean curvatures of the polar hypersurface.");

  m.def(
      "pencil",
      [](const pf::Mat2& h3, const pf::Mat2& h4, const pf::Mat2& h5, double theta, double phi) {
        const pf::PencilMatrix p = pf::pencil(pf::SecondFundamentalTensor::from_components(h3, h4, h5), theta, phi);
        return py::dict(py::arg("a") = p.a, py::arg("detA") = p.detA, py::arg("detC") = p.detC,
                        py::arg("system_residual") = p.system_residual);
      },
      py::arg("h3"), py::arg("h4"), py::arg("h5"), py::arg("theta"), py::arg("phi"));

  m.def(
      "shape_and_H",
      [](const pf::Mat4& metric, const pf::Mat4& II) {
        const pf::HypersurfaceData d = pf::shape_and_H(metric, II);
        return py::dict(py::arg("shape") = d.shape, py::arg("lambdas") = d.lambdas, py::arg("H") = d.H);
      },
      py::arg("metric"), py::arg("II"));

  py::class_<pf::ConnectionScalars>(m, "ConnectionScalars")
      .def(py::init([](double lambda, double f3, double f4, double g3, double g4, const pf::Vec4& w34) {
             return pf::ConnectionScalars{lambda, f3, f4, g3, g4, w34};
           }),
           py::arg("lambda_") = 1.0, py::arg("f3") = 0.0, py::arg("f4") = 0.0, py::arg("g3") = 0.0,
           py::arg("g4") = 0.0, py::arg("w34") = pf::Vec4::Zero())
      .def_readwrite("lambda_", &pf::ConnectionScalars::lambda)
      .def_readwrite("f3", &pf::ConnectionScalars::f3)
      .def_readwrite("f4", &pf::ConnectionScalars::f4)
      .def_readwrite("g3", &pf::ConnectionScalars::g3)
      .def_readwrite("g4", &pf::ConnectionScalars::g4)
      .def_readwrite("w34", &pf::ConnectionScalars::w34);

  m.def("rotate_frame_scalars", &pf::rotate_frame_scalars, py::arg("scalars"), py::arg("theta"));
  m.def("rotation_invariants", &pf::rotation_invariants, py::arg("scalars"));
  m.def(
      "eta_curvatures",
      [](const pf::ConnectionScalars& s) {
        const pf::EtaCurvatures c = pf::eta_curvatures(s);
        return py::dict(py::arg("K") = c.K, py::arg("KN") = c.KN, py::arg("R3412") = c.R3412,
                        py::arg("R3512") = c.R3512, py::arg("R4512") = c.R4512);
      },
      py::arg("scalars"));

  m.def(
      "run_json",
      [](const std::string& config) {
        const pf::RunConfig c = pf::parse_config(nlohmann::json::parse(config));
        const pf::VerificationReport r = [&] {
          py::gil_scoped_release release;
          return pf::run(c);
        }();
        return pf::to_json(r, c.include_points).dump();
      },
      py::arg("config"), "Runs the suites described by a JSON config and returns the JSON report.");
}
