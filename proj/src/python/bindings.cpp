#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "corot/evolve.hpp"
#include "corot/nullgeom.hpp"
#include "corot/residuals.hpp"
#include "corot/target.hpp"
#include "corot/vfm.hpp"

namespace py = pybind11;
using namespace corot;

namespace {

py::array_t<double> to_array(const std::vector<double>& v) {
  py::array_t<double> out(v.size());
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

py::dict slice_dict(const Slice& s) {
  py::dict d;
  d["t"] = s.t;
  d["alpha"] = s.alpha;
  d["k"] = s.k;
  d["dr"] = s.grid.dr;
  std::vector<double> r(s.grid.n_points);
  for (int i = 0; i < s.grid.n_points; ++i) r[i] = s.grid.r(i);
  d["r"] = to_array(r);
  d["v"] = to_array(s.v);
  d["pi"] = to_array(s.pi);
  d["gamma"] = to_array(s.gamma);
  d["omega"] = to_array(s.omega);
  return d;
}

EvolutionConfig config_from_kwargs(const TargetManifold& target, int n, double r_max,
                                   double t_end, double cfl, double alpha, int k,
                                   double store_dt, bool skip_domain_check) {
  EvolutionConfig ec;
  ec.grid = RadialGrid::make(n, r_max);
  ec.t_end = t_end;
  ec.cfl = cfl;
  ec.alpha = alpha;
  ec.k = k;
  ec.target = target;
  ec.store_dt = store_dt;
  ec.skip_domain_check = skip_domain_check;
  return ec;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "constrained evolution and null-cone diagnostics for self-gravitating "
            "corotational wave maps";

  py::class_<TargetManifold>(m, "Target")
      .def_readonly("name", &TargetManifold::name)
      .def("eval",
           [](const TargetManifold& t, double u) {
             const TargetEval e = t.eval(u);
             return py::make_tuple(e.f, e.fu, e.ffu, e.wp);
           },
           py::arg("u"), "returns (f, f_u, f*f_u, wp)")
      .def("check_condition",
           [](const TargetManifold& t, const std::string& id, double u_max, int samples) {
             TargetCondition c;
             if (id == "geodesic_convexity")
               c = TargetCondition::GeodesicConvexity;
             else if (id == "grillakis")
               c = TargetCondition::Grillakis;
             else if (id == "sphere_at_infinity")
               c = TargetCondition::SphereAtInfinity;
             else
               throw ConfigError("unknown condition " + id);
             const ConditionReport rep = check_condition(t, c, u_max, samples);
             py::dict d;
             d["condition"] = to_string(rep.id);
             d["verdict"] = to_string(rep.verdict);
             d["witness_u"] = rep.witness_u;
             d["witness_value"] = rep.witness_value;
             d["heuristic"] = rep.heuristic;
             return d;
           },
           py::arg("condition"), py::arg("u_max") = 10.0, py::arg("samples") = 4096);

  m.def("make_target", &make_target, py::arg("name"),
        py::arg("coeffs") = std::vector<double>{});

  py::class_<History>(m, "History")
      .def("__len__", &History::size)
      .def("time", [](const History& h, int i) { return h.t(i); })
      .def("slice", [](const History& h, int i) { return slice_dict(h.slice(i)); });

  py::class_<RunResult>(m, "RunResult")
      .def_readonly("history", &RunResult::history)
      .def_readonly("E0", &RunResult::E0)
      .def_readonly("dt", &RunResult::dt)
      .def_readonly("steps", &RunResult::steps)
      .def_property_readonly("status",
                             [](const RunResult& r) { return to_string(r.status.verdict); })
      .def_property_readonly("max_abs_v",
                             [](const RunResult& r) { return r.status.max_abs_v; });

  m.def(
      "evolve",
      [](const TargetManifold& target, double amplitude, const std::string& family,
         double center, double width, bool time_symmetric, int n, double r_max,
         double t_end, double cfl, double alpha, int k, double store_dt,
         bool skip_domain_check) {
        InitialDataSpec spec;
        spec.family = family == "gaussian_bump" ? InitialDataSpec::Family::GaussianBump
                                                : InitialDataSpec::Family::CompactBump;
        spec.amplitude = amplitude;
        spec.center = center;
        spec.width = width;
        spec.time_symmetric = time_symmetric;
        const EvolutionConfig ec = config_from_kwargs(
            target, n, r_max, t_end, cfl, alpha, k, store_dt, skip_domain_check);
        return run(ec, spec);
      },
      py::arg("target"), py::arg("amplitude"), py::arg("family") = "compact_bump",
      py::arg("center") = 0.5, py::arg("width") = 0.25, py::arg("time_symmetric") = true,
      py::arg("n") = 257, py::arg("r_max") = 2.0, py::arg("t_end") = 1.0,
      py::arg("cfl") = 0.5, py::arg("alpha") = 1.0, py::arg("k") = 1,
      py::arg("store_dt") = 0.0, py::arg("skip_domain_check") = false);

  m.def(
      "energy_table",
      [](const History& h, const TargetManifold& target) {
        std::vector<double> ts(h.size()), Es(h.size());
        for (int i = 0; i < h.size(); ++i) {
          ts[i] = h.t(i);
          Es[i] = energy(h.slice(i), compute_densities(h.slice(i), target)).E_total;
        }
        return py::make_tuple(to_array(ts), to_array(Es));
      },
      py::arg("history"), py::arg("target"));

  m.def(
      "cone_table",
      [](const History& h, const TargetManifold& target, double apex, double lam) {
        const ConeRegion cone = cone_trace(h, apex, lam);
        std::vector<double> ts, rc, EO, flx;
        int prev = -1;
        for (int ti = 0; ti < h.size(); ++ti) {
          if (h.t(ti) < cone.t_min() - 1e-12 || h.t(ti) > cone.t_apex + 1e-12) continue;
          const double r = cone.r_at(h.t(ti));
          if (r <= 2.0 * h.grid().dr) continue;
          ts.push_back(h.t(ti));
          rc.push_back(r);
          EO.push_back(cone_energy(h, cone, ti, target));
          flx.push_back(prev >= 0 ? flux(h, cone, Multiplier::X1(), prev, ti, target) : 0.0);
          prev = ti;
        }
        return py::make_tuple(to_array(ts), to_array(rc), to_array(EO), to_array(flx));
      },
      py::arg("history"), py::arg("target"), py::arg("apex"), py::arg("lam") = 0.5);

  m.def(
      "momentum_residual",
      [](const History& h, int ti) { return to_array(momentum_constraint_residual(h, ti)); },
      py::arg("history"), py::arg("index"));

  py::register_exception<ConfigError>(m, "ConfigError");
  py::register_exception<DeficitAngleExceeded>(m, "DeficitAngleExceeded");
}
