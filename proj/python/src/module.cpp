#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "decaylab/analysis.hpp"
#include "decaylab/commands.hpp"
#include "decaylab/errors.hpp"
#include "decaylab/kernels.hpp"
#include "decaylab/picard.hpp"
#include "decaylab/radial.hpp"
#include "decaylab/representation.hpp"

namespace py = pybind11;
using namespace decaylab;

namespace {

Config to_config(const std::map<std::string, py::object>& d) {
  Config c;
  for (const auto& [k, v] : d) c.set(k, py::str(v).cast<std::string>());
  return c;
}

py::list tensor_to_list(const Tensor& t) {
  py::list out;
  if (t.rank == 0) {
    out.append(t());
    return out;
  }
  for (std::size_t i = 0; i < t.size(); ++i) out.append(t.data[i]);
  return out;
}

py::dict bound_to_dict(const BoundReport& r) {
  py::dict d;
  d["sup_ratio"] = r.sup_ratio;
  d["argmax"] = r.argmax;
  d["budget"] = r.budget;
  d["trend"] = r.trend;
  d["probes"] = r.probe_count;
  d["pass"] = r.pass;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Heat and Navier-Stokes decay checks for slowly decaying data in R^3.";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<GridError>(m, "GridError", PyExc_ValueError);
  py::register_exception<SolverError>(m, "SolverError", PyExc_RuntimeError);
  py::register_exception<QuadratureError>(m, "QuadratureError", PyExc_RuntimeError);

  m.def("heat_kernel", [](const Vec3& x, double t) { return kernels::heat_kernel(x, t); }, py::arg("x"), py::arg("t"));
  m.def("omega", [](const Vec3& x, double t) { return kernels::omega(x, t); }, py::arg("x"), py::arg("t"));
  m.def(
      "omega_derivatives",
      [](const Vec3& x, double t, int order) {
        return tensor_to_list(kernels::omega_kernel(x, t, kernels::KernelOrder(order)));
      },
      py::arg("x"), py::arg("t"), py::arg("order"), "Row-major entries of D^order omega.");
  m.def(
      "oseen_tensor", [](const Vec3& x, double t, int order) { return tensor_to_list(kernels::oseen_tensor(x, t, order)); },
      py::arg("x"), py::arg("t"), py::arg("order") = 0, "Row-major G_ij (order 0) or d_k G_ij (order 1).");

  m.def(
      "heat_profile",
      [](double alpha, double m0, double r, double t) {
        const RadialProfile p{alpha, m0};
        p.validate();
        if (t == 0.0) return p.amplitude(r);
        return radial::radial_heat_oracle([&](double s) { return p.amplitude(s); }, r, t);
      },
      py::arg("alpha"), py::arg("m0"), py::arg("r"), py::arg("t"),
      "(Gamma_t * a)(r) for a(r) = m0 (1 + r^2)^{-alpha/2}.");
  m.def(
      "heat_lq_norm",
      [](double alpha, double m0, double q, double t) {
        const RadialProfile p{alpha, m0};
        p.validate();
        auto V = [&](double r) { return radial::radial_heat_oracle([&](double s) { return p.amplitude(s); }, r, t); };
        return radial::scalar_lq_norm(V, q, t, alpha).value;
      },
      py::arg("alpha"), py::arg("m0"), py::arg("q"), py::arg("t"));

  m.def(
      "fit_decay_exponent",
      [](const std::vector<double>& t, const std::vector<double>& v, double lo, double hi, bool log_corrected) {
        if (t.size() != v.size()) throw DomainError("fit_decay_exponent: t and v differ in length");
        analysis::DecaySeries s;
        for (std::size_t i = 0; i < t.size(); ++i) s.push(t[i], v[i]);
        const auto f = analysis::fit_decay_exponent(s, lo, hi, log_corrected);
        py::dict d;
        d["slope"] = f.slope;
        d["intercept"] = f.intercept;
        d["rms_residual"] = f.rms_residual;
        d["points"] = f.points;
        return d;
      },
      py::arg("t"), py::arg("values"), py::arg("t_lo"), py::arg("t_hi"), py::arg("log_corrected") = false);

  m.def("time_integral", &analysis::time_integral, py::arg("a"), py::arg("alpha"), py::arg("t_grid"));
  m.def("time_integral_envelope", &analysis::time_integral_envelope, py::arg("a"), py::arg("alpha"), py::arg("t"),
        py::arg("delta") = 0.1);
  m.def("convolution_integral", &analysis::convolution_integral, py::arg("A"), py::arg("B"), py::arg("a"),
        py::arg("b"), py::arg("r"));
  m.def("convolution_integral_closed_inner", &analysis::convolution_integral_closed_inner, py::arg("A"),
        py::arg("B"), py::arg("a"), py::arg("b"), py::arg("r"));
  m.def(
      "certify_convolution_bound",
      [](double A, double B, double a, double b, const std::vector<double>& r, double budget) {
        return bound_to_dict(analysis::certify_convolution_bound(A, B, a, b, r, budget));
      },
      py::arg("A"), py::arg("B"), py::arg("a"), py::arg("b"), py::arg("r_probes"), py::arg("budget"));

  m.def(
      "representation_residual",
      [](double alpha, double m0, const std::vector<Vec3>& probes, double t, bool unit_cutoff) {
        analysis::RepresentationOptions opt;
        opt.unit_cutoff = unit_cutoff;
        const auto rs = analysis::representation_residual(make_slow_decay_field(RadialProfile{alpha, m0}), probes, t, opt);
        std::vector<double> out;
        for (const auto& r : rs) out.push_back(r.residual);
        return out;
      },
      py::arg("alpha"), py::arg("m0"), py::arg("probes"), py::arg("t"), py::arg("unit_cutoff") = false);

  m.def(
      "picard_run",
      [](double alpha, double q, double m0, int N, double L, double t_final, int time_nodes, int max_iterations) {
        picard::PicardConfig cfg;
        cfg.alpha = alpha;
        cfg.q = q;
        cfg.m0 = m0;
        cfg.grid = GridSpec{N, L};
        cfg.t_final = t_final;
        cfg.time_nodes = time_nodes;
        cfg.max_iterations = max_iterations;
        cfg.validate();
        picard::Trajectory tr;
        {
          py::gil_scoped_release release;
          tr = picard::run_picard(picard::initial_grid_field(cfg), cfg);
        }
        const auto rep = picard::contraction_report(tr, cfg);
        py::dict d;
        d["times"] = tr.times;
        std::vector<double> xs;
        for (const auto& led : tr.iterates) xs.push_back(picard::x_norm(tr.times, led, alpha, q).x_norm);
        d["x_norms"] = xs;
        std::vector<double> linf;
        for (const auto& e : tr.iterates.back()) linf.push_back(e.linf);
        d["linf"] = linf;
        d["ratios"] = rep.ratios;
        d["max_ratio"] = rep.max_ratio;
        d["contracting"] = rep.contracting;
        d["converged_iterations"] = rep.converged_iterations;
        d["max_divergence"] = tr.max_divergence;
        return d;
      },
      py::arg("alpha") = 1.0, py::arg("q") = 4.0, py::arg("m0"), py::arg("N") = 32, py::arg("L") = 16.0,
      py::arg("t_final") = 10.0, py::arg("time_nodes") = 16, py::arg("max_iterations") = 4,
      "Picard iteration on the periodic box; returns norm ledgers and contraction ratios.");

  m.def(
      "run_command",
      [](const std::string& name, const std::map<std::string, py::object>& config,
         const std::map<std::string, py::object>& budgets, const std::string& out_dir) {
        const Config c = to_config(config), b = to_config(budgets);
        py::gil_scoped_release release;
        return commands::run_command(name, c, b, out_dir);
      },
      py::arg("name"), py::arg("config"), py::arg("budgets"), py::arg("out_dir"),
      "Runs a decay-lab command; returns its exit code and writes JSON and summary.tsv.");
  m.def(
      "load_config", [](const std::string& path) { return Config::load(path).values(); }, py::arg("path"));
}
