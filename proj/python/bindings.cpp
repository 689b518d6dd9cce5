#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <algorithm>

#include "demi/asymptotics.hpp"
#include "demi/bounds.hpp"
#include "demi/experiment.hpp"
#include "demi/oracle.hpp"
#include "demi/registry.hpp"

namespace py = pybind11;
using namespace demi;

namespace {

using Fields = std::map<std::string, std::string>;

py::dict clt_row(const CltDiagnostics& r) {
  py::dict d;
  d["n"] = r.n;
  d["sigma_n"] = r.sigma_n;
  d["v_n"] = r.v_n;
  d["ratio_cubed"] = r.ratio_cubed;
  d["ks_distance"] = r.ks_distance;
  d["ks_critical"] = r.ks_critical;
  d["ecf_distance"] = r.ecf_distance;
  return d;
}

py::dict tail_row(const TailRow& r) {
  py::dict d;
  d["n"] = r.n;
  d["threshold"] = r.threshold;
  d["tail"] = r.tail;
  d["std_error"] = r.std_error;
  d["exact"] = r.exact;
  d["envelope"] = r.envelope;
  d["partial_sum"] = r.partial_sum;
  d["vn_over_nr"] = r.vn_over_nr;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Demimartingale inequality verification core";

  auto domain = py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", domain.ptr());
  py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_RuntimeError);

  m.def("phi", &phi, py::arg("u"));
  m.def("phi_bound", &phi_bound, py::arg("u"));
  m.def("mgf_log_bound", &mgf_log_bound, py::arg("lam"), py::arg("c"), py::arg("ex2"));
  m.def("h1", &h1, py::arg("u"));
  m.def("h1_lower", &h1_lower, py::arg("u"));
  m.def("psi_sup", &psi_sup, py::arg("t"), py::arg("v"), py::arg("c"));
  m.def(
      "bernstein_tail",
      [](double t, double v, double c, std::size_t n, bool two_sided) {
        const BernsteinInput in{t, v, c, n};
        return two_sided ? bernstein_tail_two_sided(in) : bernstein_tail(in);
      },
      py::arg("t"), py::arg("v"), py::arg("c"), py::arg("n") = 1, py::arg("two_sided") = false);
  m.def("doob_max_bound", &doob_max_bound, py::arg("es1"), py::arg("lam"));
  m.def("lp_max_bound", &lp_max_bound, py::arg("p"), py::arg("m"), py::arg("es1"));
  m.def("moment_bound", &moment_bound, py::arg("p"), py::arg("v_n"));

  m.def(
      "run_config_json",
      [](const std::string& text) {
        const auto cfg = parse_config(text);
        py::gil_scoped_release release;
        return run_experiment(cfg).json;
      },
      py::arg("text"), "Runs one experiment from config text; returns the report JSON.");
  m.def(
      "run_suite_json",
      [](const std::filesystem::path& dir, std::optional<std::filesystem::path> out) {
        py::gil_scoped_release release;
        const auto s = run_suite(dir, out);
        return std::make_pair(s.exit_code, s.json);
      },
      py::arg("directory"), py::arg("out") = py::none());

  m.def("registry", [] {
    py::list out;
    for (const auto& e : registry()) {
      py::dict d;
      d["id"] = e.id;
      d["aliases"] = e.aliases;
      d["required"] = e.required;
      d["optional"] = e.optional;
      d["needs_stopping"] = e.needs_stopping;
      d["summary"] = e.summary;
      out.append(d);
    }
    return out;
  });

  m.def(
      "generate",
      [](const Fields& generator, std::size_t paths, std::uint64_t seed) {
        const auto spec = parse_generator(generator);
        const auto e = generate(spec, paths, seed);
        py::array_t<double> out({e.size(), e.horizon()});
        std::copy(e.flat().begin(), e.flat().end(), out.mutable_data());
        return out;
      },
      py::arg("generator"), py::arg("paths"), py::arg("seed"),
      "Paths as a (paths, horizon) array of partial sums.");
  m.def(
      "terminal_law",
      [](const Fields& generator) {
        std::vector<std::pair<double, double>> out;
        for (const auto& a : terminal_law(parse_generator(generator))) out.emplace_back(a.value, a.prob);
        return out;
      },
      py::arg("generator"));
  m.def(
      "tail_probability",
      [](const std::vector<std::pair<double, double>>& law, double t, bool two_sided) {
        std::vector<Atom> atoms;
        for (const auto& [v, p] : law) atoms.push_back({v, p});
        return tail_probability(atoms, t, two_sided);
      },
      py::arg("law"), py::arg("t"), py::arg("two_sided") = false);

  m.def("ks_distance_normal",
        [](const std::vector<double>& z) { return ks_distance_normal(z); });
  m.def("ks_critical_value", &ks_critical_value);
  m.def(
      "clt_diagnose",
      [](const Fields& generator, const std::vector<std::size_t>& n_grid, std::size_t paths,
         std::uint64_t seed) {
        const auto report = clt_diagnose(parse_generator(generator), n_grid, paths, seed);
        py::dict d;
        py::list rows;
        for (const auto& r : report.rows) rows.append(clt_row(r));
        d["rows"] = rows;
        d["ratio_decreasing"] = report.ratio_decreasing;
        return d;
      },
      py::arg("generator"), py::arg("n_grid"), py::arg("paths"), py::arg("seed"));
  m.def(
      "complete_convergence",
      [](const Fields& generator, double r, double epsilon, const std::vector<std::size_t>& n_grid,
         std::size_t paths, std::uint64_t seed) {
        const auto diag =
            complete_convergence_diagnose(parse_generator(generator), r, epsilon, n_grid, paths, seed);
        py::dict d;
        py::list rows;
        for (const auto& row : diag.rows) rows.append(tail_row(row));
        d["rows"] = rows;
        d["geometric_fit"] = diag.geometric_fit;
        d["hypothesis_trend"] = diag.hypothesis_trend;
        d["summable_decay"] = diag.summable_decay;
        return d;
      },
      py::arg("generator"), py::arg("r"), py::arg("epsilon"), py::arg("n_grid"),
      py::arg("paths") = 100000, py::arg("seed") = 0);
}
