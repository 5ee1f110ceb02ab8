#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "busgate/engines.hpp"
#include "busgate/maps.hpp"
#include "busgate/optimize.hpp"
#include "busgate/protocols.hpp"
#include "busgate/reproduce.hpp"
#include "busgate/scenario.hpp"

namespace py = pybind11;
using namespace busgate;

namespace {

EngineOptions engine_options(const std::string& engine, int cap_sites) {
  EngineOptions o;
  o.engine = parse_engine(engine);
  o.site_cap = cap_sites;
  return o;
}

ChainSpec chain(int n, double lambda) {
  ChainSpec s;
  s.n_bus = n;
  s.lambda = lambda;
  return s;
}

py::dict table_dict(const io::Table& t) {
  py::dict d;
  d["name"] = t.name;
  d["columns"] = t.columns;
  d["rows"] = t.rows;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Two-qubit gate mediated by a spin-chain bus";
  m.attr("__version__") = io::code_version();

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

  py::class_<Optimum>(m, "Optimum")
      .def_readonly("n", &Optimum::n)
      .def_readonly("j0_opt", &Optimum::j0_opt)
      .def_readonly("t_opt", &Optimum::t_opt)
      .def_readonly("peak", &Optimum::peak)
      .def_readonly("amplitude", &Optimum::amplitude)
      .def_readonly("boundary_hit", &Optimum::boundary_hit)
      .def("__repr__", [](const Optimum& o) {
        return "Optimum(n=" + std::to_string(o.n) + ", j0_opt=" + io::format_number(o.j0_opt) +
               ", t_opt=" + io::format_number(o.t_opt) + ", peak=" + io::format_number(o.peak) + ")";
      });

  m.def("optimize", [](int n, double j) { return optimize(n, j); }, py::arg("n"), py::arg("j") = 1.0,
        "Transfer optimum over (j0, t).");
  m.def(
      "fit_scaling",
      [](const std::vector<int>& ns) {
        std::vector<Optimum> o;
        for (int n : ns) o.push_back(optimize(n));
        const auto f = fit_scaling(o);
        return py::dict(py::arg("prefactor") = f.prefactor, py::arg("exponent") = f.exponent, py::arg("a") = f.a,
                        py::arg("b") = f.b);
      },
      py::arg("n_values"));
  m.def("optimal_coupling_estimate", &optimal_coupling_estimate, py::arg("n"), py::arg("j") = 1.0);
  m.def("transfer_time_estimate", &transfer_time_estimate, py::arg("n"), py::arg("j") = 1.0);
  m.def(
      "transfer_amplitude",
      [](int n, double j0, double t) { return ffq::transfer_amplitude(validate_spec(chain(n, 0.0)), j0, t); },
      py::arg("n"), py::arg("j0"), py::arg("t"));
  m.def(
      "ideal_gate", [](int n, int p) { return ideal_gate(n, p).matrix(); }, py::arg("n"), py::arg("parity_p"),
      "4x4 target unitary in the |ab> basis.");

  m.def(
      "run_gate",
      [](int n, double j0, const std::vector<double>& times, double lambda, const std::string& engine,
         int cap_sites) {
        const auto r = protocols::run_gate(chain(n, lambda), engine_options(engine, cap_sites), j0, times, times,
                                           times.empty() ? 0.0 : times.back());
        std::vector<Eigen::Matrix<cplx, 16, 16>> maps_out;
        for (const auto& e : r.checkpoint_maps) maps_out.push_back(e.e);
        py::dict d;
        d["times"] = r.times;
        d["F_G"] = r.f_g;
        d["F_M"] = r.f_m;
        d["maps"] = maps_out;
        d["parity_p"] = r.parity_p;
        d["engine"] = to_string(r.engine);
        return d;
      },
      py::arg("n"), py::arg("j0"), py::arg("times"), py::arg("lam") = 0.0, py::arg("engine") = "auto",
      py::arg("cap_sites") = mbq::kDefaultSiteCap,
      "Sudden gate run; maps are 16x16 with row 4i+j and column 4k+l.");
  m.def(
      "run_repeated",
      [](int n, double j0, double t_star, int k_max, const std::string& mode, const std::string& engine) {
        std::vector<std::tuple<int, double, double>> rows;
        for (const auto& r : protocols::run_repeated(chain(n, 0.0), engine_options(engine, mbq::kDefaultSiteCap), j0,
                                                     t_star, k_max, protocols::parse_repeat_mode(mode)))
          rows.emplace_back(r.k, r.f_g, r.f_m);
        return rows;
      },
      py::arg("n"), py::arg("j0"), py::arg("t_star"), py::arg("k_max") = 8, py::arg("mode") = "reprepare",
      py::arg("engine") = "auto");

  m.def(
      "average_gate_fidelity",
      [](const Eigen::Matrix<cplx, 16, 16>& e, const Mat4& g) {
        maps::ProcessMap pm;
        pm.e = e;
        return maps::average_gate_fidelity(pm, g);
      },
      py::arg("map"), py::arg("gate"));
  m.def(
      "unitary_channel", [](const Mat4& u) { return maps::unitary_channel(u).e; }, py::arg("u"));
  m.def("concurrence", &maps::concurrence, py::arg("rho"));

  m.def(
      "run_scenario",
      [](const std::string& json_text) {
        const auto s = parse_scenario(nlohmann::json::parse(json_text));
        const auto r = run_scenario(s);
        py::list tables;
        for (const auto& t : r.tables) tables.append(table_dict(t));
        py::dict d;
        d["tables"] = tables;
        d["summary"] = r.summary;
        d["engine"] = r.engine;
        return d;
      },
      py::arg("scenario_json"), "Runs a scenario given as a JSON string.");
  m.def(
      "reproduce",
      [](const std::string& target, const std::string& engine, int cap_sites) {
        return table_dict(reproduce(target, engine_options(engine, cap_sites)).table);
      },
      py::arg("target"), py::arg("engine") = "auto", py::arg("cap_sites") = mbq::kDefaultSiteCap);
}
