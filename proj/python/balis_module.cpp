#include <sstream>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "balis/cli.hpp"
#include "balis/error.hpp"
#include "balis/experiments.hpp"
#include "balis/greedy.hpp"
#include "balis/moments.hpp"
#include "balis/ogp.hpp"
#include "balis/oracle.hpp"

namespace py = pybind11;
using namespace balis;

namespace {

Gamma to_gamma(const py::object& g) {
  if (py::isinstance<py::str>(g)) return Gamma::parse(g.cast<std::string>());
  return Gamma(g.cast<double>());
}

Params make_params(std::uint32_t n, double p, const py::object& gamma, double epsilon, std::optional<double> mu) {
  Params prm{n, p, to_gamma(gamma), epsilon, mu};
  prm.validate();
  return prm;
}

Seed to_seed(const py::object& s) {
  if (py::isinstance<Seed>(s)) return s.cast<Seed>();
  if (py::isinstance<py::str>(s)) return Seed::parse(s.cast<std::string>());
  return Seed(s.cast<std::uint64_t>());
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> edge_list(const BipartiteGraph& g) {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
  for (std::uint32_t u = 0; u < g.n(); ++u) g.row(u).for_each([&](std::size_t v) { out.emplace_back(u, std::uint32_t(v)); });
  return out;
}

py::dict set_dict(const BalancedSet& s) {
  py::dict d;
  d["L"] = s.lpart.to_indices();
  d["R"] = s.rpart.to_indices();
  return d;
}

py::dict trace_dict(const RunTrace& t) {
  py::list arrivals;
  for (const auto& v : t.arrivals) arrivals.append(py::make_tuple(std::string(1, side_char(v.side)), v.id));
  py::dict d;
  d["n"] = t.n;
  d["arrivals"] = arrivals;
  d["accepted"] = std::vector<bool>(t.accepted.begin(), t.accepted.end());
  d["T_f"] = t.T_f;
  d["T_b"] = t.T_b;
  d["tau"] = t.tau;
  d["majority"] = std::string(1, side_char(t.majority));
  d["final_set"] = set_dict(t.final_set);
  d["final_size"] = t.final_size();
  return d;
}

}  // namespace

PYBIND11_MODULE(_balis, m) {
  m.doc() = "Balanced independent sets in dense random bipartite graphs";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<GuardError>(m, "GuardError", PyExc_OverflowError);
  py::register_exception<FormatError>(m, "FormatError", PyExc_ValueError);
  py::register_exception<ContractViolation>(m, "ContractViolation", PyExc_RuntimeError);

  py::class_<Seed>(m, "Seed")
      .def(py::init<std::uint64_t>(), py::arg("master"))
      .def_static("parse", [](const std::string& s) { return Seed::parse(s); })
      .def("derive", &Seed::derive, py::arg("label"), py::arg("index"))
      .def_property_readonly("value", &Seed::value)
      .def_property_readonly("master", &Seed::master)
      .def("__str__", &Seed::to_string)
      .def("__repr__", [](const Seed& s) { return "Seed('" + s.to_string() + "')"; })
      .def("__eq__", [](const Seed& a, const Seed& b) { return a == b; });

  py::class_<Thresholds>(m, "Thresholds")
      .def_readonly("alpha_stat", &Thresholds::alpha_stat)
      .def_readonly("alpha_comp", &Thresholds::alpha_comp)
      .def_readonly("t1", &Thresholds::t1)
      .def_readonly("t2", &Thresholds::t2)
      .def_readonly("tau_target", &Thresholds::tau_target);

  m.def(
      "compute_thresholds",
      [](std::uint32_t n, double p, const py::object& gamma, double epsilon, std::optional<double> mu) {
        return compute_thresholds(make_params(n, p, gamma, epsilon, mu));
      },
      py::arg("n"), py::arg("p") = 0.5, py::arg("gamma") = "1/2", py::arg("epsilon") = 0.1, py::arg("mu") = py::none());

  m.def(
      "is_gamma_balanced",
      [](std::uint64_t l, std::uint64_t r, const py::object& gamma) { return is_gamma_balanced(l, r, to_gamma(gamma)); },
      py::arg("l_count"), py::arg("r_count"), py::arg("gamma"));

  py::class_<BipartiteGraph>(m, "BipartiteGraph")
      .def_static("from_edges", &BipartiteGraph::from_edges, py::arg("n"), py::arg("edges"))
      .def_static("loads",
                  [](const std::string& text) {
                    std::istringstream is(text);
                    return load_graph(is);
                  })
      .def("dumps",
           [](const BipartiteGraph& g) {
             std::ostringstream os;
             save_graph(g, os);
             return os.str();
           })
      .def_property_readonly("n", &BipartiteGraph::n)
      .def("has_edge", &BipartiteGraph::has_edge, py::arg("u"), py::arg("v"))
      .def("edge_count", &BipartiteGraph::edge_count)
      .def("edges", &edge_list)
      .def("__eq__", [](const BipartiteGraph& a, const BipartiteGraph& b) { return a == b; });

  m.def(
      "generate_graph",
      [](std::uint32_t n, double p, const py::object& seed) { return generate_graph(n, p, to_seed(seed)); },
      py::arg("n"), py::arg("p"), py::arg("seed"));

  m.def(
      "greedy",
      [](const BipartiteGraph& g, double p, double epsilon, const py::object& gamma, const std::string& policy,
         const py::object& seed) {
        const auto prm = make_params(g.n(), p, gamma, epsilon, std::nullopt);
        return trace_dict(greedy::two_stage(g, ArrivalPolicy::parse(policy), prm, to_seed(seed)));
      },
      py::arg("graph"), py::arg("p"), py::arg("epsilon"), py::arg("gamma") = "1/2",
      py::arg("policy") = "uniform-random", py::arg("seed") = 0,
      "Two-stage greedy with targets from the thresholds at (n, p, gamma, epsilon).");

  m.def(
      "greedy_with_targets",
      [](const BipartiteGraph& g, int t1, int t2, const std::string& policy, const py::object& gamma,
         const py::object& seed) {
        return trace_dict(
            greedy::two_stage(g, ArrivalPolicy::parse(policy), greedy::GreedyConfig{t1, t2, to_gamma(gamma)}, to_seed(seed)));
      },
      py::arg("graph"), py::arg("t1"), py::arg("t2"), py::arg("policy") = "uniform-random", py::arg("gamma") = "1/2",
      py::arg("seed") = 0);

  m.def(
      "max_balanced_independent_set",
      [](const BipartiteGraph& g, const py::object& gamma) {
        const auto r = oracle::max_balanced_independent_set(g, to_gamma(gamma), oracle::EnumerationSide::L, true);
        py::dict d;
        d["max_size"] = r.max_size;
        d["witness"] = set_dict(r.witness);
        d["Z"] = *r.z_counts;
        return d;
      },
      py::arg("graph"), py::arg("gamma") = "1/2");

  m.def(
      "count_balanced_independent_sets",
      [](const BipartiteGraph& g, const py::object& gamma, int alpha) {
        return oracle::count_balanced_independent_sets(g, to_gamma(gamma), alpha);
      },
      py::arg("graph"), py::arg("gamma"), py::arg("alpha"));

  m.def(
      "log_first_moment",
      [](std::uint64_t n, double p, const py::object& gamma, int alpha) {
        return moments::log_first_moment(n, p, to_gamma(gamma), alpha);
      },
      py::arg("n"), py::arg("p"), py::arg("gamma"), py::arg("alpha"));
  m.def(
      "second_moment_ratio",
      [](std::uint64_t n, double p, const py::object& gamma, double epsilon) {
        return moments::second_moment_ratio(n, p, to_gamma(gamma), epsilon);
      },
      py::arg("n"), py::arg("p"), py::arg("gamma"), py::arg("epsilon"));
  m.def(
      "overlap_exponent_q",
      [](std::uint64_t n, double p, const py::object& gamma, double epsilon, int i1, int i2) {
        return moments::overlap_exponent_q(n, p, to_gamma(gamma), epsilon, i1, i2);
      },
      py::arg("n"), py::arg("p"), py::arg("gamma"), py::arg("epsilon"), py::arg("i1"), py::arg("i2"));
  m.def(
      "first_moment_crossing",
      [](std::uint64_t n, double p, const py::object& gamma, double threshold) {
        return moments::first_moment_crossing(n, p, to_gamma(gamma), threshold);
      },
      py::arg("n"), py::arg("p"), py::arg("gamma"), py::arg("threshold") = 1.0);

  m.def(
      "estimate_success_probability",
      [](std::uint32_t n, double p, const py::object& gamma, double epsilon, std::size_t m_copies, int k,
         std::size_t trials, const py::object& seed, const std::string& policy) {
        const auto prm = make_params(n, p, gamma, epsilon, std::nullopt);
        const auto factory = greedy::two_stage_factory(greedy::GreedyConfig::from_params(prm));
        const auto arrival = ArrivalPolicy::parse(policy);
        const auto master = to_seed(seed);
        ogp::SuccessEstimate est;
        {
          py::gil_scoped_release release;
          est = ogp::estimate_success_probability(prm, factory, arrival, m_copies, k, trials, master, 0);
        }
        py::dict d;
        d["p_hat_S"] = est.p_hat_S;
        d["p_hat_E"] = est.p_hat_E;
        d["stderr_S"] = est.stderr_S;
        d["stderr_E"] = est.stderr_E;
        d["combined_stderr"] = est.combined_stderr;
        d["trials"] = est.trials;
        d["m"] = est.m;
        d["k"] = est.k;
        return d;
      },
      py::arg("n"), py::arg("p"), py::arg("gamma"), py::arg("epsilon"), py::arg("m"), py::arg("k"), py::arg("trials"),
      py::arg("seed"), py::arg("policy") = "uniform-random");

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = cli::run_command(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs one CLI invocation in-process; returns (exit_code, stdout, stderr).");
}
