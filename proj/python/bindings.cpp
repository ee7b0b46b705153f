#include <fstream>
#include <sstream>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "netsample/allocator.hpp"
#include "netsample/bounds.hpp"
#include "netsample/equilibrium.hpp"
#include "netsample/errors.hpp"
#include "netsample/graph.hpp"
#include "netsample/montecarlo.hpp"

namespace py = pybind11;
using namespace netsample;

namespace {

EquilibriumWeights weights_of(const Graph& g, const InfluenceFactors& v) {
  return compute_weights(build_game_matrix(g, v));
}

std::string rational_str(const Rational& r) {
  std::ostringstream s;
  s << r;
  return s.str();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Sample allocation for opinion formation on networks";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<DisconnectedGraphError>(m, "DisconnectedGraphError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
  py::register_exception<InvariantViolation>(m, "InvariantViolation", PyExc_AssertionError);

  py::class_<Graph>(m, "Graph")
      .def_static(
          "from_edges",
          [](std::size_t n, const std::vector<std::pair<NodeId, NodeId>>& edges) {
            std::vector<Edge> list;
            list.reserve(edges.size());
            for (const auto& [u, v] : edges) list.push_back({u, v});
            return Graph::from_edges(n, list);
          },
          py::arg("num_nodes"), py::arg("edges"))
      .def_property_readonly("num_nodes", &Graph::num_nodes)
      .def_property_readonly("num_edges", &Graph::num_edges)
      .def("degree", &Graph::degree)
      .def("degrees", &Graph::degrees)
      .def("has_edge", &Graph::has_edge)
      .def("edges",
           [](const Graph& g) {
             std::vector<std::pair<NodeId, NodeId>> out;
             for (const Edge& e : g.edges()) out.emplace_back(e.u, e.v);
             return out;
           })
      .def("__eq__", [](const Graph& a, const Graph& b) { return a == b; })
      .def("__repr__", [](const Graph& g) {
        return "Graph(num_nodes=" + std::to_string(g.num_nodes()) + ", num_edges=" + std::to_string(g.num_edges()) +
               ")";
      });

  py::class_<InfluenceFactors>(m, "InfluenceFactors")
      .def_static("uniform", &InfluenceFactors::uniform, py::arg("alpha"))
      .def_static("random_uniform", &InfluenceFactors::random_uniform, py::arg("graph"), py::arg("max_weight"),
                  py::arg("seed"))
      .def_static(
          "per_edge",
          [](const std::vector<std::tuple<NodeId, NodeId, double>>& weights) {
            std::vector<std::pair<Edge, double>> list;
            for (const auto& [u, v, w] : weights) list.push_back({{u, v}, w});
            return InfluenceFactors::per_edge(list);
          },
          py::arg("weights"))
      .def_property_readonly("is_uniform", &InfluenceFactors::is_uniform)
      .def_property_readonly("alpha", &InfluenceFactors::alpha)
      .def("weight", &InfluenceFactors::weight);

  m.def("clique", &clique, py::arg("n"));
  m.def("star", &star, py::arg("n"));
  m.def("hypercube", &hypercube, py::arg("dimension"));
  m.def("random_regular", &random_regular, py::arg("n"), py::arg("d"), py::arg("seed"));
  m.def("erdos_renyi", &erdos_renyi, py::arg("n"), py::arg("p"), py::arg("seed"));
  m.def("barabasi_albert", &barabasi_albert, py::arg("n"), py::arg("attach"), py::arg("seed"));
  m.def(
      "load_edge_list",
      [](const std::string& path) {
        std::ifstream in(path);
        if (!in) throw std::invalid_argument("cannot open '" + path + "'");
        LoadedGraph loaded = load_edge_list(in);
        return py::make_tuple(std::move(loaded.graph), std::move(loaded.weights), loaded.original_ids);
      },
      py::arg("path"), "Returns (graph, weights or None, original ids).");

  py::class_<EquilibriumWeights>(m, "EquilibriumWeights")
      .def_readonly("a", &EquilibriumWeights::a)
      .def_readonly("q", &EquilibriumWeights::q)
      .def_readonly("w2diag", &EquilibriumWeights::w2diag)
      .def_readonly("residual", &EquilibriumWeights::residual);
  m.def("equilibrium_weights", &weights_of, py::arg("graph"), py::arg("influence"));

  py::class_<Allocation>(m, "Allocation")
      .def_readonly("m", &Allocation::m)
      .def_readonly("objective", &Allocation::objective)
      .def_readonly("lam", &Allocation::lambda)
      .def_readonly("gap", &Allocation::gap)
      .def_readonly("newton_steps", &Allocation::newton_steps)
      .def_readonly("diagnostics", &Allocation::diagnostics)
      .def_property_readonly("status", [](const Allocation& a) { return std::string(to_string(a.status)); })
      .def_property_readonly("ok", &Allocation::ok);
  m.def(
      "solve",
      [](const Graph& g, const InfluenceFactors& v, double tol, bool closed_form) {
        const auto ew = weights_of(g, v);
        BarrierOptions opts;
        opts.tol = tol;
        return closed_form ? solve(ew, opts) : solve_primal(ew, opts);
      },
      py::arg("graph"), py::arg("influence"), py::arg("tol") = 1e-8, py::arg("closed_form") = true,
      "Optimal normalized allocation. closed_form=False forces the barrier solver.");
  m.def(
      "dual_value",
      [](const Graph& g, const InfluenceFactors& v, const Eigen::VectorXd& lambda) {
        return dual_value(weights_of(g, v), lambda);
      },
      py::arg("graph"), py::arg("influence"), py::arg("lam"));
  m.def(
      "integer_round",
      [](const Eigen::VectorXd& alloc, double m_eps) { return integer_round(alloc, m_eps).counts; },
      py::arg("allocation"), py::arg("m_eps"));

  py::class_<BoundsReport>(m, "Bounds")
      .def_readonly("trivial_lower", &BoundsReport::trivial_lower)
      .def_readonly("trivial_upper", &BoundsReport::trivial_upper)
      .def_property_readonly("degree_lower",
                             [](const BoundsReport& b) { return b.degree ? std::optional(b.degree->lower) : std::nullopt; })
      .def_property_readonly("degree_upper",
                             [](const BoundsReport& b) { return b.degree ? std::optional(b.degree->upper) : std::nullopt; })
      .def_property_readonly("general_lower", [](const BoundsReport& b) { return b.general.lower; })
      .def_property_readonly("general_upper", [](const BoundsReport& b) { return b.general.upper; })
      .def_property_readonly("spectral_upper", [](const BoundsReport& b) { return b.spectral.bound; })
      .def_property_readonly("best_lower", &BoundsReport::best_lower)
      .def_property_readonly("best_upper", &BoundsReport::best_upper)
      .def("allocations", &BoundsReport::allocations);
  m.def(
      "bounds",
      [](const Graph& g, const InfluenceFactors& v) {
        const auto ew = weights_of(g, v);
        return compute_bounds(g, v, ew, b_matrix_summary(ew));
      },
      py::arg("graph"), py::arg("influence"));
  m.def(
      "clique_closed_form",
      [](std::size_t n, double alpha) {
        const auto c = clique_closed_form(n, alpha);
        return py::make_tuple(c.total, c.per_agent);
      },
      py::arg("n"), py::arg("alpha"), "Returns (total, per_agent).");
  m.def(
      "family_estimator",
      [](const std::string& family, std::size_t n, std::size_t d, double alpha, std::optional<double> tau) {
        return family_estimator(parse_family(family), n, d, alpha, tau);
      },
      py::arg("family"), py::arg("n"), py::arg("d"), py::arg("alpha"), py::arg("tau") = std::nullopt);
  m.def(
      "hypercube_identity",
      [](std::size_t d) {
        const auto h = hypercube_identity_check(d);
        py::dict out;
        out["lhs"] = rational_str(h.lhs);
        out["rhs_leading"] = rational_str(h.rhs_leading);
        out["rhs_corrected"] = rational_str(h.rhs_corrected);
        out["exact_match"] = h.exact_match;
        out["ratio_to_leading"] = h.ratio_to_leading;
        return out;
      },
      py::arg("d"), "Exact values as 'p/q' strings, suitable for fractions.Fraction.");

  py::class_<GuaranteeReport>(m, "GuaranteeReport")
      .def_readonly("eps", &GuaranteeReport::eps)
      .def_readonly("m_eps", &GuaranteeReport::m_eps)
      .def_property_readonly("counts",
                             [](const GuaranteeReport& r) {
                               std::vector<std::int64_t> out;
                               for (const auto& a : r.agents) out.push_back(a.m);
                               return out;
                             })
      .def_property_readonly("empirical",
                             [](const GuaranteeReport& r) {
                               std::vector<double> out;
                               for (const auto& a : r.agents) out.push_back(a.empirical);
                               return out;
                             })
      .def_property_readonly("theoretical",
                             [](const GuaranteeReport& r) {
                               std::vector<double> out;
                               for (const auto& a : r.agents) out.push_back(a.theoretical);
                               return out;
                             })
      .def_property_readonly("failures", &GuaranteeReport::failures)
      .def_property_readonly("all_passed", &GuaranteeReport::all_passed);
  m.def(
      "check_guarantee",
      [](const Graph& g, const InfluenceFactors& v, const Eigen::VectorXd& alloc, double eps, std::size_t trials,
         std::uint64_t seed, double noise_variance, const std::string& task, std::size_t dim) {
        EstimationConfig cfg;
        cfg.trials = trials;
        cfg.seed = seed;
        cfg.noise_variance = noise_variance;
        cfg.dim = dim;
        if (task == "mean") {
          cfg.task = EstimationTask::MeanEstimation;
        } else if (task == "regression") {
          cfg.task = EstimationTask::LinearRegression;
        } else {
          throw std::invalid_argument("task must be 'mean' or 'regression'");
        }
        py::gil_scoped_release release;
        return check_guarantee(g, v, alloc, eps, cfg);
      },
      py::arg("graph"), py::arg("influence"), py::arg("allocation"), py::arg("eps"), py::arg("trials") = 10000,
      py::arg("seed") = 0, py::arg("noise_variance") = 1.0, py::arg("task") = "mean", py::arg("dim") = 1);
}
