#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "netalign/consistency.hpp"
#include "netalign/embedding.hpp"
#include "netalign/evaluation.hpp"
#include "netalign/graph.hpp"
#include "netalign/ot.hpp"
#include "netalign/registry.hpp"
#include "netalign/splits_io.hpp"
#include "netalign/synthesis.hpp"

namespace py = pybind11;
using namespace netalign;

namespace {

using Pairs = std::vector<std::pair<int, int>>;

Graph graph_from_parts(int n, const std::vector<std::tuple<int, int, double>>& edges,
                       std::optional<Eigen::MatrixXd> attrs,
                       std::optional<std::vector<int>> labels,
                       const std::string& name) {
  std::vector<Edge> es;
  es.reserve(edges.size());
  for (const auto& [u, v, w] : edges) es.push_back({u, v, w});
  return build_graph(n, std::move(es), attrs.value_or(Eigen::MatrixXd()),
                     labels.value_or(std::vector<int>()), name);
}

std::vector<std::tuple<int, int, double>> edge_tuples(const Graph& g) {
  std::vector<std::tuple<int, int, double>> out;
  out.reserve(g.edges.size());
  for (const Edge& e : g.edges) out.emplace_back(e.u, e.v, e.w);
  return out;
}

AlignmentTask task_from_parts(const Graph& g1, const Graph& g2,
                              const Pairs& truth_pairs, double train_ratio,
                              std::uint64_t seed) {
  GroundTruth truth{truth_pairs};
  validate_truth(truth, g1.n, g2.n);
  SplitRecord split = split_anchors(truth, train_ratio, seed);
  return make_task(g1, g2, truth, split);
}

std::optional<Direction> parse_direction(const std::optional<std::string>& s) {
  if (!s) return std::nullopt;
  if (*s == "l2r") return Direction::l2r;
  if (*s == "r2l") return Direction::r2l;
  throw std::invalid_argument("direction must be 'l2r' or 'r2l'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "pairwise network alignment: graph synthesis, aligners, metrics";

  py::class_<Graph>(m, "Graph")
      .def(py::init(&graph_from_parts), py::arg("n"), py::arg("edges"),
           py::arg("node_attrs") = std::nullopt,
           py::arg("edge_labels") = std::nullopt, py::arg("name") = "")
      .def_readonly("n", &Graph::n)
      .def_readonly("name", &Graph::name)
      .def_property_readonly("node_attrs",
                             [](const Graph& g) { return g.node_attrs; })
      .def_property_readonly("edge_labels",
                             [](const Graph& g) { return g.edge_labels; })
      .def_property_readonly("num_edges",
                             [](const Graph& g) { return g.edges.size(); })
      .def("edges", &edge_tuples)
      .def("degrees", &degree_vector)
      .def("__repr__", [](const Graph& g) {
        return "Graph(n=" + std::to_string(g.n) +
               ", edges=" + std::to_string(g.edges.size()) + ")";
      });

  py::class_<AlignmentTask>(m, "Task")
      .def(py::init(&task_from_parts), py::arg("g1"), py::arg("g2"),
           py::arg("truth_pairs"), py::arg("train_ratio") = 0.2,
           py::arg("seed") = 0)
      .def_readonly("g1", &AlignmentTask::g1)
      .def_readonly("g2", &AlignmentTask::g2)
      .def_property_readonly(
          "truth_pairs",
          [](const AlignmentTask& t) { return t.truth.pairs; })
      .def_readonly("train_anchors", &AlignmentTask::train_anchors)
      .def_readonly("test_pairs", &AlignmentTask::test_pairs)
      .def_readonly("train_ratio", &AlignmentTask::train_ratio)
      .def_readonly("seed", &AlignmentTask::seed);

  py::class_<AlignResult>(m, "AlignResult")
      .def_readonly("scores", &AlignResult::scores)
      .def_readonly("converged", &AlignResult::converged)
      .def_readonly("iterations", &AlignResult::iterations)
      .def_readonly("trace", &AlignResult::trace);

  m.def("er_graph", &gen_er, py::arg("n"), py::arg("avg_degree"),
        py::arg("seed") = 0,
        "Random graph with the given expected average degree.");

  m.def(
      "permuted_pair",
      [](const Graph& base, double insert_frac, double delete_frac,
         std::uint64_t seed) {
        PairResult pr = make_permuted_pair(base, insert_frac, delete_frac, seed);
        return py::make_tuple(pr.g1, pr.g2, pr.truth.pairs);
      },
      py::arg("base"), py::arg("insert_frac") = 0.0,
      py::arg("delete_frac") = 0.0, py::arg("seed") = 0,
      "Returns (g1, g2, truth_pairs) for a perturbed relabeled copy.");

  m.def("algorithms", &algorithm_names,
        "Names accepted by align(), in registry order.");
  m.def("default_params", &default_params, py::arg("algo"));

  m.def("align", &run_algo, py::arg("algo"), py::arg("task"),
        py::arg("params") = ParamMap{},
        "Runs one registered aligner; params values are strings.");

  m.def(
      "hits_at_k",
      [](const Eigen::MatrixXd& s, const Pairs& pairs, int k,
         std::optional<std::string> direction) {
        return hits_at_k(s, pairs, k, parse_direction(direction));
      },
      py::arg("scores"), py::arg("pairs"), py::arg("k"),
      py::arg("direction") = std::nullopt,
      "Fraction of pairs ranked within the top k; both directions averaged "
      "unless one is named.");

  m.def(
      "mrr",
      [](const Eigen::MatrixXd& s, const Pairs& pairs,
         std::optional<std::string> direction) {
        return mrr(s, pairs, parse_direction(direction));
      },
      py::arg("scores"), py::arg("pairs"), py::arg("direction") = std::nullopt);

  m.def("greedy_match", &greedy_match, py::arg("scores"),
        "Globally greedy one-to-one matching as (row, col) pairs.");

  m.def(
      "sinkhorn",
      [](const Eigen::MatrixXd& cost, const Eigen::VectorXd& mu,
         const Eigen::VectorXd& nu, double eps, double tol, int max_iter) {
        TransportPlan tp = sinkhorn(cost, mu, nu, eps, tol, max_iter);
        return py::make_tuple(tp.plan, tp.converged, tp.marginal_violation);
      },
      py::arg("cost"), py::arg("mu"), py::arg("nu"), py::arg("eps"),
      py::arg("tol") = 1e-9, py::arg("max_iter") = 500,
      "Entropic transport plan; returns (plan, converged, violation).");
}
