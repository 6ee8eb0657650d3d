#include "netalign/graph.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

namespace netalign {

Graph build_graph(int n, std::vector<Edge> edges, Eigen::MatrixXd node_attrs,
                  std::vector<int> edge_labels, std::string name) {
  if (n < 0) throw std::invalid_argument("build_graph: negative node count");
  for (auto& e : edges) {
    if (e.u < 0 || e.u >= n || e.v < 0 || e.v >= n)
      throw std::invalid_argument("build_graph: edge endpoint out of range");
    if (e.u == e.v) throw std::invalid_argument("build_graph: self-loop");
    if (!(e.w >= 0.0))
      throw std::invalid_argument("build_graph: negative edge weight");
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::set<std::pair<int, int>> seen;
  for (const auto& e : edges)
    if (!seen.emplace(e.u, e.v).second)
      throw std::invalid_argument("build_graph: duplicate edge");
  if (node_attrs.size() > 0 && node_attrs.rows() != n)
    throw std::invalid_argument("build_graph: node_attrs row count != n");
  if (!edge_labels.empty() && edge_labels.size() != edges.size())
    throw std::invalid_argument("build_graph: edge_labels size != edge count");

  Graph g;
  g.n = n;
  g.edges = std::move(edges);
  g.node_attrs = std::move(node_attrs);
  g.edge_labels = std::move(edge_labels);
  g.name = std::move(name);
  return g;
}

Eigen::VectorXd degree_vector(const Graph& g) {
  Eigen::VectorXd d = Eigen::VectorXd::Zero(g.n);
  for (const auto& e : g.edges) {
    d[e.u] += e.w;
    d[e.v] += e.w;
  }
  return d;
}

Eigen::SparseMatrix<double> adjacency(const Graph& g) {
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(2 * g.edges.size());
  for (const auto& e : g.edges) {
    t.emplace_back(e.u, e.v, e.w);
    t.emplace_back(e.v, e.u, e.w);
  }
  Eigen::SparseMatrix<double> a(g.n, g.n);
  a.setFromTriplets(t.begin(), t.end());
  return a;
}

Eigen::SparseMatrix<double> normalize_adjacency(const Graph& g,
                                                Normalization mode) {
  Eigen::VectorXd d = degree_vector(g);
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(2 * g.edges.size());
  auto push = [&](int i, int j, double w) {
    if (w == 0.0) return;
    double s;
    if (mode == Normalization::row_stochastic) {
      s = d[i] > 0.0 ? w / d[i] : 0.0;
    } else {
      s = (d[i] > 0.0 && d[j] > 0.0) ? w / std::sqrt(d[i] * d[j]) : 0.0;
    }
    if (s != 0.0) t.emplace_back(i, j, s);
  };
  for (const auto& e : g.edges) {
    push(e.u, e.v, e.w);
    push(e.v, e.u, e.w);
  }
  Eigen::SparseMatrix<double> a(g.n, g.n);
  a.setFromTriplets(t.begin(), t.end());
  return a;
}

void validate_truth(const GroundTruth& truth, int n1, int n2) {
  std::set<int> left, right;
  for (auto [i, j] : truth.pairs) {
    if (i < 0 || i >= n1 || j < 0 || j >= n2)
      throw std::invalid_argument("ground truth pair out of range");
    if (!left.insert(i).second || !right.insert(j).second)
      throw std::invalid_argument("ground truth is not one-to-one");
  }
}

}  // namespace netalign
