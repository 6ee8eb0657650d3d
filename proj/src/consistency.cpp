#include "netalign/consistency.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>
#include <vector>

namespace netalign {

namespace {

using SpMat = Eigen::SparseMatrix<double>;

// Anchor prior kept sparse so the iteration never needs a third dense
// buffer at benchmark sizes.
struct Prior {
  double uniform = 0.0;  // > 0 only for the anchorless case
  std::vector<std::vector<std::pair<int, double>>> by_col;
};

Prior make_prior(int n1, int n2,
                 const std::vector<std::pair<int, int>>& anchors) {
  if (n1 < 1 || n2 < 1)
    throw std::invalid_argument("prior: empty score matrix");
  Prior p;
  p.by_col.resize(n2);
  std::set<std::pair<int, int>> distinct;
  for (auto [i, j] : anchors) {
    if (i < 0 || i >= n1 || j < 0 || j >= n2)
      throw std::invalid_argument("prior: anchor out of range");
    distinct.emplace(i, j);
  }
  if (distinct.empty()) {
    p.uniform = 1.0 / (static_cast<double>(n1) * n2);
  } else {
    const double v = 1.0 / static_cast<double>(distinct.size());
    for (auto [i, j] : distinct) p.by_col[j].emplace_back(i, v);
  }
  return p;
}

Eigen::MatrixXd dense_prior(const Prior& p, int n1, int n2) {
  Eigen::MatrixXd h = Eigen::MatrixXd::Constant(n1, n2, p.uniform);
  for (int j = 0; j < n2; ++j)
    for (auto [i, v] : p.by_col[j]) h(i, j) = v;
  return h;
}

void check_cfg(const ConsistencyConfig& cfg) {
  if (!(cfg.alpha >= 0.0 && cfg.alpha < 1.0))
    throw std::invalid_argument("consistency: alpha must lie in [0,1)");
  if (!(cfg.tol > 0.0)) throw std::invalid_argument("consistency: tol <= 0");
  if (cfg.max_iter < 1)
    throw std::invalid_argument("consistency: max_iter < 1");
}

// Streaming variant for one unmasked slice: two n1 x n2 buffers total, the
// output column overwrites S after its residual contribution is taken.
AlignResult iterate_single(const SpMat& a1t, const SpMat& a2n,
                           const Prior& prior, int n1, int n2,
                           const ConsistencyConfig& cfg) {
  AlignResult res;
  Eigen::MatrixXd s = dense_prior(prior, n1, n2);
  Eigen::MatrixXd t(n1, n2);
  Eigen::VectorXd col(n1);
  const double keep = 1.0 - cfg.alpha;
  for (int iter = 1; iter <= cfg.max_iter; ++iter) {
    t.noalias() = a1t * s;
    double resid = 0.0;
    for (int j = 0; j < n2; ++j) {
      col.setConstant(keep * prior.uniform);
      for (auto [i, v] : prior.by_col[j]) col[i] = keep * v;
      for (SpMat::InnerIterator it(a2n, j); it; ++it)
        col.noalias() += (cfg.alpha * it.value()) * t.col(it.row());
      resid += (col - s.col(j)).cwiseAbs().sum();
      s.col(j) = col;
    }
    res.trace.push_back(resid);
    res.iterations = iter;
    if (resid < cfg.tol) {
      res.converged = true;
      break;
    }
  }
  res.scores = std::move(s);
  return res;
}

// General variant: optional similarity mask and per-label slices.
AlignResult iterate_masked(const std::vector<std::pair<SpMat, SpMat>>& slices,
                           const Eigen::MatrixXd* mask, const Prior& prior,
                           int n1, int n2, const ConsistencyConfig& cfg) {
  AlignResult res;
  Eigen::MatrixXd s = dense_prior(prior, n1, n2);
  const Eigen::MatrixXd h = dense_prior(prior, n1, n2);
  Eigen::MatrixXd p(n1, n2), t(n1, n2), m(n1, n2);
  for (int iter = 1; iter <= cfg.max_iter; ++iter) {
    const Eigen::MatrixXd* input = &s;
    if (mask) {
      p = s.cwiseProduct(*mask);
      input = &p;
    }
    m.setZero();
    for (const auto& [a1t, a2n] : slices) {
      t.noalias() = a1t * (*input);
      m.noalias() += t * a2n;
    }
    if (mask) m = m.cwiseProduct(*mask);
    m = cfg.alpha * m + (1.0 - cfg.alpha) * h;
    const double resid = (m - s).cwiseAbs().sum();
    s.swap(m);
    res.trace.push_back(resid);
    res.iterations = iter;
    if (resid < cfg.tol) {
      res.converged = true;
      break;
    }
  }
  res.scores = std::move(s);
  return res;
}

// Normalized adjacency restricted to edges with one label; the normalizer
// always comes from the full graph's degrees, so the slices sum to the
// unmasked operator and the damped iteration stays contractive.
SpMat masked_normalized(const Graph& g, const Eigen::VectorXd& deg, int label,
                        bool use_labels, Normalization mode) {
  std::vector<Eigen::Triplet<double>> trip;
  for (std::size_t k = 0; k < g.edges.size(); ++k) {
    if (use_labels && g.edge_labels[k] != label) continue;
    const Edge& e = g.edges[k];
    if (e.w == 0.0) continue;
    if (mode == Normalization::row_stochastic) {
      if (deg[e.u] > 0.0) trip.emplace_back(e.u, e.v, e.w / deg[e.u]);
      if (deg[e.v] > 0.0) trip.emplace_back(e.v, e.u, e.w / deg[e.v]);
    } else {
      if (deg[e.u] > 0.0 && deg[e.v] > 0.0) {
        const double v = e.w / std::sqrt(deg[e.u] * deg[e.v]);
        trip.emplace_back(e.u, e.v, v);
        trip.emplace_back(e.v, e.u, v);
      }
    }
  }
  SpMat a(g.n, g.n);
  a.setFromTriplets(trip.begin(), trip.end());
  return a;
}

}  // namespace

AlignmentMatrix build_prior(int n1, int n2,
                            const std::vector<std::pair<int, int>>& anchors) {
  return dense_prior(make_prior(n1, n2, anchors), n1, n2);
}

AlignResult isorank_align(const AlignmentTask& task,
                          const ConsistencyConfig& cfg) {
  check_cfg(cfg);
  const int n1 = task.g1.n, n2 = task.g2.n;
  Prior prior = make_prior(n1, n2, task.train_anchors);
  SpMat a1t = normalize_adjacency(task.g1, cfg.normalization).transpose();
  SpMat a2n = normalize_adjacency(task.g2, cfg.normalization);
  return iterate_single(a1t, a2n, prior, n1, n2, cfg);
}

AlignResult final_align(const AlignmentTask& task,
                        const ConsistencyConfig& cfg) {
  check_cfg(cfg);
  const Graph& g1 = task.g1;
  const Graph& g2 = task.g2;
  const int n1 = g1.n, n2 = g2.n;
  Prior prior = make_prior(n1, n2, task.train_anchors);

  Eigen::MatrixXd mask;
  bool have_mask = false;
  if (g1.has_node_attrs() && g2.has_node_attrs()) {
    if (g1.node_attrs.cols() != g2.node_attrs.cols())
      throw std::invalid_argument(
          "final_align: attribute dimension mismatch between graphs");
    Eigen::MatrixXd a1 = g1.node_attrs, a2 = g2.node_attrs;
    for (int i = 0; i < a1.rows(); ++i) {
      double n = a1.row(i).norm();
      if (n > 0.0) a1.row(i) /= n;
    }
    for (int i = 0; i < a2.rows(); ++i) {
      double n = a2.row(i).norm();
      if (n > 0.0) a2.row(i) /= n;
    }
    mask = (a1 * a2.transpose()).cwiseMax(0.0).cwiseMin(1.0);
    have_mask = true;
  } else if (g1.has_node_attrs() != g2.has_node_attrs()) {
    throw std::invalid_argument(
        "final_align: node attributes present on only one graph");
  }

  const bool labeled = g1.has_edge_labels() && g2.has_edge_labels();
  if (g1.has_edge_labels() != g2.has_edge_labels())
    throw std::invalid_argument(
        "final_align: edge labels present on only one graph");

  const Eigen::VectorXd d1 = degree_vector(g1), d2 = degree_vector(g2);
  std::vector<std::pair<SpMat, SpMat>> slices;
  if (labeled) {
    std::set<int> labels(g1.edge_labels.begin(), g1.edge_labels.end());
    labels.insert(g2.edge_labels.begin(), g2.edge_labels.end());
    for (int l : labels) {
      SpMat s1 = masked_normalized(g1, d1, l, true, cfg.normalization);
      SpMat s2 = masked_normalized(g2, d2, l, true, cfg.normalization);
      if (s1.nonZeros() == 0 || s2.nonZeros() == 0) continue;
      slices.emplace_back(SpMat(s1.transpose()), std::move(s2));
    }
  } else {
    SpMat s1 = masked_normalized(g1, d1, 0, false, cfg.normalization);
    SpMat s2 = masked_normalized(g2, d2, 0, false, cfg.normalization);
    slices.emplace_back(SpMat(s1.transpose()), std::move(s2));
  }

  if (!have_mask && slices.size() == 1)
    return iterate_single(slices[0].first, slices[0].second, prior, n1, n2,
                          cfg);
  return iterate_masked(slices, have_mask ? &mask : nullptr, prior, n1, n2,
                        cfg);
}

}  // namespace netalign
