#include "netalign/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include <Eigen/Eigenvalues>

#include "netalign/rng.hpp"

namespace netalign {
namespace {

int log_bin_count(double max_degree) {
  if (max_degree < 1.0) return 1;
  return static_cast<int>(std::floor(std::log2(max_degree))) + 1;
}

int log_bin_index(double degree, int num_bins) {
  // degree > 0 for any node reachable through an edge
  int idx = degree < 1.0 ? 0 : static_cast<int>(std::floor(std::log2(degree)));
  return std::min(std::max(idx, 0), num_bins - 1);
}

std::vector<std::vector<int>> neighbor_lists(const Graph& g) {
  std::vector<std::vector<int>> adj(g.n);
  for (const Edge& e : g.edges) {
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  return adj;
}

void check_xnetmf_config(const XNetMFConfig& cfg) {
  if (cfg.num_layers < 1) throw std::invalid_argument("num_layers must be >= 1");
  if (cfg.discount <= 0.0) throw std::invalid_argument("discount must be > 0");
  if (cfg.attr_weight < 0.0) throw std::invalid_argument("attr_weight must be >= 0");
}

Eigen::MatrixXd l2_normalize_rows(Eigen::MatrixXd m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    double norm = m.row(i).norm();
    if (norm > 0.0) m.row(i) /= norm;
  }
  return m;
}

}  // namespace

Eigen::MatrixXd structural_features(const Graph& g, const XNetMFConfig& cfg,
                                    int num_bins) {
  check_xnetmf_config(cfg);
  if (num_bins < 1) throw std::invalid_argument("num_bins must be >= 1");
  const int K = cfg.num_layers;
  const int B = num_bins;
  Eigen::VectorXd deg = degree_vector(g);
  std::vector<std::vector<int>> adj = neighbor_lists(g);

  Eigen::MatrixXd feats = Eigen::MatrixXd::Zero(g.n, static_cast<Eigen::Index>(K) * B);
  std::vector<int> hop_weight_bin(g.n, -1);  // visit stamp per BFS source
  std::vector<int> frontier, next;
  for (int src = 0; src < g.n; ++src) {
    std::fill(hop_weight_bin.begin(), hop_weight_bin.end(), -1);
    hop_weight_bin[src] = 0;
    frontier.assign(1, src);
    double weight = 1.0;
    for (int k = 1; k <= K && !frontier.empty(); ++k) {
      next.clear();
      for (int u : frontier) {
        for (int v : adj[u]) {
          if (hop_weight_bin[v] != -1) continue;
          hop_weight_bin[v] = k;
          next.push_back(v);
          feats(src, static_cast<Eigen::Index>(k - 1) * B + log_bin_index(deg[v], B)) += weight;
        }
      }
      frontier.swap(next);
      weight *= cfg.discount;
    }
  }
  return feats;
}

Eigen::MatrixXd structural_features(const Graph& g, const XNetMFConfig& cfg) {
  double max_deg = g.n > 0 ? degree_vector(g).maxCoeff() : 0.0;
  return structural_features(g, cfg, log_bin_count(max_deg));
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> xnetmf_embed(
    const Graph& g1, const Graph& g2, const XNetMFConfig& cfg) {
  check_xnetmf_config(cfg);
  if (g1.has_node_attrs() != g2.has_node_attrs())
    throw std::invalid_argument("node attributes must be present on both graphs or neither");
  bool use_attrs = g1.has_node_attrs();
  if (use_attrs && g1.node_attrs.cols() != g2.node_attrs.cols())
    throw std::invalid_argument("node attribute dimensions differ");

  const int n1 = g1.n;
  const int n = n1 + g2.n;
  if (n < 1) throw std::invalid_argument("empty node union");

  double max_deg = 0.0;
  if (g1.n > 0) max_deg = std::max(max_deg, degree_vector(g1).maxCoeff());
  if (g2.n > 0) max_deg = std::max(max_deg, degree_vector(g2).maxCoeff());
  const int B = log_bin_count(max_deg);

  Eigen::MatrixXd f1 = structural_features(g1, cfg, B);
  Eigen::MatrixXd f2 = structural_features(g2, cfg, B);
  Eigen::MatrixXd feats(n, f1.cols());
  feats.topRows(n1) = f1;
  feats.bottomRows(g2.n) = f2;

  Eigen::MatrixXd attrs;
  if (use_attrs) {
    attrs.resize(n, g1.node_attrs.cols());
    attrs.topRows(n1) = g1.node_attrs;
    attrs.bottomRows(g2.n) = g2.node_attrs;
  }

  int p;
  if (cfg.num_landmarks > 0) {
    p = std::min(cfg.num_landmarks, n);
  } else {
    int lg = n >= 2 ? static_cast<int>(std::floor(std::log2(static_cast<double>(n)))) : 0;
    p = std::min(10 * lg, n);
  }
  p = std::max(p, 1);

  Rng rng(cfg.seed, "xnetmf_landmarks");
  std::vector<int> landmarks = sample_without_replacement(n, p, rng);
  std::sort(landmarks.begin(), landmarks.end());

  Eigen::MatrixXd C(n, p);
  for (int a = 0; a < p; ++a) {
    int l = landmarks[a];
    for (int u = 0; u < n; ++u) {
      double d2 = (feats.row(u) - feats.row(l)).squaredNorm();
      if (use_attrs)
        d2 += cfg.attr_weight * (attrs.row(u) - attrs.row(l)).squaredNorm();
      C(u, a) = std::exp(-d2);
    }
  }

  Eigen::MatrixXd W(p, p);
  for (int a = 0; a < p; ++a) W.row(a) = C.row(landmarks[a]);
  W = 0.5 * (W + W.transpose());  // symmetrize roundoff

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(W);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("landmark eigendecomposition failed");
  const Eigen::VectorXd& evals = es.eigenvalues();  // ascending
  double lam_max = evals(p - 1);
  double cutoff = std::max(lam_max, 0.0) * 1e-10;

  std::vector<int> keep;
  for (int i = 0; i < p; ++i)
    if (evals(i) > cutoff && evals(i) > 0.0) keep.push_back(i);
  if (keep.empty())
    throw std::runtime_error("landmark similarity block has no positive spectrum");

  Eigen::MatrixXd factor(p, static_cast<Eigen::Index>(keep.size()));
  for (std::size_t j = 0; j < keep.size(); ++j)
    factor.col(static_cast<Eigen::Index>(j)) =
        es.eigenvectors().col(keep[j]) / std::sqrt(evals(keep[j]));

  Eigen::MatrixXd emb = l2_normalize_rows(C * factor);
  return {emb.topRows(n1), emb.bottomRows(g2.n)};
}

AlignResult regal_align(const AlignmentTask& task, const XNetMFConfig& cfg) {
  auto [emb1, emb2] = xnetmf_embed(task.g1, task.g2, cfg);
  Eigen::VectorXd s1 = emb1.rowwise().squaredNorm();
  Eigen::VectorXd s2 = emb2.rowwise().squaredNorm();
  AlignmentMatrix dist2 = (-2.0 * emb1 * emb2.transpose()).colwise() + s1;
  dist2.rowwise() += s2.transpose();
  AlignResult res;
  res.scores = -dist2.cwiseMax(0.0).cwiseSqrt();
  res.converged = true;
  res.iterations = 1;
  return res;
}

namespace {

// Row-stochastic walk structure in adjacency-list form; avoids a dense
// transition matrix so anchor batches stay O(edges) per sweep.
struct WalkOperator {
  std::vector<std::vector<std::pair<int, double>>> out;  // (target, prob)
  std::vector<char> dangling;

  explicit WalkOperator(const Graph& g) : out(g.n), dangling(g.n, 0) {
    Eigen::VectorXd deg = degree_vector(g);
    for (const Edge& e : g.edges) {
      out[e.u].emplace_back(e.v, e.w / deg[e.u]);
      out[e.v].emplace_back(e.u, e.w / deg[e.v]);
    }
    for (int i = 0; i < g.n; ++i)
      if (deg[i] <= 0.0) dangling[i] = 1;
  }
};

Eigen::VectorXd rwr_power(const WalkOperator& walk, int source,
                          const RWRConfig& cfg, bool* converged,
                          int* iterations) {
  const int n = static_cast<int>(walk.out.size());
  Eigen::VectorXd r = Eigen::VectorXd::Zero(n);
  r[source] = 1.0;
  Eigen::VectorXd next(n);
  const double c = cfg.restart_prob;
  bool ok = false;
  int it = 0;
  for (; it < cfg.max_iter; ++it) {
    next.setZero();
    double leaked = 0.0;
    for (int i = 0; i < n; ++i) {
      double ri = r[i];
      if (ri == 0.0) continue;
      if (walk.dangling[i]) {
        leaked += ri;
        continue;
      }
      for (const auto& [j, pij] : walk.out[i]) next[j] += ri * pij;
    }
    next *= 1.0 - c;
    next[source] += c + (1.0 - c) * leaked;  // restarts plus redirected mass
    double change = (next - r).lpNorm<1>();
    r.swap(next);
    if (change < cfg.tol) {
      ok = true;
      ++it;
      break;
    }
  }
  if (converged) *converged = ok;
  if (iterations) *iterations = it;
  return r;
}

void check_rwr_config(const RWRConfig& cfg) {
  if (!(cfg.restart_prob > 0.0 && cfg.restart_prob <= 1.0))
    throw std::invalid_argument("restart_prob must lie in (0, 1]");
  if (cfg.tol <= 0.0) throw std::invalid_argument("tol must be > 0");
  if (cfg.max_iter < 1) throw std::invalid_argument("max_iter must be >= 1");
}

}  // namespace

Eigen::VectorXd rwr_scores(const Graph& g, int source, const RWRConfig& cfg) {
  check_rwr_config(cfg);
  if (source < 0 || source >= g.n)
    throw std::invalid_argument("source node out of range");
  WalkOperator walk(g);
  return rwr_power(walk, source, cfg, nullptr, nullptr);
}

Eigen::MatrixXd anchor_rwr_matrix(const Graph& g,
                                  const std::vector<int>& sources,
                                  const RWRConfig& cfg, bool* converged,
                                  int* iterations) {
  check_rwr_config(cfg);
  WalkOperator walk(g);
  Eigen::MatrixXd E(g.n, static_cast<Eigen::Index>(sources.size()));
  bool all_ok = true;
  int max_it = 0;
  for (std::size_t a = 0; a < sources.size(); ++a) {
    if (sources[a] < 0 || sources[a] >= g.n)
      throw std::invalid_argument("source node out of range");
    bool ok = false;
    int it = 0;
    E.col(static_cast<Eigen::Index>(a)) = rwr_power(walk, sources[a], cfg, &ok, &it);
    all_ok = all_ok && ok;
    max_it = std::max(max_it, it);
  }
  if (converged) *converged = all_ok;
  if (iterations) *iterations = max_it;
  return E;
}

AlignmentMatrix cosine_rows(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.cols() != b.cols())
    throw std::invalid_argument("row dimension mismatch");
  return l2_normalize_rows(a) * l2_normalize_rows(b).transpose();
}

AlignResult rwr_align(const AlignmentTask& task, const RWRConfig& cfg) {
  if (task.train_anchors.empty())
    throw std::invalid_argument("anchor-descriptor alignment needs at least one anchor");
  std::vector<int> src1, src2;
  src1.reserve(task.train_anchors.size());
  src2.reserve(task.train_anchors.size());
  for (const auto& [x, y] : task.train_anchors) {
    src1.push_back(x);
    src2.push_back(y);
  }
  bool ok1 = false, ok2 = false;
  int it1 = 0, it2 = 0;
  Eigen::MatrixXd e1 = anchor_rwr_matrix(task.g1, src1, cfg, &ok1, &it1);
  Eigen::MatrixXd e2 = anchor_rwr_matrix(task.g2, src2, cfg, &ok2, &it2);
  for (Eigen::Index i = 0; i < e1.rows(); ++i) {
    double s = e1.row(i).sum();
    if (s > 0.0) e1.row(i) /= s;
  }
  for (Eigen::Index i = 0; i < e2.rows(); ++i) {
    double s = e2.row(i).sum();
    if (s > 0.0) e2.row(i) /= s;
  }
  AlignResult res;
  res.scores = cosine_rows(e1, e2);
  res.converged = ok1 && ok2;
  res.iterations = std::max(it1, it2);
  return res;
}

}  // namespace netalign
