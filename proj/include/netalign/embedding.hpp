#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "netalign/align_result.hpp"
#include "netalign/graph.hpp"

namespace netalign {

struct XNetMFConfig {
  int num_layers = 2;      // hop depth K
  double discount = 0.1;   // per-hop weight discount^(k-1)
  int num_landmarks = 0;   // 0: min(10*floor(log2(n1+n2)), n1+n2)
  double attr_weight = 1.0;
  std::uint64_t seed = 0;
};

// Per-hop histograms of neighbor degrees in logarithmic bins, hop k scaled
// by discount^(k-1) and blocks concatenated: n x (K*B) with
// B = floor(log2(max_degree)) + 1 bins (from this graph's own max degree
// unless num_bins overrides it, as the joint embedding does).
Eigen::MatrixXd structural_features(const Graph& g, const XNetMFConfig& cfg);
Eigen::MatrixXd structural_features(const Graph& g, const XNetMFConfig& cfg,
                                    int num_bins);

// Joint landmark factorization over the union node set: similarity
// exp(-||f_u - f_v||^2 - attr_weight * ||attr_u - attr_v||^2) against p
// sampled landmarks, Nystrom-factorized through the landmark block's
// positive spectrum, rows length-normalized. Returns (emb1, emb2).
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> xnetmf_embed(
    const Graph& g1, const Graph& g2, const XNetMFConfig& cfg);

// S(u, v) = -||emb1[u] - emb2[v]||_2. Anchors are not used.
AlignResult regal_align(const AlignmentTask& task,
                        const XNetMFConfig& cfg = {});

struct RWRConfig {
  double restart_prob = 0.15;
  double tol = 1e-9;
  int max_iter = 500;
};

// Restarting random walk r = c*e_src + (1-c)*P'r on the row-stochastic
// walk matrix; rows of isolated nodes restart to the source, so the output
// always sums to 1. Power iteration until the L1 change drops below tol.
Eigen::VectorXd rwr_scores(const Graph& g, int source,
                           const RWRConfig& cfg = {});

// Column a holds rwr_scores(g, sources[a]).
Eigen::MatrixXd anchor_rwr_matrix(const Graph& g,
                                  const std::vector<int>& sources,
                                  const RWRConfig& cfg,
                                  bool* converged = nullptr,
                                  int* iterations = nullptr);

// Cosine similarity of a's rows against b's rows; zero rows score 0.
AlignmentMatrix cosine_rows(const Eigen::MatrixXd& a,
                            const Eigen::MatrixXd& b);

// Anchor-descriptor alignment: E1/E2 from anchor-rooted walks, rows
// L1-normalized, S = cosine of descriptor rows.
AlignResult rwr_align(const AlignmentTask& task, const RWRConfig& cfg = {});

}  // namespace netalign
