#pragma once

#include <vector>

#include "netalign/align_result.hpp"
#include "netalign/embedding.hpp"
#include "netalign/graph.hpp"

namespace netalign {

struct OTConfig {
  double epsilon = 0.01;      // entropic regularization weight
  double prox_gamma = 0.01;   // proximal (KL) step weight for outer loops
  int outer_iters = 50;
  int sinkhorn_iters = 500;
  double sinkhorn_tol = 1e-9;
  double outer_tol = 1e-9;    // relative objective-change stop for outer loops
  int hops = 2;               // neighborhood depth for intra-graph similarity
  double anchor_bonus = 1.0;  // cost discount applied at anchor pairs
  RWRConfig rwr;
};

struct TransportPlan {
  Eigen::MatrixXd plan;
  bool converged = false;
  int iterations = 0;
  double marginal_violation = 0.0;  // L_inf gap to the target marginals
};

// Entropic scaling for min <cost,T> + eps*<T,log T> s.t. T1 = mu, T'1 = nu.
// mu and nu must be positive and each sum to 1. Multiplicative updates for
// eps >= 0.01; below that the potentials move to log space with a stepped
// warm start so small eps stays finite.
TransportPlan sinkhorn(const Eigen::MatrixXd& cost, const Eigen::VectorXd& mu,
                       const Eigen::VectorXd& nu, double eps,
                       double tol = 1e-9, int max_iter = 500);

// 1 - cosine of anchor-rooted walk descriptors (rows L1-normalized), with
// anchor_bonus subtracted at anchor pairs, floored at 0.
Eigen::MatrixXd rwr_cost(const AlignmentTask& task, const OTConfig& cfg = {});

// Proximal-point refinement of the descriptor transport: each outer step
// solves an entropic problem at eps + prox_gamma with the KL pull toward
// the previous plan folded into the cost. Trace holds the regularized
// objective <C,T> + eps*<T,log T> per outer step.
AlignResult parrot_lite_align(const AlignmentTask& task,
                              const OTConfig& cfg = {});

// Averaged cosine similarity of stacked neighborhood aggregates (node
// attributes if present, else degree plus a constant) over 0..hops sweeps
// of the symmetric walk operator, plus the binary adjacency indicator,
// affinely rescaled to [0, 1]. Constant matrices are left unchanged.
Eigen::MatrixXd multihop_intra_sim(const Graph& g, int hops);

// Proximal entropic descent on the structure-matching objective
//   sum_{ijkl} (A1(i,k) - A2(j,l))^2 T_ij T_kl + <L, T>
// where A1/A2 are intra-graph similarities and L carries the anchor
// discounts. The start point gets a deterministic relative jitter so
// exactly symmetric instances still break toward a vertex. Trace holds
// the objective per outer step.
AlignResult gw_align(const AlignmentTask& task, const OTConfig& cfg = {});

}  // namespace netalign
