#pragma once

#include <utility>
#include <vector>

#include "netalign/align_result.hpp"
#include "netalign/graph.hpp"

namespace netalign {

struct ConsistencyConfig {
  double alpha = 0.5;  // damping; must lie in [0,1)
  double tol = 1e-8;   // L1 stopping threshold on successive iterates
  int max_iter = 500;
  Normalization normalization = Normalization::row_stochastic;

  static ConsistencyConfig isorank_defaults() { return {}; }
  static ConsistencyConfig final_defaults() {
    ConsistencyConfig c;
    c.normalization = Normalization::symmetric;
    return c;
  }
};

// Anchor prior: 1 at each anchor, rescaled to total mass 1; uniform
// 1/(n1*n2) when no anchors are given.
AlignmentMatrix build_prior(int n1, int n2,
                            const std::vector<std::pair<int, int>>& anchors);

// Damped fixed point S <- alpha * A1n' S A2n + (1-alpha) * H, iterated until
// the L1 change drops below tol. Equivalent to the damped random-walk
// solution on the product graph, computed without materializing it.
AlignResult isorank_align(const AlignmentTask& task,
                          const ConsistencyConfig& cfg =
                              ConsistencyConfig::isorank_defaults());

// Same fixed point with attribute consistency: the propagation term and the
// prior blend are masked by the node-attribute similarity N (cosine, clipped
// to [0,1]); with edge labels, propagation runs per label slice. Plain
// graphs reduce exactly to isorank_align under the same config.
AlignResult final_align(const AlignmentTask& task,
                        const ConsistencyConfig& cfg =
                            ConsistencyConfig::final_defaults());

}  // namespace netalign
