#pragma once

#include <vector>

#include "netalign/graph.hpp"

namespace netalign {

// Common result of every aligner. trace holds the per-iteration convergence
// quantity (L1 residual for fixed-point methods, objective value for the
// transport solvers).
struct AlignResult {
  AlignmentMatrix scores;
  bool converged = false;
  int iterations = 0;
  std::vector<double> trace;
};

}  // namespace netalign
