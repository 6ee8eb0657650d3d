#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "netalign/graph.hpp"

namespace netalign {

// Erdos-Renyi G(n, p) with p = avg_degree / (n - 1), unit weights.
// Deterministic per (n, avg_degree, seed). Requires 0 <= avg_degree < n.
Graph gen_er(int n, double avg_degree, std::uint64_t seed);

struct PairResult {
  Graph g1, g2;
  GroundTruth truth;  // (i, pi(i)) for every base node i
};

// Builds an alignment pair from one base graph: g1 = base plus
// round(insert_frac * |E|) sampled absent edges; g2 = base minus
// round(delete_frac * |E|) sampled existing edges, relabeled by a random
// permutation. Attributes and labels follow their nodes/edges.
PairResult make_permuted_pair(const Graph& base, double insert_frac,
                              double delete_frac, std::uint64_t seed);

enum class EdgeNoiseMode { split, add_only, delete_only };

// Perturbs topology only. split: round(p*|E|/2) additions and deletions each;
// add_only / delete_only: round(p*|E|) of one kind.
Graph inject_edge_noise(const Graph& g, double p, std::uint64_t seed,
                        EdgeNoiseMode mode = EdgeNoiseMode::split);

// Perturbs attributes of round(p*n) sampled nodes: binary columns (values in
// {0,1}, or as overridden) flip, continuous columns are min-max normalized
// column-wise and the sampled rows receive additive N(0,1) noise.
Graph inject_attr_noise(const Graph& g, double p, std::uint64_t seed,
                        const std::optional<std::vector<bool>>& binary_cols =
                            std::nullopt);

// Corrupts round(p*|train|) train anchors: the right endpoint is replaced by
// a node of g2 that appears in no truth pair. Corrupted anchors stay in the
// train set; truth and test pairs are untouched.
AlignmentTask inject_supervision_noise(const AlignmentTask& task, double p,
                                       std::uint64_t seed);

}  // namespace netalign
