#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace netalign {

// Undirected weighted edge, stored canonically with u < v.
struct Edge {
  int u = 0;
  int v = 0;
  double w = 1.0;
};

// Simple undirected graph: no self-loops, no parallel edges, weights >= 0.
// Node ids are dense 0-based ints. node_attrs is n x d (d = 0 when absent);
// edge_labels, when present, holds one categorical label per edge in edge
// order.
struct Graph {
  int n = 0;
  std::vector<Edge> edges;
  Eigen::MatrixXd node_attrs;
  std::vector<int> edge_labels;
  std::string name;

  bool has_node_attrs() const { return node_attrs.cols() > 0; }
  bool has_edge_labels() const { return !edge_labels.empty(); }
};

// Validates and canonicalizes the edge list (throws std::invalid_argument on
// out-of-range endpoints, self-loops, duplicates, negative weights, or
// attribute/label shape mismatches).
Graph build_graph(int n, std::vector<Edge> edges,
                  Eigen::MatrixXd node_attrs = {},
                  std::vector<int> edge_labels = {}, std::string name = {});

// Weighted degree of every node.
Eigen::VectorXd degree_vector(const Graph& g);

// Symmetric weighted adjacency as a sparse matrix.
Eigen::SparseMatrix<double> adjacency(const Graph& g);

enum class Normalization { row_stochastic, symmetric };

// D^-1 A or D^-1/2 A D^-1/2; rows/columns of isolated nodes stay zero.
Eigen::SparseMatrix<double> normalize_adjacency(const Graph& g,
                                                Normalization mode);

// One-to-one correspondence between node subsets of two graphs.
struct GroundTruth {
  std::vector<std::pair<int, int>> pairs;
};

// Throws if any pair is out of range or either side repeats a node.
void validate_truth(const GroundTruth& truth, int n1, int n2);

// Scores for every node pair, S(i, j) = affinity of g1:i with g2:j.
using AlignmentMatrix = Eigen::MatrixXd;

// A pairwise alignment problem: two graphs, the full correspondence, and a
// train/test division of it. For tasks produced by splitting,
// train_anchors + test_pairs partition truth.pairs; supervision corruption
// deliberately breaks that (see inject_supervision_noise).
struct AlignmentTask {
  Graph g1, g2;
  GroundTruth truth;
  std::vector<std::pair<int, int>> train_anchors;
  std::vector<std::pair<int, int>> test_pairs;
  double train_ratio = 0.0;
  std::uint64_t seed = 0;
};

}  // namespace netalign
