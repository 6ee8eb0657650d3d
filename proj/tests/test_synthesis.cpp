#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <set>
#include <utility>
#include <vector>

#include "doctest.h"
#include "netalign/synthesis.hpp"
#include "support/util.hpp"

using namespace netalign;
using namespace netalign::testsupport;

namespace {

std::set<std::pair<int, int>> edge_set(const Graph& g) {
  std::set<std::pair<int, int>> s;
  for (const Edge& e : g.edges) s.insert({e.u, e.v});
  return s;
}

}  // namespace

TEST_SUITE("synthesis") {

TEST_CASE("random graph generation is deterministic per seed") {
  Graph a = gen_er(200, 6.0, 7);
  Graph b = gen_er(200, 6.0, 7);
  Graph c = gen_er(200, 6.0, 8);
  CHECK(same_edges(a, b));
  CHECK_FALSE(same_edges(a, c));
}

TEST_CASE("random graph edge counts track the requested degree") {
  // |E| ~ Binomial(C(n,2), d/(n-1)), mean n*d/2 = 10000, sd just under 100
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Graph g = gen_er(2000, 10.0, seed);
    CHECK(std::abs(static_cast<double>(g.edges.size()) - 10000.0) < 400.0);
  }
}

TEST_CASE("random graph degenerate degrees") {
  CHECK(gen_er(100, 0.0, 0).edges.empty());
  CHECK(gen_er(50, 49.0, 3).edges.size() == 50 * 49 / 2);
  CHECK(gen_er(1, 0.0, 0).edges.empty());
  CHECK_THROWS_AS(gen_er(10, -0.5, 0), std::invalid_argument);
  CHECK_THROWS_AS(gen_er(10, 10.0, 0), std::invalid_argument);
}

TEST_CASE("permuted pair keeps counts and the correspondence") {
  Graph base = ring_graph(100);
  PairResult pr = make_permuted_pair(base, 0.10, 0.15, 42);
  CHECK(pr.g1.edges.size() == 110);  // 100 + round(0.10 * 100)
  CHECK(pr.g2.edges.size() == 85);   // 100 - round(0.15 * 100)
  CHECK(pr.truth.pairs.size() == 100);
  validate_truth(pr.truth, pr.g1.n, pr.g2.n);

  // every g2 edge maps back to a base edge under the inverse relabeling
  std::vector<int> inv(100, -1);
  for (const auto& [i, j] : pr.truth.pairs) inv[j] = i;
  std::set<std::pair<int, int>> base_edges = edge_set(base);
  for (const Edge& e : pr.g2.edges) {
    int u = inv[e.u], v = inv[e.v];
    if (u > v) std::swap(u, v);
    CHECK(base_edges.count({u, v}) == 1);
  }
}

TEST_CASE("permuted pair moves attributes with their nodes") {
  Graph base = ring_graph(20);
  base.node_attrs.resize(20, 2);
  for (int i = 0; i < 20; ++i) {
    base.node_attrs(i, 0) = i;
    base.node_attrs(i, 1) = 2.0 * i;
  }
  PairResult pr = make_permuted_pair(base, 0.0, 0.0, 5);
  CHECK(pr.g1.node_attrs == base.node_attrs);
  for (const auto& [i, j] : pr.truth.pairs) {
    CHECK(pr.g2.node_attrs(j, 0) == static_cast<double>(i));
    CHECK(pr.g2.node_attrs(j, 1) == 2.0 * i);
  }
}

TEST_CASE("permuted pair small-count rounding") {
  PairResult pr = make_permuted_pair(triangle_graph(), 0.0, 1.0 / 3.0, 1);
  CHECK(pr.g2.edges.size() == 2);
}

TEST_CASE("permuted pair rejects out-of-range fractions") {
  Graph base = ring_graph(10);
  CHECK_THROWS_AS(make_permuted_pair(base, 1.0, 0.0, 0), std::invalid_argument);
  CHECK_THROWS_AS(make_permuted_pair(base, 0.0, 1.0, 0), std::invalid_argument);
  CHECK_THROWS_AS(make_permuted_pair(base, -0.1, 0.0, 0), std::invalid_argument);
}

TEST_CASE("permuted pair is deterministic per seed") {
  Graph base = gen_er(60, 5.0, 11);
  PairResult a = make_permuted_pair(base, 0.1, 0.1, 3);
  PairResult b = make_permuted_pair(base, 0.1, 0.1, 3);
  PairResult c = make_permuted_pair(base, 0.1, 0.1, 4);
  CHECK(same_edges(a.g1, b.g1));
  CHECK(same_edges(a.g2, b.g2));
  CHECK(a.truth.pairs == b.truth.pairs);
  CHECK(a.truth.pairs != c.truth.pairs);
}

TEST_CASE("edge noise preserves or shifts the edge count by mode") {
  Graph g = ring_graph(100);
  std::set<std::pair<int, int>> before = edge_set(g);

  Graph split = inject_edge_noise(g, 0.2, 9, EdgeNoiseMode::split);
  CHECK(split.edges.size() == 100);  // 10 removed, 10 added
  std::set<std::pair<int, int>> after = edge_set(split);
  int kept = 0;
  for (const auto& e : after) kept += before.count(e);
  CHECK(kept == 90);

  Graph added = inject_edge_noise(g, 0.1, 9, EdgeNoiseMode::add_only);
  CHECK(added.edges.size() == 110);
  for (const auto& e : before) CHECK(edge_set(added).count(e) == 1);

  Graph removed = inject_edge_noise(g, 0.1, 9, EdgeNoiseMode::delete_only);
  CHECK(removed.edges.size() == 90);
  for (const auto& e : edge_set(removed)) CHECK(before.count(e) == 1);
}

TEST_CASE("edge noise extremes") {
  Graph g = triangle_graph();
  CHECK(inject_edge_noise(g, 1.0, 0, EdgeNoiseMode::delete_only).edges.empty());
  CHECK(same_edges(inject_edge_noise(g, 0.0, 0), g));
}

TEST_CASE("edge noise draws labels for inserted edges from the existing ones") {
  Graph g = ring_graph(30);
  g.edge_labels.assign(30, 2);
  for (int i = 0; i < 10; ++i) g.edge_labels[i] = 5;
  Graph noisy = inject_edge_noise(g, 0.5, 4, EdgeNoiseMode::add_only);
  CHECK(noisy.edge_labels.size() == noisy.edges.size());
  for (int l : noisy.edge_labels) CHECK((l == 2 || l == 5));
}

TEST_CASE("attribute noise flips binary columns of the selected rows") {
  Graph g = build_graph(2, {{0, 1, 1.0}});
  g.node_attrs.resize(2, 2);
  g.node_attrs << 1, 0, 0, 1;
  Graph noisy = inject_attr_noise(g, 1.0, 0);
  Eigen::MatrixXd want(2, 2);
  want << 0, 1, 1, 0;
  CHECK(noisy.node_attrs == want);
}

TEST_CASE("attribute noise adds unit gaussians to continuous columns") {
  const int n = 500;
  Graph g = ring_graph(n);
  g.node_attrs.resize(n, 1);
  for (int i = 0; i < n; ++i) g.node_attrs(i, 0) = 3.0 + 0.01 * i;
  Graph noisy = inject_attr_noise(g, 1.0, 12);

  // the column is min-max rescaled for everyone, then the selected rows
  // (all of them at p = 1) get additive standard normal noise
  double lo = g.node_attrs.col(0).minCoeff(), hi = g.node_attrs.col(0).maxCoeff();
  Eigen::VectorXd delta(n);
  for (int i = 0; i < n; ++i)
    delta(i) = noisy.node_attrs(i, 0) - (g.node_attrs(i, 0) - lo) / (hi - lo);
  double mean = delta.mean();
  double var = (delta.array() - mean).square().sum() / (n - 1);
  CHECK(std::abs(mean) < 0.15);
  CHECK(std::abs(var - 1.0) < 0.3);
}

TEST_CASE("attribute noise touches exactly the sampled rows") {
  const int n = 10;
  Graph g = ring_graph(n);
  g.node_attrs.resize(n, 1);
  for (int i = 0; i < n; ++i) g.node_attrs(i, 0) = static_cast<double>(i);
  Graph noisy = inject_attr_noise(g, 0.5, 3);
  double lo = 0.0, hi = n - 1.0;
  int changed = 0;
  for (int i = 0; i < n; ++i) {
    double base = (g.node_attrs(i, 0) - lo) / (hi - lo);
    if (noisy.node_attrs(i, 0) != base) ++changed;
  }
  CHECK(changed == 5);
}

TEST_CASE("supervision noise rewires train anchors off the truth") {
  AlignmentTask task;
  task.g1 = ring_graph(6);
  task.g2 = ring_graph(10);
  for (int i = 0; i < 6; ++i) task.truth.pairs.push_back({i, i});
  task.train_anchors = {{0, 0}, {1, 1}, {2, 2}};
  task.test_pairs = {{3, 3}, {4, 4}, {5, 5}};
  task.train_ratio = 0.5;

  AlignmentTask noisy = inject_supervision_noise(task, 1.0, 0);
  CHECK(noisy.truth.pairs == task.truth.pairs);
  CHECK(noisy.test_pairs == task.test_pairs);
  REQUIRE(noisy.train_anchors.size() == 3);
  for (std::size_t a = 0; a < 3; ++a) {
    CHECK(noisy.train_anchors[a].first == task.train_anchors[a].first);
    CHECK(noisy.train_anchors[a].second >= 6);  // outside the truth range
    CHECK(noisy.train_anchors[a].second < 10);
  }

  AlignmentTask one = inject_supervision_noise(task, 1.0 / 3.0, 0);
  int differing = 0;
  for (std::size_t a = 0; a < 3; ++a)
    if (one.train_anchors[a] != task.train_anchors[a]) ++differing;
  CHECK(differing == 1);

  AlignmentTask again = inject_supervision_noise(task, 1.0, 0);
  CHECK(again.train_anchors == noisy.train_anchors);
}

TEST_CASE("supervision noise needs spare nodes on the right") {
  AlignmentTask task;
  task.g1 = ring_graph(6);
  task.g2 = ring_graph(6);
  for (int i = 0; i < 6; ++i) task.truth.pairs.push_back({i, i});
  task.train_anchors = {{0, 0}};
  for (int i = 1; i < 6; ++i) task.test_pairs.push_back({i, i});
  CHECK_THROWS_AS(inject_supervision_noise(task, 1.0, 0), std::invalid_argument);
}

}  // TEST_SUITE
