#include "netalign/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <unordered_set>
#include <utility>

#include "netalign/rng.hpp"

namespace netalign {

namespace {

std::int64_t pair_count(int n) {
  return static_cast<std::int64_t>(n) * (n - 1) / 2;
}

std::int64_t pair_key(int n, int u, int v) {
  return static_cast<std::int64_t>(u) * n + v;  // assumes u < v
}

// k distinct absent pairs of g, uniform, deterministic in rng's stream.
std::vector<std::pair<int, int>> sample_absent_pairs(const Graph& g,
                                                     std::int64_t k,
                                                     Rng& rng) {
  const int n = g.n;
  const std::int64_t absent =
      pair_count(n) - static_cast<std::int64_t>(g.edges.size());
  if (k > absent)
    throw std::invalid_argument(
        "edge insertion: not enough absent pairs available");
  std::vector<std::pair<int, int>> out;
  if (k == 0) return out;

  std::unordered_set<std::int64_t> present;
  present.reserve(2 * g.edges.size());
  for (const auto& e : g.edges) present.insert(pair_key(n, e.u, e.v));

  if (pair_count(n) <= 2'000'000) {
    // Dense regime: enumerate the complement, then partial shuffle.
    std::vector<std::pair<int, int>> pool;
    pool.reserve(static_cast<std::size_t>(absent));
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v)
        if (!present.count(pair_key(n, u, v))) pool.emplace_back(u, v);
    for (std::int64_t i = 0; i < k; ++i) {
      std::int64_t j =
          i + static_cast<std::int64_t>(rng.next_below(pool.size() - i));
      std::swap(pool[i], pool[j]);
      out.push_back(pool[i]);
    }
    return out;
  }

  // Sparse regime: rejection sampling over ordered pairs.
  std::unordered_set<std::int64_t> chosen;
  while (static_cast<std::int64_t>(out.size()) < k) {
    int u = static_cast<int>(rng.next_below(n));
    int v = static_cast<int>(rng.next_below(n - 1));
    if (v >= u) ++v;
    if (u > v) std::swap(u, v);
    std::int64_t key = pair_key(n, u, v);
    if (present.count(key) || chosen.count(key)) continue;
    chosen.insert(key);
    out.emplace_back(u, v);
  }
  return out;
}

int draw_label(const std::vector<int>& labels, Rng& rng) {
  return labels[rng.next_below(labels.size())];
}

}  // namespace

Graph gen_er(int n, double avg_degree, std::uint64_t seed) {
  if (n < 0) throw std::invalid_argument("gen_er: negative node count");
  if (avg_degree < 0.0 || (n > 0 && avg_degree >= static_cast<double>(n)))
    throw std::invalid_argument("gen_er: need 0 <= avg_degree < n");
  std::vector<Edge> edges;
  if (n >= 2 && avg_degree > 0.0) {
    double p = std::min(1.0, avg_degree / (n - 1));
    edges.reserve(static_cast<std::size_t>(avg_degree * n / 2 * 1.2) + 16);
    if (p >= 1.0) {
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) edges.push_back({i, j});
    } else {
      // 64-bit threshold compare per pair: exact on every platform, and each
      // row draws from its own stream so output never depends on scheduling.
      const auto thr = static_cast<std::uint64_t>(std::ldexp(p, 64));
      for (int i = 0; i < n; ++i) {
        Rng row(seed, "gen_er", static_cast<std::uint64_t>(i));
        for (int j = i + 1; j < n; ++j)
          if (row.next_u64() < thr) edges.push_back({i, j});
      }
    }
  }
  return build_graph(n, std::move(edges));
}

PairResult make_permuted_pair(const Graph& base, double insert_frac,
                              double delete_frac, std::uint64_t seed) {
  if (insert_frac < 0.0 || insert_frac >= 1.0 || delete_frac < 0.0 ||
      delete_frac >= 1.0)
    throw std::invalid_argument("make_permuted_pair: fracs must be in [0,1)");
  const auto e_count = static_cast<double>(base.edges.size());
  const auto n_insert = std::llround(insert_frac * e_count);
  const auto n_delete = std::llround(delete_frac * e_count);

  // g1: base plus sampled absent edges.
  std::vector<Edge> e1 = base.edges;
  std::vector<int> labels1 = base.edge_labels;
  {
    Rng rng(seed, "pair_insert");
    for (auto [u, v] : sample_absent_pairs(base, n_insert, rng)) {
      e1.push_back({u, v, 1.0});
      if (base.has_edge_labels()) labels1.push_back(draw_label(base.edge_labels, rng));
    }
  }
  Graph g1 = build_graph(base.n, std::move(e1), base.node_attrs,
                         std::move(labels1), base.name);

  // g2: base minus sampled existing edges, then relabeled.
  std::vector<char> deleted(base.edges.size(), 0);
  {
    Rng rng(seed, "pair_delete");
    for (int idx : sample_without_replacement(
             static_cast<int>(base.edges.size()),
             static_cast<int>(n_delete), rng))
      deleted[idx] = 1;
  }
  std::vector<int> newid(base.n);
  {
    Rng rng(seed, "pair_permute");
    for (int i = 0; i < base.n; ++i) newid[i] = i;
    for (int i = base.n - 1; i > 0; --i) {
      int j = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(i) + 1));
      std::swap(newid[i], newid[j]);
    }
  }
  std::vector<Edge> e2;
  std::vector<int> labels2;
  for (std::size_t k = 0; k < base.edges.size(); ++k) {
    if (deleted[k]) continue;
    const Edge& e = base.edges[k];
    e2.push_back({newid[e.u], newid[e.v], e.w});
    if (base.has_edge_labels()) labels2.push_back(base.edge_labels[k]);
  }
  Eigen::MatrixXd attrs2;
  if (base.has_node_attrs()) {
    attrs2.resize(base.node_attrs.rows(), base.node_attrs.cols());
    for (int i = 0; i < base.n; ++i) attrs2.row(newid[i]) = base.node_attrs.row(i);
  }
  Graph g2 = build_graph(base.n, std::move(e2), std::move(attrs2),
                         std::move(labels2), base.name);

  GroundTruth truth;
  truth.pairs.reserve(base.n);
  for (int i = 0; i < base.n; ++i) truth.pairs.emplace_back(i, newid[i]);
  return {std::move(g1), std::move(g2), std::move(truth)};
}

Graph inject_edge_noise(const Graph& g, double p, std::uint64_t seed,
                        EdgeNoiseMode mode) {
  if (p < 0.0 || p > 1.0)
    throw std::invalid_argument("inject_edge_noise: p must be in [0,1]");
  const auto e_count = static_cast<double>(g.edges.size());
  std::int64_t n_add = 0, n_del = 0;
  switch (mode) {
    case EdgeNoiseMode::split:
      n_add = std::llround(p * e_count / 2);
      n_del = std::llround(p * e_count / 2);
      break;
    case EdgeNoiseMode::add_only:
      n_add = std::llround(p * e_count);
      break;
    case EdgeNoiseMode::delete_only:
      n_del = std::llround(p * e_count);
      break;
  }

  std::vector<char> deleted(g.edges.size(), 0);
  {
    Rng rng(seed, "edge_noise_del");
    for (int idx : sample_without_replacement(static_cast<int>(g.edges.size()),
                                              static_cast<int>(n_del), rng))
      deleted[idx] = 1;
  }
  std::vector<Edge> edges;
  std::vector<int> labels;
  for (std::size_t k = 0; k < g.edges.size(); ++k) {
    if (deleted[k]) continue;
    edges.push_back(g.edges[k]);
    if (g.has_edge_labels()) labels.push_back(g.edge_labels[k]);
  }
  {
    Rng rng(seed, "edge_noise_add");
    for (auto [u, v] : sample_absent_pairs(g, n_add, rng)) {
      edges.push_back({u, v, 1.0});
      if (g.has_edge_labels()) labels.push_back(draw_label(g.edge_labels, rng));
    }
  }
  return build_graph(g.n, std::move(edges), g.node_attrs, std::move(labels),
                     g.name);
}

Graph inject_attr_noise(const Graph& g, double p, std::uint64_t seed,
                        const std::optional<std::vector<bool>>& binary_cols) {
  if (p < 0.0 || p > 1.0)
    throw std::invalid_argument("inject_attr_noise: p must be in [0,1]");
  if (!g.has_node_attrs())
    throw std::invalid_argument("inject_attr_noise: graph has no attributes");
  const int d = static_cast<int>(g.node_attrs.cols());
  if (binary_cols && static_cast<int>(binary_cols->size()) != d)
    throw std::invalid_argument("inject_attr_noise: binary mask size mismatch");

  std::vector<bool> is_binary(d);
  for (int c = 0; c < d; ++c) {
    if (binary_cols) {
      is_binary[c] = (*binary_cols)[c];
    } else {
      bool bin = true;
      for (int i = 0; i < g.n && bin; ++i) {
        double x = g.node_attrs(i, c);
        bin = (x == 0.0 || x == 1.0);
      }
      is_binary[c] = bin;
    }
  }

  Eigen::MatrixXd attrs = g.node_attrs;
  // Continuous columns are normalized for every node, noisy or not.
  for (int c = 0; c < d; ++c) {
    if (is_binary[c]) continue;
    double lo = attrs.col(c).minCoeff(), hi = attrs.col(c).maxCoeff();
    if (hi > lo)
      attrs.col(c) = (attrs.col(c).array() - lo) / (hi - lo);
    else
      attrs.col(c).setZero();
  }

  std::vector<int> sel;
  {
    Rng rng(seed, "attr_noise_sel");
    sel = sample_without_replacement(
        g.n, static_cast<int>(std::llround(p * g.n)), rng);
  }
  std::sort(sel.begin(), sel.end());
  Rng gauss(seed, "attr_noise_gauss");
  for (int i : sel) {
    for (int c = 0; c < d; ++c) {
      if (is_binary[c])
        attrs(i, c) = attrs(i, c) == 0.0 ? 1.0 : 0.0;
      else
        attrs(i, c) += gauss.next_gaussian();
    }
  }
  Graph out = g;
  out.node_attrs = std::move(attrs);
  return out;
}

AlignmentTask inject_supervision_noise(const AlignmentTask& task, double p,
                                       std::uint64_t seed) {
  if (p < 0.0 || p > 1.0)
    throw std::invalid_argument("inject_supervision_noise: p must be in [0,1]");
  const int l = static_cast<int>(task.train_anchors.size());
  const auto count = static_cast<int>(std::llround(p * l));
  if (count == 0) return task;

  std::set<int> truth_right;
  for (auto [i, j] : task.truth.pairs) truth_right.insert(j);
  std::vector<int> pool;
  for (int j = 0; j < task.g2.n; ++j)
    if (!truth_right.count(j)) pool.push_back(j);
  if (pool.empty())
    throw std::invalid_argument(
        "inject_supervision_noise: no non-anchor nodes in g2");

  AlignmentTask out = task;
  Rng sel_rng(seed, "sup_noise_sel");
  std::vector<int> sel = sample_without_replacement(l, count, sel_rng);
  std::sort(sel.begin(), sel.end());
  Rng draw_rng(seed, "sup_noise_draw");
  for (int idx : sel)
    out.train_anchors[idx].second =
        pool[draw_rng.next_below(pool.size())];
  return out;
}

}  // namespace netalign
