#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "netalign/graph.hpp"

namespace netalign {

enum class Direction { l2r, r2l };

// 1-based rank of the truth entry in its row (l2r) or column (r2l):
// 1 + #strictly-better + #equal-with-smaller-index. Deterministic under ties.
int rank_of_truth(const AlignmentMatrix& s, int i, int j, Direction dir);

// Mean over pairs of 1{rank <= k}. Without an explicit direction the two
// directions are computed on the same matrix and averaged.
double hits_at_k(const AlignmentMatrix& s,
                 const std::vector<std::pair<int, int>>& pairs, int k,
                 std::optional<Direction> dir = std::nullopt);

// Mean reciprocal rank, same direction convention as hits_at_k.
double mrr(const AlignmentMatrix& s,
           const std::vector<std::pair<int, int>>& pairs,
           std::optional<Direction> dir = std::nullopt);

// Repeatedly takes the globally best unmatched entry (ties by row, then
// column) until one side is exhausted.
std::vector<std::pair<int, int>> greedy_match(const AlignmentMatrix& s);

double matching_total(const AlignmentMatrix& s,
                      const std::vector<std::pair<int, int>>& m);

struct MatchResult {
  std::vector<std::pair<int, int>> pairs;
  double total = 0.0;
};

// Exact optimal one-to-one matching maximizing total score (bitmask DP).
// Skipping rows is allowed unless require_complete, so the optimum never
// falls below any other matching's total, greedy included. Guarded to
// min(n1, n2) <= 10.
MatchResult hungarian_oracle(const AlignmentMatrix& s,
                             bool require_complete = false);

// Per-row retained scores, (col, score) sorted by score desc then col asc;
// k = 0 means full rows. Ranks are computed within the retained entries and
// a truth pair that was not retained counts as rank > K (0 contribution).
struct TopKScores {
  int n1 = 0, n2 = 0, k = 0;
  std::vector<std::vector<std::pair<int, double>>> rows;
};

TopKScores topk_from_dense(const AlignmentMatrix& s, int k);

// 0 when the pair is not retained.
int rank_of_truth(const TopKScores& s, int i, int j, Direction dir);
double hits_at_k(const TopKScores& s,
                 const std::vector<std::pair<int, int>>& pairs, int k,
                 std::optional<Direction> dir = std::nullopt,
                 bool* truncated = nullptr);
double mrr(const TopKScores& s, const std::vector<std::pair<int, int>>& pairs,
           std::optional<Direction> dir = std::nullopt,
           bool* truncated = nullptr);

struct Telemetry {
  double time_s = 0.0;
  std::uint64_t peak_mem_bytes = 0;
  bool sampler_ok = true;
};

// Wall time plus peak resident set sampled every 50 ms by a monitor thread,
// maxed with snapshots taken before and after the call. On platforms without
// a readable RSS the peak is 0 and sampler_ok is false (warned once).
Telemetry run_with_telemetry(const std::function<void()>& job);

}  // namespace netalign
