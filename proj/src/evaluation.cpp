#include "netalign/evaluation.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <mutex>
#include <stdexcept>
#include <thread>

#ifdef __linux__
#include <unistd.h>
#endif

namespace netalign {

namespace {

void check_pair(const AlignmentMatrix& s, int i, int j) {
  if (i < 0 || i >= s.rows() || j < 0 || j >= s.cols())
    throw std::invalid_argument("rank_of_truth: pair out of range");
}

double mean_metric(const std::vector<std::pair<int, int>>& pairs,
                   std::optional<Direction> dir,
                   const std::function<double(int, int, Direction)>& one) {
  if (pairs.empty())
    throw std::invalid_argument("metric over an empty pair set");
  auto eval_dir = [&](Direction d) {
    double acc = 0.0;
    for (auto [i, j] : pairs) acc += one(i, j, d);
    return acc / static_cast<double>(pairs.size());
  };
  if (dir) return eval_dir(*dir);
  return 0.5 * (eval_dir(Direction::l2r) + eval_dir(Direction::r2l));
}

}  // namespace

int rank_of_truth(const AlignmentMatrix& s, int i, int j, Direction dir) {
  check_pair(s, i, j);
  int rank = 1;
  if (dir == Direction::l2r) {
    const double ref = s(i, j);
    for (int v = 0; v < s.cols(); ++v) {
      double x = s(i, v);
      if (x > ref || (x == ref && v < j)) ++rank;
    }
  } else {
    const double ref = s(i, j);
    for (int u = 0; u < s.rows(); ++u) {
      double x = s(u, j);
      if (x > ref || (x == ref && u < i)) ++rank;
    }
  }
  return rank;
}

double hits_at_k(const AlignmentMatrix& s,
                 const std::vector<std::pair<int, int>>& pairs, int k,
                 std::optional<Direction> dir) {
  if (k < 1) throw std::invalid_argument("hits_at_k: k must be >= 1");
  return mean_metric(pairs, dir, [&](int i, int j, Direction d) {
    return rank_of_truth(s, i, j, d) <= k ? 1.0 : 0.0;
  });
}

double mrr(const AlignmentMatrix& s,
           const std::vector<std::pair<int, int>>& pairs,
           std::optional<Direction> dir) {
  return mean_metric(pairs, dir, [&](int i, int j, Direction d) {
    return 1.0 / rank_of_truth(s, i, j, d);
  });
}

std::vector<std::pair<int, int>> greedy_match(const AlignmentMatrix& s) {
  struct Entry {
    double v;
    int i, j;
  };
  std::vector<Entry> entries;
  entries.reserve(static_cast<std::size_t>(s.rows() * s.cols()));
  for (int i = 0; i < s.rows(); ++i)
    for (int j = 0; j < s.cols(); ++j) entries.push_back({s(i, j), i, j});
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    if (a.v != b.v) return a.v > b.v;
    if (a.i != b.i) return a.i < b.i;
    return a.j < b.j;
  });
  std::vector<char> row_used(s.rows(), 0), col_used(s.cols(), 0);
  std::vector<std::pair<int, int>> out;
  const std::size_t want =
      static_cast<std::size_t>(std::min(s.rows(), s.cols()));
  for (const Entry& e : entries) {
    if (out.size() == want) break;
    if (row_used[e.i] || col_used[e.j]) continue;
    row_used[e.i] = col_used[e.j] = 1;
    out.emplace_back(e.i, e.j);
  }
  return out;
}

double matching_total(const AlignmentMatrix& s,
                      const std::vector<std::pair<int, int>>& m) {
  double t = 0.0;
  for (auto [i, j] : m) t += s(i, j);
  return t;
}

MatchResult hungarian_oracle(const AlignmentMatrix& s, bool require_complete) {
  const bool transposed = s.rows() > s.cols();
  const AlignmentMatrix m = transposed ? s.transpose() : s;
  const int n1 = static_cast<int>(m.rows()), n2 = static_cast<int>(m.cols());
  if (n1 > 10)
    throw std::invalid_argument("hungarian_oracle: guarded to min side <= 10");
  const int masks = 1 << n2;
  const double neg = -1e300;
  // dp[mask] = best total for the rows seen so far using columns in mask.
  std::vector<double> dp(masks, neg), nxt(masks);
  std::vector<std::vector<signed char>> choice(
      n1, std::vector<signed char>(masks, -2));  // -2 unreachable, -1 skip
  dp[0] = 0.0;
  for (int r = 0; r < n1; ++r) {
    std::fill(nxt.begin(), nxt.end(), neg);
    for (int mask = 0; mask < masks; ++mask) {
      if (dp[mask] <= neg) continue;
      if (!require_complete && dp[mask] > nxt[mask]) {
        nxt[mask] = dp[mask];
        choice[r][mask] = -1;
      }
      for (int c = 0; c < n2; ++c) {
        if (mask & (1 << c)) continue;
        double cand = dp[mask] + m(r, c);
        if (cand > nxt[mask | (1 << c)]) {
          nxt[mask | (1 << c)] = cand;
          choice[r][mask | (1 << c)] = static_cast<signed char>(c);
        }
      }
    }
    dp.swap(nxt);
  }
  int best_mask = 0;
  double best = neg;
  for (int mask = 0; mask < masks; ++mask)
    if (dp[mask] > best) {
      best = dp[mask];
      best_mask = mask;
    }
  MatchResult res;
  res.total = best;
  int mask = best_mask;
  for (int r = n1 - 1; r >= 0; --r) {
    signed char c = choice[r][mask];
    if (c >= 0) {
      res.pairs.emplace_back(r, c);
      mask &= ~(1 << c);
    }
  }
  std::reverse(res.pairs.begin(), res.pairs.end());
  if (transposed)
    for (auto& p : res.pairs) std::swap(p.first, p.second);
  return res;
}

TopKScores topk_from_dense(const AlignmentMatrix& s, int k) {
  if (k < 0) throw std::invalid_argument("topk_from_dense: negative k");
  TopKScores t;
  t.n1 = static_cast<int>(s.rows());
  t.n2 = static_cast<int>(s.cols());
  t.k = k;
  t.rows.resize(t.n1);
  for (int i = 0; i < t.n1; ++i) {
    auto& row = t.rows[i];
    row.reserve(t.n2);
    for (int j = 0; j < t.n2; ++j) row.emplace_back(j, s(i, j));
    std::sort(row.begin(), row.end(), [](const auto& a, const auto& b) {
      if (a.second != b.second) return a.second > b.second;
      return a.first < b.first;
    });
    if (k > 0 && static_cast<int>(row.size()) > k) row.resize(k);
  }
  return t;
}

int rank_of_truth(const TopKScores& s, int i, int j, Direction dir) {
  if (i < 0 || i >= s.n1 || j < 0 || j >= s.n2)
    throw std::invalid_argument("rank_of_truth: pair out of range");
  if (dir == Direction::l2r) {
    const auto& row = s.rows[i];
    for (std::size_t p = 0; p < row.size(); ++p)
      if (row[p].first == j) return static_cast<int>(p) + 1;
    return 0;
  }
  // Column rank across the retained entries of every row.
  double ref = 0.0;
  bool found = false;
  for (const auto& e : s.rows[i])
    if (e.first == j) {
      ref = e.second;
      found = true;
      break;
    }
  if (!found) return 0;
  int rank = 1;
  for (int u = 0; u < s.n1; ++u) {
    if (u == i) continue;
    for (const auto& e : s.rows[u])
      if (e.first == j) {
        if (e.second > ref || (e.second == ref && u < i)) ++rank;
        break;
      }
  }
  return rank;
}

namespace {

double mean_metric_topk(const TopKScores& s,
                        const std::vector<std::pair<int, int>>& pairs,
                        std::optional<Direction> dir, bool* truncated,
                        const std::function<double(int)>& of_rank) {
  if (pairs.empty())
    throw std::invalid_argument("metric over an empty pair set");
  bool trunc = false;
  auto eval_dir = [&](Direction d) {
    double acc = 0.0;
    for (auto [i, j] : pairs) {
      int r = rank_of_truth(s, i, j, d);
      if (r == 0)
        trunc = true;
      else
        acc += of_rank(r);
    }
    return acc / static_cast<double>(pairs.size());
  };
  double v = dir ? eval_dir(*dir)
               : 0.5 * (eval_dir(Direction::l2r) + eval_dir(Direction::r2l));
  if (truncated) *truncated = trunc;
  return v;
}

}  // namespace

double hits_at_k(const TopKScores& s,
                 const std::vector<std::pair<int, int>>& pairs, int k,
                 std::optional<Direction> dir, bool* truncated) {
  if (k < 1) throw std::invalid_argument("hits_at_k: k must be >= 1");
  return mean_metric_topk(s, pairs, dir, truncated,
                          [k](int r) { return r <= k ? 1.0 : 0.0; });
}

double mrr(const TopKScores& s, const std::vector<std::pair<int, int>>& pairs,
           std::optional<Direction> dir, bool* truncated) {
  return mean_metric_topk(s, pairs, dir, truncated,
                          [](int r) { return 1.0 / r; });
}

namespace {

std::uint64_t current_rss_bytes() {
#ifdef __linux__
  FILE* f = std::fopen("/proc/self/statm", "r");
  if (!f) return 0;
  unsigned long long total = 0, resident = 0;
  int got = std::fscanf(f, "%llu %llu", &total, &resident);
  std::fclose(f);
  if (got != 2) return 0;
  return static_cast<std::uint64_t>(resident) *
         static_cast<std::uint64_t>(sysconf(_SC_PAGESIZE));
#else
  return 0;
#endif
}

std::once_flag sampler_warned;

}  // namespace

Telemetry run_with_telemetry(const std::function<void()>& job) {
  Telemetry t;
  const std::uint64_t before = current_rss_bytes();
  t.sampler_ok = before > 0;
  if (!t.sampler_ok)
    std::call_once(sampler_warned, [] {
      std::fprintf(stderr,
                   "warning: resident-set sampler unavailable; "
                   "peak_mem_bytes will be 0\n");
    });

  std::atomic<std::uint64_t> peak{before};
  std::atomic<bool> stop{false};
  std::thread monitor;
  if (t.sampler_ok)
    monitor = std::thread([&] {
      while (!stop.load(std::memory_order_relaxed)) {
        std::uint64_t r = current_rss_bytes();
        std::uint64_t cur = peak.load(std::memory_order_relaxed);
        while (r > cur &&
               !peak.compare_exchange_weak(cur, r, std::memory_order_relaxed))
          ;
        std::this_thread::sleep_for(std::chrono::milliseconds(50));
      }
    });

  const auto t0 = std::chrono::steady_clock::now();
  try {
    job();
  } catch (...) {
    stop.store(true);
    if (monitor.joinable()) monitor.join();
    throw;
  }
  const auto t1 = std::chrono::steady_clock::now();
  stop.store(true);
  if (monitor.joinable()) monitor.join();

  t.time_s = std::chrono::duration<double>(t1 - t0).count();
  std::uint64_t after = current_rss_bytes();
  t.peak_mem_bytes = std::max(peak.load(), after);
  if (!t.sampler_ok) t.peak_mem_bytes = 0;
  return t;
}

}  // namespace netalign
