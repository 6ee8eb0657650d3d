#pragma once

// Hand-computed ranking metric instances shared by the unit tests and the
// acceptance gate. Expected values are exact doubles or expressions whose
// floating-point evaluation order matches the implementation (sum of
// reciprocals in pair order, then divide; direction average as (l+r)/2).

#include <optional>
#include <string>
#include <vector>

#include "netalign/evaluation.hpp"

namespace netalign::testsupport {

struct MetricCase {
  std::string name;
  AlignmentMatrix s;
  std::vector<std::pair<int, int>> pairs;
  bool is_mrr = false;          // else Hits@k
  int k = 1;
  std::optional<Direction> dir;
  double expected = 0.0;
};

inline std::vector<MetricCase> golden_metric_cases() {
  std::vector<MetricCase> cases;
  auto add = [&](std::string name, AlignmentMatrix s,
                 std::vector<std::pair<int, int>> pairs, bool is_mrr, int k,
                 std::optional<Direction> dir, double expected) {
    cases.push_back({std::move(name), std::move(s), std::move(pairs), is_mrr,
                     k, dir, expected});
  };

  AlignmentMatrix diag2(2, 2);
  diag2 << 0.9, 0.1, 0.2, 0.8;
  add("diag2 hits1 avg", diag2, {{0, 0}, {1, 1}}, false, 1, std::nullopt, 1.0);
  add("diag2 mrr avg", diag2, {{0, 0}, {1, 1}}, true, 0, std::nullopt, 1.0);

  AlignmentMatrix off2(2, 2);
  off2 << 0.1, 0.9, 0.2, 0.8;
  // l2r ranks 2,1; r2l ranks 2,2
  add("off2 hits1 l2r", off2, {{0, 0}, {1, 1}}, false, 1, Direction::l2r, 0.5);
  add("off2 hits1 r2l", off2, {{0, 0}, {1, 1}}, false, 1, Direction::r2l, 0.0);
  add("off2 hits1 avg", off2, {{0, 0}, {1, 1}}, false, 1, std::nullopt, 0.25);
  add("off2 hits2 avg", off2, {{0, 0}, {1, 1}}, false, 2, std::nullopt, 1.0);
  add("off2 mrr l2r", off2, {{0, 0}, {1, 1}}, true, 0, Direction::l2r,
      (1.0 / 2.0 + 1.0) / 2.0);
  add("off2 mrr r2l", off2, {{0, 0}, {1, 1}}, true, 0, Direction::r2l, 0.5);
  add("off2 mrr avg", off2, {{0, 0}, {1, 1}}, true, 0, std::nullopt,
      ((1.0 / 2.0 + 1.0) / 2.0 + 0.5) / 2.0);

  // Three-way tie in one row: equal entries at smaller column indices push
  // the rank back deterministically.
  AlignmentMatrix tie13(1, 3);
  tie13 << 0.5, 0.5, 0.5;
  add("tie13 col0 hits1 l2r", tie13, {{0, 0}}, false, 1, Direction::l2r, 1.0);
  add("tie13 col1 hits1 l2r", tie13, {{0, 1}}, false, 1, Direction::l2r, 0.0);
  add("tie13 col1 mrr l2r", tie13, {{0, 1}}, true, 0, Direction::l2r, 1.0 / 2.0);
  add("tie13 col2 mrr l2r", tie13, {{0, 2}}, true, 0, Direction::l2r, 1.0 / 3.0);
  add("tie13 col2 hits3 l2r", tie13, {{0, 2}}, false, 3, Direction::l2r, 1.0);

  AlignmentMatrix eye3 = AlignmentMatrix::Identity(3, 3);
  add("eye3 hits1 avg", eye3, {{0, 0}, {1, 1}, {2, 2}}, false, 1, std::nullopt, 1.0);
  add("eye3 mrr avg", eye3, {{0, 0}, {1, 1}, {2, 2}}, true, 0, std::nullopt, 1.0);

  AlignmentMatrix zeros2 = AlignmentMatrix::Zero(2, 2);
  // all-equal matrix: ranks follow index order in both directions
  add("zeros2 hits1 avg", zeros2, {{0, 0}, {1, 1}}, false, 1, std::nullopt, 0.5);
  add("zeros2 mrr avg", zeros2, {{0, 0}, {1, 1}}, true, 0, std::nullopt,
      ((1.0 + 1.0 / 2.0) / 2.0 + (1.0 + 1.0 / 2.0) / 2.0) / 2.0);

  AlignmentMatrix neg2(2, 2);
  neg2 << -1.0, -2.0, -3.0, -0.5;
  add("neg2 hits1 avg", neg2, {{0, 0}, {1, 1}}, false, 1, std::nullopt, 1.0);

  AlignmentMatrix rect23(2, 3);
  rect23 << 0.1, 0.2, 0.3, 0.3, 0.2, 0.1;
  add("rect23 hits1 avg", rect23, {{0, 2}, {1, 0}}, false, 1, std::nullopt, 1.0);

  return cases;
}

inline double evaluate(const MetricCase& c) {
  return c.is_mrr ? mrr(c.s, c.pairs, c.dir)
                  : hits_at_k(c.s, c.pairs, c.k, c.dir);
}

}  // namespace netalign::testsupport
