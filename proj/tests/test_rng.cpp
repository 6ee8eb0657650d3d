#include "doctest.h"
#include "netalign/rng.hpp"

#include <cmath>
#include <set>
#include <vector>

using netalign::Rng;

TEST_SUITE("rng") {

TEST_CASE("identical (seed, tag, stream) reproduces the sequence exactly") {
  Rng a(42, "op", 3), b(42, "op", 3);
  for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("distinct tags and streams give distinct sequences") {
  Rng a(42, "opA"), b(42, "opB"), c(42, "opA", 1), d(7, "opA");
  int same_ab = 0, same_ac = 0, same_ad = 0;
  for (int i = 0; i < 64; ++i) {
    auto x = a.next_u64();
    same_ab += x == b.next_u64();
    same_ac += x == c.next_u64();
    same_ad += x == d.next_u64();
  }
  CHECK(same_ab == 0);
  CHECK(same_ac == 0);
  CHECK(same_ad == 0);
}

TEST_CASE("next_double lands in [0,1) and is roughly uniform") {
  Rng r(1, "u");
  double sum = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    double x = r.next_double();
    REQUIRE(x >= 0.0);
    REQUIRE(x < 1.0);
    sum += x;
  }
  CHECK(std::abs(sum / n - 0.5) < 0.01);
}

TEST_CASE("next_below stays in range and covers small supports") {
  Rng r(9, "below");
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 1000; ++i) {
    auto x = r.next_below(7);
    REQUIRE(x < 7);
    seen.insert(x);
  }
  CHECK(seen.size() == 7);
  CHECK(Rng(0, "one").next_below(1) == 0);
}

TEST_CASE("gaussian has near-zero mean and unit variance") {
  Rng r(5, "gauss");
  const int n = 200000;
  double s = 0, s2 = 0;
  for (int i = 0; i < n; ++i) {
    double x = r.next_gaussian();
    s += x;
    s2 += x * x;
  }
  double mean = s / n;
  double var = s2 / n - mean * mean;
  CHECK(std::abs(mean) < 0.02);
  CHECK(std::abs(var - 1.0) < 0.03);
}

}  // TEST_SUITE
