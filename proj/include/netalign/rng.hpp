#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>
#include <vector>

namespace netalign {

// Deterministic counter-based generator. Every randomized operation owns a
// stream derived from (seed, operation tag, stream index); draw i is a pure
// function of (key, i), so outputs are bit-identical for identical inputs on
// any platform and independent of how work is scheduled.

// SplitMix64 finalizer; bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

constexpr std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

class Rng {
 public:
  Rng(std::uint64_t seed, std::string_view tag, std::uint64_t stream = 0)
      : key_(mix64(mix64(seed ^ 0x6a09e667f3bcc909ULL) ^ fnv1a(tag)) ^
             mix64(stream ^ 0xa54ff53a5f1d36f1ULL)) {}

  std::uint64_t next_u64() {
    return mix64(key_ + (++counter_) * 0x9e3779b97f4a7c15ULL);
  }

  // Uniform in [0, 1), 53-bit mantissa.
  double next_double() { return (next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in [0, n), rejection-corrected so every value is equally likely.
  std::uint64_t next_below(std::uint64_t n) {
    const std::uint64_t reject = (0 - n) % n;
    for (;;) {
      std::uint64_t x = next_u64();
      if (x >= reject) return x % n;
    }
  }

  // Standard normal via Box-Muller; second value of each pair is cached.
  double next_gaussian();

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// First k entries of a Fisher-Yates shuffle of 0..n-1 (k distinct values,
// each k-subset-with-order equally likely).
inline std::vector<int> sample_without_replacement(int n, int k, Rng& rng) {
  std::vector<int> a(n);
  for (int i = 0; i < n; ++i) a[i] = i;
  for (int i = 0; i < k; ++i) {
    int j = i + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n - i)));
    std::swap(a[i], a[j]);
  }
  a.resize(k);
  return a;
}

// Marsaglia polar form: no trig calls, two normals per accepted pair.
inline double Rng::next_gaussian() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  for (;;) {
    double v1 = 2.0 * next_double() - 1.0;
    double v2 = 2.0 * next_double() - 1.0;
    double s = v1 * v1 + v2 * v2;
    if (s <= 0.0 || s >= 1.0) continue;
    double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v2 * f;
    have_spare_ = true;
    return v1 * f;
  }
}

}  // namespace netalign
