#pragma once

// Deterministic seed streams. Every replicate, study repetition, or retry
// derives its own engine from (master seed, index path), so results are
// identical for any thread count or scheduling order. The engine is
// mt19937_64 whose output sequence is fixed by the standard; uniforms and
// normals are built from raw engine words rather than std distributions,
// which are not portable across library implementations.

#include <cstdint>
#include <initializer_list>
#include <random>
#include <utility>
#include <vector>

#include "scoregof/numerics.hpp"

namespace scoregof {

class SeedStream {
 public:
  explicit SeedStream(std::uint64_t master) : SeedStream(master, {}) {}

  SeedStream(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
    std::vector<std::uint32_t> words;
    words.reserve(2 * (1 + path.size()));
    push_word(words, master);
    for (const std::uint64_t w : path) push_word(words, w);
    std::seed_seq seq(words.begin(), words.end());
    engine_.seed(seq);
  }

  // Uniform on the open interval (0,1), 53-bit resolution.
  double uniform01() {
    return (double(engine_() >> 11) + 0.5) * 0x1p-53;
  }

  // Standard normal by quantile transform; deterministic and accurate to
  // ~1e-15, which keeps the whole pipeline reproducible bit for bit.
  double normal() { return std_normal_quantile(uniform01()); }

  // Bivariate normal pair with correlation rho.
  std::pair<double, double> correlated_normal_pair(double rho) {
    const double z1 = normal();
    const double z2 = rho * z1 + std::sqrt(1.0 - rho * rho) * normal();
    return {z1, z2};
  }

  // Unbiased integer below `bound` via masked rejection.
  std::uint64_t below(std::uint64_t bound) {
    if (bound <= 1) return 0;
    std::uint64_t mask = bound - 1;
    mask |= mask >> 1;
    mask |= mask >> 2;
    mask |= mask >> 4;
    mask |= mask >> 8;
    mask |= mask >> 16;
    mask |= mask >> 32;
    std::uint64_t r;
    do {
      r = engine_() & mask;
    } while (r >= bound);
    return r;
  }

  // Index subsample of size m from {0..n-1} without replacement
  // (partial Fisher-Yates).
  std::vector<std::size_t> subsample_indices(std::size_t n, std::size_t m) {
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t j = i + std::size_t(below(n - i));
      std::swap(idx[i], idx[j]);
    }
    idx.resize(m);
    return idx;
  }

 private:
  static void push_word(std::vector<std::uint32_t>& words, std::uint64_t w) {
    words.push_back(std::uint32_t(w & 0xffffffffu));
    words.push_back(std::uint32_t(w >> 32));
  }

  std::mt19937_64 engine_;
};

}  // namespace scoregof
