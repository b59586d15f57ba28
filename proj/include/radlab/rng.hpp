// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace radlab {

// SplitMix64. Self-contained so streams are stable across platforms and
// standard-library versions; all randomness in the project flows through this.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next_u64() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n). Modulo bias is ~2^-40 for desk-scale n.
  int uniform_int(int n) { return static_cast<int>(next_u64() % static_cast<uint64_t>(n)); }

  // Box-Muller without the cached spare: one value per call keeps
  // consumption order trivial to reason about.
  double gaussian() {
    double u1 = uniform();
    double u2 = uniform();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

  double gaussian(double mean, double std) { return mean + std * gaussian(); }

  // Fisher-Yates.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (int i = static_cast<int>(v.size()) - 1; i > 0; --i) {
      int j = uniform_int(i + 1);
      std::swap(v[static_cast<size_t>(i)], v[static_cast<size_t>(j)]);
    }
  }

  // k distinct values from [0, n), in draw order.
  std::vector<int> sample_without_replacement(int n, int k) {
    std::vector<int> pool(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) pool[static_cast<size_t>(i)] = i;
    std::vector<int> out;
    out.reserve(static_cast<size_t>(k));
    for (int i = 0; i < k; ++i) {
      int j = i + uniform_int(n - i);
      std::swap(pool[static_cast<size_t>(i)], pool[static_cast<size_t>(j)]);
      out.push_back(pool[static_cast<size_t>(i)]);
    }
    return out;
  }

 private:
  uint64_t state_;
};

// Derives an independent stream seed from a base seed and a stream index.
inline uint64_t mix_seed(uint64_t base, uint64_t stream) {
  Rng r(base ^ (stream * 0x9e3779b97f4a7c15ull + 0x632be59bd9b4e019ull));
  return r.next_u64();
}

}  // namespace radlab
