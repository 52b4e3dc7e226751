#pragma once
#include <cstdint>
#include <random>
#include <vector>

#include "paulisim/errors.hpp"

namespace psim {

inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// stable stream seed for (master, index); used everywhere a study fans out so
// per-item results do not depend on evaluation order
inline uint64_t child_seed(uint64_t master, uint64_t index) {
  return splitmix64(master ^ splitmix64(index + 0x517cc1b727220a95ull));
}

struct Rng {
  std::mt19937_64 gen;

  explicit Rng(uint64_t seed) : gen(seed) {}

  uint64_t raw() { return gen(); }

  // [0, 1), 53-bit resolution
  double uniform() { return double(gen() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // unbiased integer in [0, n)
  uint64_t below(uint64_t n) {
    if (n == 0) throw value_error("Rng::below: empty range");
    const uint64_t threshold = (~n + 1) % n;  // 2^64 mod n
    uint64_t r;
    do {
      r = gen();
    } while (r < threshold);
    return r % n;
  }

  // inclusive bounds
  int64_t between(int64_t lo, int64_t hi) {
    if (hi < lo) throw value_error("Rng::between: empty range");
    return lo + int64_t(below(uint64_t(hi - lo) + 1));
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }
};

}  // namespace psim
