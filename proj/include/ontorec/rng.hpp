#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <vector>

namespace ontorec {

// Deterministic draws on top of mt19937_64. The engine itself is pinned by
// the standard; std::shuffle and the std distributions are not, so every
// sampling primitive the pipeline needs is spelled out here.
class Rng {
 public:
  explicit Rng(uint64_t seed) : gen_(seed) {}

  uint64_t next() { return gen_(); }

  // uniform in [0, n), n > 0
  uint64_t below(uint64_t n) {
    const uint64_t max = std::numeric_limits<uint64_t>::max();
    const uint64_t limit = max - max % n;
    uint64_t x = gen_();
    while (x >= limit) x = gen_();
    return x % n;
  }

  // uniform in [0, 1)
  double unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  bool chance(double p) { return unit() < p; }

 private:
  std::mt19937_64 gen_;
};

// Fisher-Yates
template <typename T>
void shuffle(std::vector<T>& values, Rng& rng) {
  for (size_t i = values.size(); i > 1; --i) {
    const size_t j = static_cast<size_t>(rng.below(i));
    std::swap(values[i - 1], values[j]);
  }
}

}  // namespace ontorec
