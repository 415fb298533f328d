// rng.hpp — splittable counter-based generator: the k-th draw of (seed,
// stream) is a pure function of (seed, stream, k), bit-identical everywhere.
#pragma once

#include <cstdint>

namespace algprob {

class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : seed_(seed), stream_(stream) {}

  std::uint64_t next_u64() { return mix(seed_, stream_, counter_++); }

  // Uniform in [0, 1) with 53 random bits.
  double next_double() {
    return double(next_u64() >> 11) * 0x1.0p-53;
  }

  std::uint64_t counter() const { return counter_; }

  // Independent child generator; distinct keys give unrelated draws.
  CounterRng split(std::uint64_t key) const {
    return CounterRng(mix(seed_, stream_, 0xb5ad4eceda1ce2a9ULL ^ key), key);
  }

 private:
  // SplitMix64 finalizer over a combined key; full 64-bit avalanche.
  static std::uint64_t mix(std::uint64_t seed, std::uint64_t stream,
                           std::uint64_t ctr) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (ctr + 1);
    z ^= stream + 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t seed_, stream_;
  std::uint64_t counter_ = 0;
};

}  // namespace algprob
