#pragma once

#include <cstdint>

namespace arbgas {

// Counter-based splittable RNG. Output i of stream (seed, stream) is
// mix(key + i*GAMMA) where mix is the SplitMix64 finalizer, so the state is
// just (key, counter) and streams derived via split() are independent for
// practical purposes. Determinism: identical (seed, stream, call sequence)
// gives identical output on every platform.
class CounterRng {
 public:
  explicit CounterRng(uint64_t seed, uint64_t stream = 0)
      : key_(derive_key(seed, stream)) {}

  static uint64_t mix(uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
  }

  uint64_t next_u64() { return mix(key_ + (++counter_) * kGamma); }

  // Uniform in [0,1) with 53 random bits.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n), n >= 1. Lemire's multiply-then-reject method.
  uint64_t next_below(uint64_t n) {
    for (;;) {
      uint64_t x = next_u64();
      __uint128_t m = static_cast<__uint128_t>(x) * n;
      uint64_t lo = static_cast<uint64_t>(m);
      if (lo >= n || lo >= (0 - n) % n) return static_cast<uint64_t>(m >> 64);
    }
  }

  CounterRng split(uint64_t stream) const {
    CounterRng r(0, 0);
    r.key_ = derive_key(key_, stream | 0x8000000000000000ULL);
    r.counter_ = 0;
    return r;
  }

  uint64_t key() const { return key_; }
  uint64_t counter() const { return counter_; }

 private:
  static constexpr uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

  static uint64_t derive_key(uint64_t seed, uint64_t stream) {
    return mix(seed + kGamma * (2 * stream + 1)) ^ mix(stream + 0x6A09E667F3BCC909ULL);
  }

  uint64_t key_;
  uint64_t counter_ = 0;
};

}  // namespace arbgas
