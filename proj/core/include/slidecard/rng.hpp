#pragma once

#include <cstdint>

#include "slidecard/hash.hpp"

namespace slidecard {

// Deterministic generator used by the trace generator and simulations.
// Unlike <random> distributions its output is identical on every platform.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(mix64(seed)) {}

  uint64_t next() {
    state_ += kGolden64;
    return mix64(state_);
  }

  // [0, n); modulo bias is < n / 2^64, irrelevant at the ranges used here
  uint64_t below(uint64_t n) { return n == 0 ? 0 : next() % n; }

  uint32_t next_u32() { return static_cast<uint32_t>(next() >> 32); }

  // [0, 1)
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  bool chance(double p) { return unit() < p; }

 private:
  uint64_t state_;
};

}  // namespace slidecard
