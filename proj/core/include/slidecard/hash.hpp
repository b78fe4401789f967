#pragma once

#include <bit>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace slidecard {

inline constexpr uint64_t kGolden64 = 0x9e3779b97f4a7c15ULL;

// 64-bit finalizer with full avalanche; the base of every hash in the library
constexpr uint64_t mix64(uint64_t x) noexcept {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

constexpr uint64_t hash64(uint64_t key, uint64_t seed) noexcept {
  return mix64(mix64(seed) + key * kGolden64);
}

// seeded hash function; same seed => same mapping, on any platform
class SeededHash {
 public:
  SeededHash() = default;
  explicit SeededHash(uint64_t seed) : offset_(mix64(seed)) {}

  uint64_t operator()(uint64_t key) const noexcept {
    return mix64(offset_ + key * kGolden64);
  }

 private:
  uint64_t offset_ = 0;
};

// lsb(0) has no set bit; 32 sorts above every reachable threshold
inline constexpr uint32_t kLsbSentinel = 32;

constexpr uint32_t lsb(uint32_t x) noexcept {
  return x == 0 ? kLsbSentinel : static_cast<uint32_t>(std::countr_zero(x));
}

// smallest non-negative t such that eta * 2^t >= theta, i.e. ceil(log2(theta/eta))
uint32_t sampling_threshold(uint64_t theta, uint64_t eta);

// every hash seed used by the sketches, derived from one master seed
struct HashSeeds {
  uint64_t h1 = 0;     // sampling gate
  uint64_t h2 = 0;     // rough-estimator slot
  uint64_t h3 = 0;     // linear-estimator slot
  uint64_t rhfg0 = 0;  // base of the reversible hash group
  std::vector<uint64_t> lh;  // one per linear-estimator row

  static HashSeeds derive(uint64_t master_seed, uint32_t lh_count);
};

// LSB-gated sampling: keep bip iff lsb(H1(bip)) >= tau, slot = H2(bip) mod eta.
// Pass rate over uniform addresses is 2^-tau.
std::optional<uint32_t> sample_gate(uint32_t bip, uint32_t tau, uint32_t eta,
                                    const SeededHash& h1, const SeededHash& h2);

// H3(bip) mod eta_prime
uint32_t le_index(uint32_t bip, uint32_t eta_prime, const SeededHash& h3);

// Group of r hash functions over 32-bit addresses. The base hash maps into
// [0, 2^q); derived hash i xors the base with address bits shifted by i*delta,
// so the address windows can be read back out of the hashed values and the
// input address reconstructed.
class ReversibleHashGroup {
 public:
  static constexpr uint32_t kAddressBits = 32;

  ReversibleHashGroup(uint32_t q, uint32_t r, uint32_t delta, uint64_t seed);

  uint32_t q() const { return q_; }
  uint32_t r() const { return r_; }
  uint32_t delta() const { return delta_; }
  uint64_t seed() const { return seed_; }
  uint32_t column_mask() const { return col_mask_; }

  // true when the derived windows reach every address bit above delta,
  // i.e. (r-2)*delta + q >= 32; required for detection configurations
  bool covers_address() const;

  // address bits recovered by no window; always includes bits [0, delta)
  uint32_t uncovered_mask() const { return uncovered_mask_; }

  uint32_t base(uint32_t aip) const { return static_cast<uint32_t>(h0_(aip)) & col_mask_; }

  // out[0] = base(aip); out[i] = ((aip >> i*delta) ^ out[0]) & mask
  void forward(uint32_t aip, std::span<uint32_t> out) const;
  std::vector<uint32_t> forward(uint32_t aip) const;

  // overlap test between consecutive derived windows: the top q-delta bits of
  // the earlier window must equal the bottom q-delta bits of the later one
  bool windows_consistent(uint32_t b_prev, uint32_t b_cur) const {
    return (b_prev >> delta_) == (b_cur & overlap_mask_);
  }

  // All addresses whose forward image equals `columns` (exactly r entries).
  // Derives the address windows, checks their overlaps, assembles the known
  // bits, enumerates the uncovered ones and keeps only candidates that verify
  // forward. Empty when the overlap check fails or nothing verifies.
  std::vector<uint32_t> invert(std::span<const uint32_t> columns) const;

 private:
  uint32_t q_ = 0;
  uint32_t r_ = 0;
  uint32_t delta_ = 0;
  uint32_t col_mask_ = 0;
  uint32_t overlap_mask_ = 0;
  uint32_t uncovered_mask_ = 0;
  uint64_t seed_ = 0;
  SeededHash h0_;
};

}  // namespace slidecard
