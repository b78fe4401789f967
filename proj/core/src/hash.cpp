#include "slidecard/hash.hpp"

#include <algorithm>
#include <stdexcept>

#include "slidecard/errors.hpp"

namespace slidecard {

uint32_t sampling_threshold(uint64_t theta, uint64_t eta) {
  if (eta == 0) throw ConfigError("sampling threshold: eta must be positive");
  uint32_t t = 0;
  // once eta << t would overflow it already exceeds any 64-bit theta
  while (t < 64 && eta <= (UINT64_MAX >> t) && (eta << t) < theta) ++t;
  return t;
}

HashSeeds HashSeeds::derive(uint64_t master_seed, uint32_t lh_count) {
  HashSeeds s;
  s.h1 = hash64(1, master_seed);
  s.h2 = hash64(2, master_seed);
  s.h3 = hash64(3, master_seed);
  s.rhfg0 = hash64(4, master_seed);
  s.lh.resize(lh_count);
  for (uint32_t i = 0; i < lh_count; ++i) s.lh[i] = hash64(100 + i, master_seed);
  return s;
}

std::optional<uint32_t> sample_gate(uint32_t bip, uint32_t tau, uint32_t eta,
                                    const SeededHash& h1, const SeededHash& h2) {
  if (lsb(static_cast<uint32_t>(h1(bip))) < tau) return std::nullopt;
  return static_cast<uint32_t>(h2(bip) % eta);
}

uint32_t le_index(uint32_t bip, uint32_t eta_prime, const SeededHash& h3) {
  return static_cast<uint32_t>(h3(bip) % eta_prime);
}

ReversibleHashGroup::ReversibleHashGroup(uint32_t q, uint32_t r, uint32_t delta,
                                         uint64_t seed)
    : q_(q), r_(r), delta_(delta), seed_(seed), h0_(seed) {
  if (q == 0 || q > 31) throw ConfigError("hash group: q must be in [1, 31]");
  if (r < 2) throw ConfigError("hash group: need at least 2 rows");
  if (delta == 0 || delta >= q)
    throw ConfigError("hash group: delta must satisfy 1 <= delta < q");
  col_mask_ = (uint32_t{1} << q) - 1;
  overlap_mask_ = (uint32_t{1} << (q - delta)) - 1;

  uint64_t covered = 0;
  for (uint32_t i = 1; i < r_; ++i) {
    uint32_t lo = i * delta_;
    if (lo >= kAddressBits) break;
    uint32_t hi = std::min<uint32_t>(kAddressBits, lo + q_);
    covered |= ((uint64_t{1} << (hi - lo)) - 1) << lo;
  }
  uncovered_mask_ = static_cast<uint32_t>(~covered & 0xFFFFFFFFull);
}

bool ReversibleHashGroup::covers_address() const {
  return static_cast<uint64_t>(r_ - 2) * delta_ + q_ >= kAddressBits;
}

void ReversibleHashGroup::forward(uint32_t aip, std::span<uint32_t> out) const {
  out[0] = base(aip);
  for (uint32_t i = 1; i < r_; ++i) {
    uint32_t shifted = i * delta_ >= kAddressBits ? 0u : aip >> (i * delta_);
    out[i] = (shifted ^ out[0]) & col_mask_;
  }
}

std::vector<uint32_t> ReversibleHashGroup::forward(uint32_t aip) const {
  std::vector<uint32_t> out(r_);
  forward(aip, out);
  return out;
}

std::vector<uint32_t> ReversibleHashGroup::invert(
    std::span<const uint32_t> columns) const {
  if (columns.size() != r_)
    throw std::invalid_argument("invert: expected one column index per row");

  // window i holds address bits [i*delta, i*delta + q)
  std::vector<uint32_t> window(r_, 0);
  for (uint32_t i = 1; i < r_; ++i) window[i] = (columns[i] ^ columns[0]) & col_mask_;
  for (uint32_t i = 2; i < r_; ++i)
    if (!windows_consistent(window[i - 1], window[i])) return {};

  // overlaps agree, so OR-ing the windows into place assembles the covered bits
  uint64_t known = 0;
  for (uint32_t i = 1; i < r_; ++i)
    known |= static_cast<uint64_t>(window[i]) << (i * delta_);
  uint32_t assembled = static_cast<uint32_t>(known & 0xFFFFFFFFull);

  uint32_t free_bits[kAddressBits];
  uint32_t n_free = 0;
  for (uint32_t b = 0; b < kAddressBits; ++b)
    if (uncovered_mask_ & (uint32_t{1} << b)) free_bits[n_free++] = b;
  if (n_free > 26)
    throw ResourceError("invert: parameter set leaves too many address bits unconstrained");

  std::vector<uint32_t> verified;
  std::vector<uint32_t> image(r_);
  for (uint64_t v = 0; v < (uint64_t{1} << n_free); ++v) {
    uint32_t candidate = assembled & ~uncovered_mask_;
    for (uint32_t b = 0; b < n_free; ++b)
      if (v & (uint64_t{1} << b)) candidate |= uint32_t{1} << free_bits[b];
    forward(candidate, image);
    if (std::equal(image.begin(), image.end(), columns.begin())) verified.push_back(candidate);
  }
  std::sort(verified.begin(), verified.end());
  return verified;
}

}  // namespace slidecard
