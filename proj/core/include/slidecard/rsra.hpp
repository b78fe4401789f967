#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "slidecard/hash.hpp"
#include "slidecard/sliding_counters.hpp"

namespace slidecard {

struct RsraConfig {
  uint32_t q = 17;     // log2 of columns per row
  uint32_t r = 5;      // rows
  uint32_t delta = 5;  // bit stride of the reversible hash group
  uint32_t eta = 8;    // counters per rough estimator
  uint32_t tau = 7;    // sampling threshold
  uint64_t seed_h1 = 0;
  uint64_t seed_h2 = 0;
  uint64_t seed_rhfg0 = 0;

  bool operator==(const RsraConfig&) const = default;
};

// Reversible sliding rough estimator array: r rows x 2^q columns of
// eta-counter rough estimators, indexed per row by the reversible hash group
// so that hot columns can be folded back into candidate addresses.
class Rsra {
 public:
  explicit Rsra(const RsraConfig& cfg);

  const RsraConfig& config() const { return cfg_; }
  const ReversibleHashGroup& hash_group() const { return group_; }
  uint64_t slides() const { return slides_; }
  void set_slides(uint64_t s) { slides_ = s; }  // used when loading from a stream

  // one gated update; sets eta-slot `H2(bip) mod eta` in one column per row.
  // Conflict-free: any number of updates may run concurrently within a slice.
  void update(uint32_t aip, uint32_t bip);

  // slice boundary: every counter ages by one
  void slide();

  // clears all counters but still counts as a slice boundary (strict
  // discrete-window mode)
  void reinitialize();

  // column indices whose estimator weight under window k reaches eta * rho,
  // one ascending list per row
  std::vector<std::vector<uint32_t>> extract_hot(uint32_t k) const;

  std::span<const uint16_t> sre(uint32_t row, uint32_t col) const;

  // per-counter minimum with a same-shape array; throws IncompatibleSketchError
  void merge_min(const Rsra& other);
  // empty string when mergeable, otherwise which field differs
  std::string compatibility_mismatch(const Rsra& other) const;

  std::span<const uint16_t> cells() const { return cells_; }
  std::span<uint16_t> cells_mut() { return cells_; }
  uint64_t columns() const { return uint64_t{1} << cfg_.q; }

 private:
  size_t cell_index(uint32_t row, uint32_t col) const {
    return ((static_cast<size_t>(row) << cfg_.q) + col) * cfg_.eta;
  }

  RsraConfig cfg_;
  ReversibleHashGroup group_;
  SeededHash h1_;
  SeededHash h2_;
  std::vector<uint16_t> cells_;
  uint64_t slides_ = 0;
};

Rsra merge(const Rsra& a, const Rsra& b);

}  // namespace slidecard
