#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "slidecard/hash.hpp"
#include "slidecard/linear_counting.hpp"
#include "slidecard/sliding_counters.hpp"

namespace slidecard {

struct SleaConfig {
  uint32_t q = 17;      // log2 of estimators per row
  uint32_t r = 5;       // rows
  uint32_t delta = 16;  // counter offset between adjacent estimators in a row
  uint32_t eta = 16384; // counters per estimator
  uint64_t seed_h3 = 0;
  std::vector<uint64_t> seeds_lh;  // r entries

  bool operator==(const SleaConfig&) const = default;
};

// Sliding linear estimator array with shared counters: r rows, each a flat
// strip of 2^q * delta + eta - delta counters in which estimator j occupies
// [j*delta, j*delta + eta). Adjacent estimators share eta - delta counters,
// which is where the memory saving comes from.
class Slea {
 public:
  explicit Slea(const SleaConfig& cfg);

  static size_t row_length_for(const SleaConfig& cfg) {
    return (size_t{1} << cfg.q) * cfg.delta + cfg.eta - cfg.delta;
  }

  const SleaConfig& config() const { return cfg_; }
  size_t row_length() const { return row_len_; }
  uint64_t slides() const { return slides_; }
  void set_slides(uint64_t s) { slides_ = s; }

  // fraction of counters saved relative to giving every estimator its own
  double memory_reduction_ratio() const;

  // one ungated update: sets counter LH_i(aip)*delta + H3(bip) mod eta in
  // every row; conflict-free within a slice
  void update(uint32_t aip, uint32_t bip);

  void slide();
  void reinitialize();

  // fraction of row counters inside window k
  double setting_factor(uint32_t row, uint32_t k) const;

  uint32_t lh_column(uint32_t row, uint32_t aip) const;

  // per-slot maximum over the aip's r estimators: a slot counts only if every
  // row saw it inside the window
  SlidingCounterVector union_sle(uint32_t aip) const;

  struct Estimate {
    double value = 0.0;
    double corrected_weight = 0.0;
    uint64_t usle_weight = 0;
    double sf_product = 0.0;
    bool saturated = false;  // linear-counting ceiling hit
  };

  // setting factors are a whole-row scan; computing them once per window and
  // reusing the context across candidates is much cheaper than per call
  struct EstimateContext {
    uint32_t k = 1;
    std::vector<double> setting_factors;
    double sf_product = 0.0;
  };
  EstimateContext make_estimate_context(uint32_t k) const;

  // throws SaturationError when the setting-factor product is within
  // kSaturationEps of 1 (array too full to correct)
  Estimate estimate(uint32_t aip, const EstimateContext& ctx) const;
  Estimate estimate(uint32_t aip, uint32_t k) const;

  void merge_min(const Slea& other);
  std::string compatibility_mismatch(const Slea& other) const;

  std::span<const uint16_t> cells() const { return cells_; }
  std::span<uint16_t> cells_mut() { return cells_; }
  std::span<const uint16_t> row(uint32_t i) const;
  std::span<const uint16_t> sle(uint32_t row, uint32_t j) const;

 private:
  SleaConfig cfg_;
  SeededHash h3_;
  std::vector<SeededHash> lh_;
  size_t row_len_ = 0;
  std::vector<uint16_t> cells_;
  uint64_t slides_ = 0;
};

Slea merge(const Slea& a, const Slea& b);

}  // namespace slidecard
