#include "slidecard/slea.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>

#include "slidecard/errors.hpp"

namespace slidecard {

Slea::Slea(const SleaConfig& cfg) : cfg_(cfg), h3_(cfg.seed_h3) {
  if (cfg_.r == 0) throw ConfigError("slea: need at least one row");
  if (cfg_.r > 64) throw ConfigError("slea: at most 64 rows supported");
  if (cfg_.eta < 2) throw ConfigError("slea: eta must be at least 2");
  if (cfg_.delta == 0 || cfg_.delta > cfg_.eta)
    throw ConfigError("slea: delta must satisfy 0 < delta <= eta");
  if (cfg_.q > 30) throw ConfigError("slea: q must be at most 30");
  if (cfg_.seeds_lh.size() != cfg_.r)
    throw ConfigError("slea: need exactly one row hash seed per row");
  row_len_ = row_length_for(cfg_);
  const size_t total = row_len_ * cfg_.r;
  if (total > (size_t{1} << 31))
    throw ConfigError("slea: parameter set needs more than 2^31 counters");
  cells_.assign(total, kNeverSet);
  lh_.reserve(cfg_.r);
  for (uint64_t seed : cfg_.seeds_lh) lh_.emplace_back(seed);
}

double Slea::memory_reduction_ratio() const {
  const double full = static_cast<double>(cfg_.eta) * static_cast<double>(uint64_t{1} << cfg_.q);
  return 1.0 - static_cast<double>(row_len_) / full;
}

uint32_t Slea::lh_column(uint32_t row, uint32_t aip) const {
  return static_cast<uint32_t>(lh_[row](aip)) & ((uint32_t{1} << cfg_.q) - 1);
}

void Slea::update(uint32_t aip, uint32_t bip) {
  const uint32_t slot = le_index(bip, cfg_.eta, h3_);
  for (uint32_t i = 0; i < cfg_.r; ++i) {
    const size_t off = static_cast<size_t>(i) * row_len_ +
                       static_cast<size_t>(lh_column(i, aip)) * cfg_.delta + slot;
    std::atomic_ref<uint16_t>(cells_[off]).store(0, std::memory_order_relaxed);
  }
}

void Slea::slide() {
  counter_ops::slide(cells_);
  ++slides_;
}

void Slea::reinitialize() {
  std::fill(cells_.begin(), cells_.end(), kNeverSet);
  ++slides_;
}

double Slea::setting_factor(uint32_t row, uint32_t k) const {
  if (row >= cfg_.r) throw std::out_of_range("slea: row out of range");
  const size_t w = counter_ops::weight(this->row(row), k);
  return static_cast<double>(w) / static_cast<double>(row_len_);
}

std::span<const uint16_t> Slea::row(uint32_t i) const {
  if (i >= cfg_.r) throw std::out_of_range("slea: row out of range");
  return {cells_.data() + static_cast<size_t>(i) * row_len_, row_len_};
}

std::span<const uint16_t> Slea::sle(uint32_t row, uint32_t j) const {
  if (row >= cfg_.r || j >= (uint64_t{1} << cfg_.q))
    throw std::out_of_range("slea: estimator out of range");
  return {cells_.data() + static_cast<size_t>(row) * row_len_ +
              static_cast<size_t>(j) * cfg_.delta,
          cfg_.eta};
}

SlidingCounterVector Slea::union_sle(uint32_t aip) const {
  SlidingCounterVector out(cfg_.eta);
  auto acc = out.span();
  std::fill(acc.begin(), acc.end(), uint16_t{0});
  for (uint32_t i = 0; i < cfg_.r; ++i)
    counter_ops::max_into(acc, sle(i, lh_column(i, aip)));
  return out;
}

Slea::EstimateContext Slea::make_estimate_context(uint32_t k) const {
  EstimateContext ctx;
  ctx.k = k;
  ctx.setting_factors.reserve(cfg_.r);
  ctx.sf_product = 1.0;
  for (uint32_t i = 0; i < cfg_.r; ++i) {
    ctx.setting_factors.push_back(setting_factor(i, k));
    ctx.sf_product *= ctx.setting_factors.back();
  }
  return ctx;
}

Slea::Estimate Slea::estimate(uint32_t aip, const EstimateContext& ctx) const {
  if (ctx.sf_product >= 1.0 - kSaturationEps)
    throw SaturationError("slea estimate: array saturated, setting-factor product ~ 1");

  // fused union + weight: a slot is inside the window only if it is inside
  // it in every row
  const uint16_t* rows[64];
  for (uint32_t i = 0; i < cfg_.r; ++i)
    rows[i] = cells_.data() + static_cast<size_t>(i) * row_len_ +
              static_cast<size_t>(lh_column(i, aip)) * cfg_.delta;
  const uint16_t kk = static_cast<uint16_t>(ctx.k > kNeverSet ? kNeverSet : ctx.k);
  uint64_t w = 0;
  for (uint32_t z = 0; z < cfg_.eta; ++z) {
    uint16_t m = 0;
    for (uint32_t i = 0; i < cfg_.r; ++i)
      if (rows[i][z] > m) m = rows[i][z];
    w += m < kk;
  }

  Estimate est;
  est.usle_weight = w;
  est.sf_product = ctx.sf_product;
  est.corrected_weight =
      corrected_weight(static_cast<double>(w), ctx.sf_product, cfg_.eta);
  LinearEstimate le = le_estimate(est.corrected_weight, cfg_.eta);
  est.value = le.value;
  est.saturated = le.saturated;
  return est;
}

Slea::Estimate Slea::estimate(uint32_t aip, uint32_t k) const {
  return estimate(aip, make_estimate_context(k));
}

std::string Slea::compatibility_mismatch(const Slea& other) const {
  if (cfg_.q != other.cfg_.q) return "q_prime";
  if (cfg_.r != other.cfg_.r) return "r_prime";
  if (cfg_.delta != other.cfg_.delta) return "delta_prime";
  if (cfg_.eta != other.cfg_.eta) return "eta_prime";
  if (cfg_.seed_h3 != other.cfg_.seed_h3) return "seed_h3";
  if (cfg_.seeds_lh != other.cfg_.seeds_lh) return "seeds_lh";
  if (slides_ != other.slides_) return "slice position";
  return {};
}

void Slea::merge_min(const Slea& other) {
  if (auto why = compatibility_mismatch(other); !why.empty())
    throw IncompatibleSketchError("slea merge: " + why + " differs");
  counter_ops::min_into(cells_, other.cells_);
}

Slea merge(const Slea& a, const Slea& b) {
  Slea out = a;
  out.merge_min(b);
  return out;
}

}  // namespace slidecard
