#include "slidecard/rsra.hpp"

#include <atomic>

#include "slidecard/errors.hpp"

namespace slidecard {

Rsra::Rsra(const RsraConfig& cfg)
    : cfg_(cfg),
      group_(cfg.q, cfg.r, cfg.delta, cfg.seed_rhfg0),
      h1_(cfg.seed_h1),
      h2_(cfg.seed_h2) {
  if (cfg_.eta == 0) throw ConfigError("rsra: eta must be positive");
  if (cfg_.r < 3) throw ConfigError("rsra: need at least 3 rows to reconstruct hosts");
  if (cfg_.r > 64) throw ConfigError("rsra: at most 64 rows supported");
  if (!group_.covers_address())
    throw ConfigError("rsra: (r-2)*delta + q must reach the 32 address bits");
  const size_t total = (size_t{1} << cfg_.q) * cfg_.r * cfg_.eta;
  if (total > (size_t{1} << 31))
    throw ConfigError("rsra: parameter set needs more than 2^31 counters");
  cells_.assign(total, kNeverSet);
}

void Rsra::update(uint32_t aip, uint32_t bip) {
  auto slot = sample_gate(bip, cfg_.tau, cfg_.eta, h1_, h2_);
  if (!slot) return;
  uint32_t cols[64];
  group_.forward(aip, {cols, cfg_.r});
  for (uint32_t i = 0; i < cfg_.r; ++i)
    std::atomic_ref<uint16_t>(cells_[cell_index(i, cols[i]) + *slot])
        .store(0, std::memory_order_relaxed);
}

void Rsra::slide() {
  counter_ops::slide(cells_);
  ++slides_;
}

void Rsra::reinitialize() {
  std::fill(cells_.begin(), cells_.end(), kNeverSet);
  ++slides_;
}

std::vector<std::vector<uint32_t>> Rsra::extract_hot(uint32_t k) const {
  const double threshold = detection_rho() * static_cast<double>(cfg_.eta);
  std::vector<std::vector<uint32_t>> hot(cfg_.r);
  const uint64_t cols = columns();
  for (uint32_t row = 0; row < cfg_.r; ++row) {
    const uint16_t* p = cells_.data() + cell_index(row, 0);
    for (uint64_t col = 0; col < cols; ++col, p += cfg_.eta) {
      size_t w = counter_ops::weight({p, cfg_.eta}, k);
      if (static_cast<double>(w) >= threshold) hot[row].push_back(static_cast<uint32_t>(col));
    }
  }
  return hot;
}

std::span<const uint16_t> Rsra::sre(uint32_t row, uint32_t col) const {
  if (row >= cfg_.r || col >= columns()) throw std::out_of_range("rsra: row/column out of range");
  return {cells_.data() + cell_index(row, col), cfg_.eta};
}

std::string Rsra::compatibility_mismatch(const Rsra& other) const {
  if (cfg_.q != other.cfg_.q) return "q";
  if (cfg_.r != other.cfg_.r) return "r";
  if (cfg_.delta != other.cfg_.delta) return "delta";
  if (cfg_.eta != other.cfg_.eta) return "eta";
  if (cfg_.tau != other.cfg_.tau) return "tau";
  if (cfg_.seed_h1 != other.cfg_.seed_h1) return "seed_h1";
  if (cfg_.seed_h2 != other.cfg_.seed_h2) return "seed_h2";
  if (cfg_.seed_rhfg0 != other.cfg_.seed_rhfg0) return "seed_rhfg0";
  if (slides_ != other.slides_) return "slice position";
  return {};
}

void Rsra::merge_min(const Rsra& other) {
  if (auto why = compatibility_mismatch(other); !why.empty())
    throw IncompatibleSketchError("rsra merge: " + why + " differs");
  counter_ops::min_into(cells_, other.cells_);
}

Rsra merge(const Rsra& a, const Rsra& b) {
  Rsra out = a;
  out.merge_min(b);
  return out;
}

}  // namespace slidecard
