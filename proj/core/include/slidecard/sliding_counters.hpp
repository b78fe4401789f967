#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace slidecard {

// "never set / expired" distance; also the initial value of every counter
inline constexpr uint16_t kNeverSet = 0xFFFF;

// Kernels over raw counter storage. Each counter holds the number of slices
// elapsed since its slot was last set.
namespace counter_ops {

// set one slot to distance 0; safe to call concurrently, including on the
// same slot (idempotent relaxed store)
void record(std::span<uint16_t> counters, size_t idx);

// +1 on every counter, saturating at kNeverSet; requires exclusive access
void slide(std::span<uint16_t> counters);

// |{v : v < k}|
size_t weight(std::span<const uint16_t> counters, uint32_t k);

// per-slot minimum / maximum into `acc`
void min_into(std::span<uint16_t> acc, std::span<const uint16_t> other);
void max_into(std::span<uint16_t> acc, std::span<const uint16_t> other);

}  // namespace counter_ops

// occupancy fraction at which a rough estimator is considered hot:
// 0.99 * (1 - e^(-1/3))
double detection_rho();

class SlidingCounterVector {
 public:
  SlidingCounterVector() = default;
  explicit SlidingCounterVector(size_t length) : counters_(length, kNeverSet) {}

  size_t size() const { return counters_.size(); }

  void record(size_t idx);
  void slide() { counter_ops::slide(counters_); }
  size_t weight(uint32_t k) const { return counter_ops::weight(counters_, k); }

  // weight under window k reaches rho * length
  bool hot(uint32_t k, double rho) const {
    return static_cast<double>(weight(k)) >= rho * static_cast<double>(size());
  }

  uint16_t operator[](size_t i) const { return counters_[i]; }
  std::span<uint16_t> span() { return counters_; }
  std::span<const uint16_t> span() const { return counters_; }

  bool operator==(const SlidingCounterVector&) const = default;

 private:
  std::vector<uint16_t> counters_;
};

// per-slot minimum: most recent sighting wins; the distributed union
SlidingCounterVector combine_min(const SlidingCounterVector& a,
                                 const SlidingCounterVector& b);

// per-slot maximum: a slot stays inside window k only if it is inside k in
// both inputs; the intersection filter
SlidingCounterVector combine_max(const SlidingCounterVector& a,
                                 const SlidingCounterVector& b);

}  // namespace slidecard
