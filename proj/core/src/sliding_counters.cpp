#include "slidecard/sliding_counters.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>

#include "slidecard/errors.hpp"

namespace slidecard {

namespace counter_ops {

void record(std::span<uint16_t> counters, size_t idx) {
  if (idx >= counters.size()) throw std::out_of_range("record: slot index out of range");
  std::atomic_ref<uint16_t>(counters[idx]).store(0, std::memory_order_relaxed);
}

void slide(std::span<uint16_t> counters) {
  uint16_t* p = counters.data();
  const size_t n = counters.size();
  for (size_t i = 0; i < n; ++i) p[i] += static_cast<uint16_t>(p[i] != kNeverSet);
}

size_t weight(std::span<const uint16_t> counters, uint32_t k) {
  const uint16_t* p = counters.data();
  const size_t n = counters.size();
  size_t count = 0;
  if (k > kNeverSet) k = kNeverSet;  // kNeverSet itself can never be inside a window
  const uint16_t kk = static_cast<uint16_t>(k);
  for (size_t i = 0; i < n; ++i) count += p[i] < kk;
  return count;
}

void min_into(std::span<uint16_t> acc, std::span<const uint16_t> other) {
  if (acc.size() != other.size())
    throw std::invalid_argument("min_into: length mismatch");
  for (size_t i = 0; i < acc.size(); ++i)
    if (other[i] < acc[i]) acc[i] = other[i];
}

void max_into(std::span<uint16_t> acc, std::span<const uint16_t> other) {
  if (acc.size() != other.size())
    throw std::invalid_argument("max_into: length mismatch");
  for (size_t i = 0; i < acc.size(); ++i)
    if (other[i] > acc[i]) acc[i] = other[i];
}

}  // namespace counter_ops

double detection_rho() { return 0.99 * (1.0 - std::exp(-1.0 / 3.0)); }

void SlidingCounterVector::record(size_t idx) { counter_ops::record(counters_, idx); }

SlidingCounterVector combine_min(const SlidingCounterVector& a,
                                 const SlidingCounterVector& b) {
  SlidingCounterVector out = a;
  counter_ops::min_into(out.span(), b.span());
  return out;
}

SlidingCounterVector combine_max(const SlidingCounterVector& a,
                                 const SlidingCounterVector& b) {
  SlidingCounterVector out = a;
  counter_ops::max_into(out.span(), b.span());
  return out;
}

}  // namespace slidecard
