#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "slidecard/rng.hpp"
#include "slidecard/sliding_counters.hpp"

using namespace slidecard;

TEST_CASE("fresh vector: all counters at the never-set value") {
  SlidingCounterVector v(8);
  for (size_t i = 0; i < 8; ++i) CHECK(v[i] == kNeverSet);
  for (uint32_t k = 1; k <= 65535; k *= 3) CHECK(v.weight(k) == 0);
}

TEST_CASE("record: zero, idempotent, commutative, bounds-checked") {
  SlidingCounterVector v(8);
  v.record(3);
  CHECK(v[3] == 0);
  CHECK(v.weight(1) == 1);
  v.record(3);
  CHECK(v[3] == 0);
  CHECK(v.weight(1) == 1);

  SlidingCounterVector a(8), b(8);
  a.record(1);
  a.record(5);
  b.record(5);
  b.record(1);
  CHECK(a == b);

  CHECK_THROWS_AS(v.record(8), std::out_of_range);
}

TEST_CASE("slide: increments and saturates") {
  SlidingCounterVector v(4);
  v.record(0);
  v.slide();
  CHECK(v[0] == 1);
  CHECK(v[1] == kNeverSet);  // init value persists through saturation
}

TEST_CASE("window expiry boundary") {
  const uint32_t k = 5;
  SlidingCounterVector v(8);
  v.record(2);
  for (uint32_t i = 0; i < k; ++i) v.slide();
  CHECK(v.weight(k) == 0);
  CHECK(v.weight(k + 1) == 1);
}

TEST_CASE("weight counts strictly-below-k slots") {
  SlidingCounterVector v(8);
  auto s = v.span();
  const uint16_t values[8] = {0, 2, 5, kNeverSet, kNeverSet, kNeverSet, kNeverSet, kNeverSet};
  std::copy(values, values + 8, s.begin());
  CHECK(v.weight(3) == 2);
  CHECK(v.weight(6) == 3);
  CHECK(v.weight(1) == 1);
}

TEST_CASE("hot threshold at eta = 8") {
  const double rho = detection_rho();
  CHECK(rho == doctest::Approx(0.280634).epsilon(1e-5));
  SlidingCounterVector v(8);
  v.record(0);
  v.record(1);
  CHECK_FALSE(v.hot(1, rho));  // weight 2 < 2.2451
  v.record(2);
  CHECK(v.hot(1, rho));  // weight 3
  SlidingCounterVector w(8);
  CHECK_FALSE(w.hot(1, rho));
  for (size_t i = 0; i < 8; ++i) w.record(i);
  CHECK(w.hot(1, 1.0));
}

TEST_CASE("combine_min: identity, idempotence, commutativity") {
  Rng rng(3);
  SlidingCounterVector v(16), fresh(16);
  auto s = v.span();
  for (auto& c : s) c = static_cast<uint16_t>(rng.below(70000));
  CHECK(combine_min(v, fresh) == v);
  CHECK(combine_min(v, v) == v);
  SlidingCounterVector w(16);
  for (auto& c : w.span()) c = static_cast<uint16_t>(rng.below(70000));
  CHECK(combine_min(v, w) == combine_min(w, v));
  CHECK_THROWS_AS((void)combine_min(v, SlidingCounterVector(8)), std::invalid_argument);
}

TEST_CASE("combine_max: absorbing never-set, window intersection") {
  SlidingCounterVector v(4), fresh(4);
  v.record(0);
  v.record(1);
  auto m = combine_max(v, fresh);
  for (size_t i = 0; i < 4; ++i) CHECK(m[i] == kNeverSet);

  SlidingCounterVector a(8), b(8);
  Rng rng(4);
  for (auto& c : a.span()) c = static_cast<uint16_t>(rng.below(70000));
  for (auto& c : b.span()) c = static_cast<uint16_t>(rng.below(70000));
  auto mx = combine_max(a, b);
  const uint32_t k = 100;
  for (size_t i = 0; i < 8; ++i)
    CHECK((mx[i] < k) == (a[i] < k && b[i] < k));
}

// brute-force oracle: remember the slide count at every record and derive
// each counter independently
namespace {
struct SlotOracle {
  explicit SlotOracle(size_t n) : last_record(n, -1) {}
  std::vector<long> last_record;  // slide count when last recorded, -1 never
  long slides = 0;

  void record(size_t i) { last_record[i] = slides; }
  void slide() { ++slides; }
  uint16_t value(size_t i) const {
    if (last_record[i] < 0) return kNeverSet;
    const long age = slides - last_record[i];
    return age >= kNeverSet ? kNeverSet : static_cast<uint16_t>(age);
  }
  size_t weight(uint32_t k) const {
    size_t n = 0;
    for (size_t i = 0; i < last_record.size(); ++i) n += value(i) < k;
    return n;
  }
};
}  // namespace

TEST_CASE("streaming equivalence against the per-slot timestamp oracle") {
  Rng rng(2024);
  for (int trial = 0; trial < 30; ++trial) {
    const size_t n = 1 + rng.below(24);
    SlidingCounterVector v(n);
    SlotOracle oracle(n);
    const int steps = 200;
    for (int s = 0; s < steps; ++s) {
      if (rng.chance(0.25)) {
        v.slide();
        oracle.slide();
      } else {
        const size_t idx = rng.below(n);
        v.record(idx);
        oracle.record(idx);
      }
      for (uint32_t k : {1u, 2u, 3u, 7u, 50u})
        CHECK(v.weight(k) == oracle.weight(k));
    }
    for (size_t i = 0; i < n; ++i) CHECK(v[i] == oracle.value(i));
  }
}

TEST_CASE("min-merge of a partitioned record schedule equals the whole") {
  Rng rng(7);
  const size_t n = 32;
  SlidingCounterVector whole(n), part_a(n), part_b(n);
  for (int step = 0; step < 400; ++step) {
    if (rng.chance(0.2)) {
      whole.slide();
      part_a.slide();
      part_b.slide();  // slides stay synchronized across parts
    } else {
      const size_t idx = rng.below(n);
      whole.record(idx);
      (rng.chance(0.5) ? part_a : part_b).record(idx);
    }
  }
  CHECK(combine_min(part_a, part_b) == whole);
}

TEST_CASE("discrete specialization: k = 1 matches a bit-vector reference") {
  // with k = 1 the weight counts slots set inside the current slice, which is
  // exactly the plain bit-vector rule
  Rng rng(11);
  const size_t n = 16;
  SlidingCounterVector v(n);
  std::vector<bool> bits(n, false);
  for (int slice = 0; slice < 10; ++slice) {
    const int records = static_cast<int>(rng.below(12));
    for (int i = 0; i < records; ++i) {
      const size_t idx = rng.below(n);
      v.record(idx);
      bits[idx] = true;
    }
    const size_t bit_weight = std::count(bits.begin(), bits.end(), true);
    CHECK(v.weight(1) == bit_weight);
    v.slide();
    std::fill(bits.begin(), bits.end(), false);
  }
}
