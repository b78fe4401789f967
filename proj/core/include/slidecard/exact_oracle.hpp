#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "slidecard/trace.hpp"

namespace slidecard {

struct TruthEntry {
  uint32_t aip = 0;
  uint64_t cardinality = 0;
};

struct TruthWindow {
  uint64_t window_end_slice = 0;
  bool partial = false;
  std::vector<TruthEntry> supers;  // cardinality >= theta; card desc, aip asc
};

// Exact per-host distinct-peer counts over the sliding window, kept as a
// per-pair last-seen-slice map so memory grows with distinct pairs rather
// than with pairs-times-window. Emits on the same cadence as the engine:
// one window per completed slice from k-1 on, plus a partial one at stream
// end.
class ExactSlidingOracle {
 public:
  struct Options {
    uint64_t theta = 1024;
    uint32_t k = 300;
    std::optional<uint64_t> t0_us;
    uint64_t slice_us = 1'000'000;
    uint64_t regression_tolerance_us = 0;
    uint64_t max_pairs = 100'000'000;  // explicit budget; never truncates silently
  };

  using WindowSink = std::function<void(const TruthWindow&)>;

  ExactSlidingOracle(const Options& opt, WindowSink sink);

  void process(const TraceRecord& rec);
  void finish();

  // exact distinct-peer count of one host in the window ending at the
  // current slice
  uint64_t cardinality(uint32_t aip) const;

  uint64_t distinct_pairs() const { return last_seen_.size(); }

 private:
  void complete_slice();
  TruthWindow snapshot(bool partial) const;
  void expire(uint64_t slice);

  Options opt_;
  WindowSink sink_;
  uint64_t current_ = 0;
  bool active_ = false;
  std::optional<uint64_t> t0_;
  std::optional<uint64_t> max_ts_;
  uint64_t clamped_ = 0;

  std::unordered_map<uint64_t, uint64_t> last_seen_;      // aip<<32|bip -> slice
  std::unordered_map<uint32_t, uint64_t> live_count_;     // aip -> pairs inside window
  std::unordered_map<uint64_t, std::vector<uint64_t>> expiry_;  // slice -> pair keys
};

// single-shot convenience over a record vector
std::vector<TruthWindow> exact_detect(std::span<const TraceRecord> records,
                                      const ExactSlidingOracle::Options& opt);

// detection-accuracy ratios, all normalized by the true super-point count
struct AccuracyResult {
  uint64_t window_end_slice = 0;
  uint64_t n_true = 0;
  uint64_t n_detected = 0;
  uint64_t n_false_pos = 0;
  uint64_t n_false_neg = 0;
  double fpr = 0.0;
  double fnr = 0.0;
  double tfr = 0.0;
  bool defined = false;  // false when no true super points exist
};

AccuracyResult score(uint64_t window_end_slice, std::span<const uint32_t> detected,
                     std::span<const TruthEntry> truth);

}  // namespace slidecard
