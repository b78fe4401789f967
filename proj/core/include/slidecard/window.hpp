#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "slidecard/report.hpp"
#include "slidecard/rsra.hpp"
#include "slidecard/slea.hpp"
#include "slidecard/trace.hpp"

namespace slidecard {

struct WindowConfig {
  std::optional<uint64_t> t0_us;  // defaults to the first record's timestamp
  uint64_t slice_us = 1'000'000;
  uint32_t k = 300;
  uint64_t theta = 1024;
  bool reinit_per_window = false;  // strict discrete windows; needs k == 1
  uint64_t regression_tolerance_us = 0;
  bool keep_below_threshold = false;  // keep sub-theta candidates in reports
  uint32_t workers = 1;
  uint64_t tuple_cap = uint64_t{1} << 22;

  void validate() const;  // throws ConfigError
};

// slices are half-open: [t0 + s*d, t0 + (s+1)*d)
uint64_t slice_index(uint64_t ts_us, uint64_t t0_us, uint64_t slice_us);

// Folds timestamps into slice indices, clamping small regressions into the
// current slice and rejecting larger ones.
class SliceClock {
 public:
  SliceClock(std::optional<uint64_t> t0_us, uint64_t slice_us, uint64_t tolerance_us)
      : t0_(t0_us), slice_us_(slice_us), tolerance_us_(tolerance_us) {}

  // slice for this record; never smaller than any previously returned slice
  uint64_t place(uint64_t ts_us);

  bool started() const { return max_ts_.has_value(); }
  uint64_t t0() const { return *t0_; }
  uint64_t clamped() const { return clamped_; }

 private:
  std::optional<uint64_t> t0_;
  uint64_t slice_us_;
  uint64_t tolerance_us_;
  std::optional<uint64_t> max_ts_;
  uint64_t clamped_ = 0;
};

// One detection pass over the current window: extract hot columns,
// reconstruct candidate hosts, estimate each one and keep those at or above
// theta (all of them in keep_below_threshold mode).
DetectionReport run_detection(const Rsra& rsra, const Slea& slea,
                              uint64_t window_end_slice, bool partial,
                              const WindowConfig& cfg);

// Drives both sketch arrays through a time-ordered record stream: buffers a
// slice, applies it (optionally with several workers), reports at every
// completed slice once the first window has filled, then ages the counters.
class WindowEngine {
 public:
  using ReportSink = std::function<void(const DetectionReport&)>;

  WindowEngine(const WindowConfig& cfg, Rsra rsra, Slea slea, ReportSink sink);

  void process(const TraceRecord& rec);

  // completes every slice before `slice`, as wall clock would; data-free
  // slices still report and age the counters
  void advance_to_slice(uint64_t slice);

  // flushes the open slice and emits its report flagged partial
  void finish();

  const Rsra& rsra() const { return rsra_; }
  const Slea& slea() const { return slea_; }
  uint64_t current_slice() const { return current_; }
  uint64_t records() const { return records_; }
  uint64_t clamped() const { return clock_.clamped(); }

 private:
  void flush_pending();
  void complete_slice();  // report (when due) then slide

  WindowConfig cfg_;
  Rsra rsra_;
  Slea slea_;
  ReportSink sink_;
  SliceClock clock_;
  uint64_t current_ = 0;
  bool active_ = false;  // a record or advance has initialized the clock
  uint64_t records_ = 0;
  std::vector<TraceRecord> pending_;
};

}  // namespace slidecard
