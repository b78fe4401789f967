#include "slidecard/window.hpp"

#include <algorithm>

#include "slidecard/errors.hpp"
#include "slidecard/parallel.hpp"
#include "slidecard/reconstruct.hpp"

namespace slidecard {

void WindowConfig::validate() const {
  if (slice_us == 0) throw ConfigError("slice duration must be positive");
  if (k == 0 || k > 65534) throw ConfigError("k must be in [1, 65534]");
  if (reinit_per_window && k != 1)
    throw ConfigError("reinit-per-window is the strict discrete mode and needs k = 1");
  if (workers == 0) throw ConfigError("workers must be at least 1");
}

uint64_t slice_index(uint64_t ts_us, uint64_t t0_us, uint64_t slice_us) {
  if (ts_us < t0_us) throw OrderingError("timestamp precedes the stream start");
  return (ts_us - t0_us) / slice_us;
}

uint64_t SliceClock::place(uint64_t ts_us) {
  if (!t0_) t0_ = ts_us;
  if (max_ts_ && ts_us < *max_ts_) {
    if (*max_ts_ - ts_us > tolerance_us_)
      throw OrderingError("timestamp regression beyond tolerance");
    ++clamped_;
    return slice_index(*max_ts_, *t0_, slice_us_);
  }
  if (!max_ts_ || ts_us > *max_ts_) max_ts_ = ts_us;
  return slice_index(ts_us, *t0_, slice_us_);
}

DetectionReport run_detection(const Rsra& rsra, const Slea& slea,
                              uint64_t window_end_slice, bool partial,
                              const WindowConfig& cfg) {
  DetectionReport report;
  report.window_end_slice = window_end_slice;
  report.partial = partial;

  const auto hot = rsra.extract_hot(cfg.k);
  report.hot_per_row.reserve(hot.size());
  for (const auto& row : hot) report.hot_per_row.push_back(row.size());

  ReconstructOptions ropt;
  ropt.tuple_cap = cfg.tuple_cap;
  ropt.workers = cfg.workers;
  const auto rec = reconstruct_candidates(hot, rsra.hash_group(), ropt);
  report.overflow = rec.overflow;
  report.candidate_count = rec.addresses.size();

  const auto ctx = slea.make_estimate_context(cfg.k);
  report.sf_product = ctx.sf_product;
  if (ctx.sf_product >= 1.0 - kSaturationEps) {
    report.slea_saturated = true;
    return report;
  }

  std::vector<ReportEntry> entries(rec.addresses.size());
  parallel_chunks(rec.addresses.size(), cfg.workers,
                  [&](size_t, size_t begin, size_t end) {
                    for (size_t i = begin; i < end; ++i) {
                      const auto est = slea.estimate(rec.addresses[i], ctx);
                      entries[i] = ReportEntry{rec.addresses[i], est.value, est.saturated};
                    }
                  });
  const double theta = static_cast<double>(cfg.theta);
  for (auto& e : entries)
    if (cfg.keep_below_threshold || e.estimate >= theta) report.entries.push_back(e);
  std::sort(report.entries.begin(), report.entries.end(),
            [](const ReportEntry& a, const ReportEntry& b) {
              if (a.estimate != b.estimate) return a.estimate > b.estimate;
              return a.aip < b.aip;
            });
  return report;
}

WindowEngine::WindowEngine(const WindowConfig& cfg, Rsra rsra, Slea slea, ReportSink sink)
    : cfg_(cfg),
      rsra_(std::move(rsra)),
      slea_(std::move(slea)),
      sink_(std::move(sink)),
      clock_(cfg.t0_us, cfg.slice_us, cfg.regression_tolerance_us) {
  cfg_.validate();
}

void WindowEngine::flush_pending() {
  if (pending_.empty()) return;
  parallel_chunks(pending_.size(), cfg_.workers, [this](size_t, size_t begin, size_t end) {
    for (size_t i = begin; i < end; ++i) {
      rsra_.update(pending_[i].aip, pending_[i].bip);
      slea_.update(pending_[i].aip, pending_[i].bip);
    }
  });
  pending_.clear();
}

void WindowEngine::complete_slice() {
  if (current_ + 1 >= cfg_.k && sink_)
    sink_(run_detection(rsra_, slea_, current_, /*partial=*/false, cfg_));
  if (cfg_.reinit_per_window) {
    rsra_.reinitialize();
    slea_.reinitialize();
  } else {
    rsra_.slide();
    slea_.slide();
  }
  ++current_;
}

void WindowEngine::advance_to_slice(uint64_t slice) {
  if (!active_ && !clock_.started()) {
    if (!cfg_.t0_us) throw ConfigError("cannot advance slices before the stream start is known");
    active_ = true;
  }
  flush_pending();
  while (current_ < slice) complete_slice();
}

void WindowEngine::process(const TraceRecord& rec) {
  const uint64_t s = clock_.place(rec.ts_us);
  active_ = true;
  if (s > current_) {
    flush_pending();
    while (current_ < s) complete_slice();
  }
  pending_.push_back(rec);
  ++records_;
}

void WindowEngine::finish() {
  if (!active_) return;  // empty stream: no reports
  flush_pending();
  if (sink_) sink_(run_detection(rsra_, slea_, current_, /*partial=*/true, cfg_));
}

}  // namespace slidecard
