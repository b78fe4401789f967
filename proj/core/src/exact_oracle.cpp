#include "slidecard/exact_oracle.hpp"

#include <algorithm>

#include "slidecard/errors.hpp"
#include "slidecard/window.hpp"

namespace slidecard {

namespace {
uint64_t pair_key(uint32_t aip, uint32_t bip) {
  return (static_cast<uint64_t>(aip) << 32) | bip;
}
}  // namespace

ExactSlidingOracle::ExactSlidingOracle(const Options& opt, WindowSink sink)
    : opt_(opt), sink_(std::move(sink)), t0_(opt.t0_us) {
  if (opt_.k == 0 || opt_.k > 65534) throw ConfigError("k must be in [1, 65534]");
  if (opt_.slice_us == 0) throw ConfigError("slice duration must be positive");
}

void ExactSlidingOracle::process(const TraceRecord& rec) {
  uint64_t ts = rec.ts_us;
  if (!t0_) t0_ = ts;
  if (max_ts_ && ts < *max_ts_) {
    if (*max_ts_ - ts > opt_.regression_tolerance_us)
      throw OrderingError("timestamp regression beyond tolerance");
    ++clamped_;
    ts = *max_ts_;
  }
  if (!max_ts_ || ts > *max_ts_) max_ts_ = ts;
  const uint64_t s = slice_index(ts, *t0_, opt_.slice_us);
  active_ = true;
  while (current_ < s) complete_slice();

  const uint64_t key = pair_key(rec.aip, rec.bip);
  auto [it, inserted] = last_seen_.try_emplace(key, current_);
  if (inserted) {
    if (last_seen_.size() > opt_.max_pairs)
      throw ResourceError("exact oracle: distinct pair budget exceeded");
    ++live_count_[rec.aip];
    expiry_[current_].push_back(key);
    return;
  }
  if (it->second == current_) return;  // already counted this slice
  const uint64_t window_start = current_ + 1 >= opt_.k ? current_ + 1 - opt_.k : 0;
  if (it->second < window_start) ++live_count_[rec.aip];  // was expired
  it->second = current_;
  expiry_[current_].push_back(key);
}

void ExactSlidingOracle::expire(uint64_t slice) {
  auto bucket = expiry_.find(slice);
  if (bucket == expiry_.end()) return;
  for (uint64_t key : bucket->second) {
    auto it = last_seen_.find(key);
    if (it != last_seen_.end() && it->second == slice) {
      const uint32_t aip = static_cast<uint32_t>(key >> 32);
      auto lc = live_count_.find(aip);
      if (lc != live_count_.end() && lc->second > 0) --lc->second;
    }
  }
  expiry_.erase(bucket);
}

void ExactSlidingOracle::complete_slice() {
  if (current_ + 1 >= opt_.k && sink_) sink_(snapshot(false));
  // advancing to current_+1 pushes the slice k windows back out of scope
  if (current_ + 1 >= opt_.k) expire(current_ + 1 - opt_.k);
  ++current_;
}

TruthWindow ExactSlidingOracle::snapshot(bool partial) const {
  TruthWindow w;
  w.window_end_slice = current_;
  w.partial = partial;
  for (const auto& [aip, count] : live_count_)
    if (count >= opt_.theta) w.supers.push_back(TruthEntry{aip, count});
  std::sort(w.supers.begin(), w.supers.end(), [](const TruthEntry& a, const TruthEntry& b) {
    if (a.cardinality != b.cardinality) return a.cardinality > b.cardinality;
    return a.aip < b.aip;
  });
  return w;
}

void ExactSlidingOracle::finish() {
  if (!active_ || !sink_) return;
  sink_(snapshot(true));
}

uint64_t ExactSlidingOracle::cardinality(uint32_t aip) const {
  auto it = live_count_.find(aip);
  return it == live_count_.end() ? 0 : it->second;
}

std::vector<TruthWindow> exact_detect(std::span<const TraceRecord> records,
                                      const ExactSlidingOracle::Options& opt) {
  std::vector<TruthWindow> out;
  ExactSlidingOracle oracle(opt, [&out](const TruthWindow& w) { out.push_back(w); });
  for (const auto& rec : records) oracle.process(rec);
  oracle.finish();
  return out;
}

AccuracyResult score(uint64_t window_end_slice, std::span<const uint32_t> detected,
                     std::span<const TruthEntry> truth) {
  AccuracyResult r;
  r.window_end_slice = window_end_slice;
  r.n_true = truth.size();
  r.n_detected = detected.size();

  std::vector<uint32_t> det(detected.begin(), detected.end());
  std::sort(det.begin(), det.end());
  det.erase(std::unique(det.begin(), det.end()), det.end());
  std::vector<uint32_t> tru;
  tru.reserve(truth.size());
  for (const auto& t : truth) tru.push_back(t.aip);
  std::sort(tru.begin(), tru.end());

  for (uint32_t a : det)
    if (!std::binary_search(tru.begin(), tru.end(), a)) ++r.n_false_pos;
  for (uint32_t a : tru)
    if (!std::binary_search(det.begin(), det.end(), a)) ++r.n_false_neg;

  if (r.n_true > 0) {
    r.defined = true;
    r.fpr = static_cast<double>(r.n_false_pos) / static_cast<double>(r.n_true);
    r.fnr = static_cast<double>(r.n_false_neg) / static_cast<double>(r.n_true);
    r.tfr = r.fpr + r.fnr;
  }
  return r;
}

}  // namespace slidecard
