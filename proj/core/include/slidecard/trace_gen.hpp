#pragma once

#include <cstdint>
#include <string>

#include "slidecard/trace.hpp"

namespace slidecard {

// Synthetic traffic: a Zipf-ish background population plus planted heavy
// hosts whose peer sets cycle every `planted_spread` slices, so any window of
// at least that many slices sees the full peer set. Deterministic per seed.
struct TraceGenSpec {
  uint64_t slices = 600;
  uint64_t slice_us = 1'000'000;
  uint64_t t0_us = 1'400'000'000'000'000;
  CidrPrefix anet{0x0A000000, 8};  // 10.0.0.0/8

  uint64_t background_hosts = 0;
  uint32_t background_max_cardinality = 0;
  double background_zipf_exponent = 0.5;

  uint64_t planted_supers = 0;
  uint32_t planted_cardinality_min = 0;
  uint32_t planted_cardinality_max = 0;
  uint32_t planted_spread = 1;

  uint64_t window_k = 1;  // window length used for the ground-truth sidecar

  static TraceGenSpec parse(const std::string& text);  // key = value lines
  static TraceGenSpec load_file(const std::string& path);
  void validate() const;  // throws ConfigError on an infeasible spec
};

struct TraceGenResult {
  uint64_t records = 0;
  uint64_t truth_rows = 0;
};

// writes <out_prefix>.trace and <out_prefix>.truth.csv (window_end_slice,
// aip, exact_cardinality for every planted host on the report cadence)
TraceGenResult gen_trace(const TraceGenSpec& spec, uint64_t seed,
                         const std::string& out_prefix);

}  // namespace slidecard
