#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace slidecard {

struct ReportEntry {
  uint32_t aip = 0;
  double estimate = 0.0;
  bool saturated = false;  // estimate hit the linear-counting ceiling
};

// per-window detection output plus the diagnostics operators ask about first
struct DetectionReport {
  uint64_t window_end_slice = 0;
  std::vector<ReportEntry> entries;  // estimate desc, then aip asc; unique aip

  uint64_t candidate_count = 0;          // reconstructed addresses before filtering
  std::vector<uint64_t> hot_per_row;
  double sf_product = 0.0;
  bool overflow = false;        // candidate-tuple budget exceeded, no candidates
  bool slea_saturated = false;  // estimator array too full, no estimates
  bool partial = false;         // emitted at stream end, slice not completed
};

// CSV with header "window_end_slice,aip,estimate,flags"; estimates carry two
// decimals; rows ordered estimate desc then aip asc; flags are |-joined
void write_report_header(std::ostream& out);
void write_report(const DetectionReport& report, std::ostream& out);

std::string report_to_csv(const std::vector<DetectionReport>& reports);

// one parsed CSV row; `value` holds the estimate or exact cardinality column
struct ReportRow {
  uint64_t window_end_slice = 0;
  uint32_t aip = 0;
  double value = 0.0;
  std::string flags;
};

// reads both detection reports and ground-truth files (any value column name)
std::vector<ReportRow> read_report_csv(std::istream& in, const std::string& origin);

}  // namespace slidecard
