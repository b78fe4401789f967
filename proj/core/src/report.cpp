#include "slidecard/report.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "slidecard/errors.hpp"
#include "slidecard/trace.hpp"

namespace slidecard {

namespace {

std::string entry_flags(const ReportEntry& e, const DetectionReport& r) {
  std::string flags;
  auto add = [&flags](const char* f) {
    if (!flags.empty()) flags += '|';
    flags += f;
  };
  if (r.partial) add("partial");
  if (e.saturated) add("saturated");
  if (r.overflow) add("overflow");
  return flags;
}

}  // namespace

void write_report_header(std::ostream& out) {
  out << "window_end_slice,aip,estimate,flags\n";
}

void write_report(const DetectionReport& report, std::ostream& out) {
  std::vector<ReportEntry> rows = report.entries;
  std::sort(rows.begin(), rows.end(), [](const ReportEntry& a, const ReportEntry& b) {
    if (a.estimate != b.estimate) return a.estimate > b.estimate;
    return a.aip < b.aip;
  });
  char est[32];
  for (const auto& e : rows) {
    snprintf(est, sizeof(est), "%.2f", e.estimate);
    out << report.window_end_slice << ',' << format_ipv4(e.aip) << ',' << est << ','
        << entry_flags(e, report) << '\n';
  }
}

std::string report_to_csv(const std::vector<DetectionReport>& reports) {
  std::ostringstream out;
  write_report_header(out);
  for (const auto& r : reports) write_report(r, out);
  return out.str();
}

std::vector<ReportRow> read_report_csv(std::istream& in, const std::string& origin) {
  std::vector<ReportRow> rows;
  std::string line;
  uint64_t lineno = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;
      if (line.rfind("window_end_slice,", 0) == 0) continue;  // header row
    }
    std::vector<std::string> fields;
    size_t pos = 0;
    while (true) {
      size_t comma = line.find(',', pos);
      fields.push_back(line.substr(pos, comma == std::string::npos ? std::string::npos
                                                                   : comma - pos));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    if (fields.size() < 3)
      throw ParseError(origin + ":" + std::to_string(lineno) + ": expected at least 3 columns");
    ReportRow row;
    {
      const auto& f = fields[0];
      auto [p, ec] = std::from_chars(f.data(), f.data() + f.size(), row.window_end_slice);
      if (ec != std::errc{} || p != f.data() + f.size())
        throw ParseError(origin + ":" + std::to_string(lineno) + ": bad window index");
    }
    row.aip = parse_ipv4(fields[1]);
    try {
      row.value = std::stod(fields[2]);
    } catch (const std::exception&) {
      throw ParseError(origin + ":" + std::to_string(lineno) + ": bad value column");
    }
    if (fields.size() > 3) row.flags = fields[3];
    rows.push_back(row);
  }
  return rows;
}

}  // namespace slidecard
