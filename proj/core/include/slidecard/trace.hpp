#pragma once

#include <array>
#include <cstdint>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace slidecard {

// raw packet endpoint pair, before direction classification
struct RawPacket {
  uint64_t ts_us = 0;
  uint32_t src = 0;
  uint32_t dst = 0;

  bool operator==(const RawPacket&) const = default;
};

// measurement record: aip is the monitored endpoint, bip the opposite one
struct TraceRecord {
  uint64_t ts_us = 0;
  uint32_t aip = 0;
  uint32_t bip = 0;

  bool operator==(const TraceRecord&) const = default;
};

uint32_t parse_ipv4(std::string_view text);       // throws ParseError
std::string format_ipv4(uint32_t addr);

struct CidrPrefix {
  uint32_t addr = 0;
  uint32_t bits = 0;

  bool contains(uint32_t ip) const {
    if (bits == 0) return true;
    const uint32_t mask = bits >= 32 ? 0xFFFFFFFFu : ~((uint32_t{1} << (32 - bits)) - 1);
    return (ip & mask) == (addr & mask);
  }

  static CidrPrefix parse(std::string_view text);  // "a.b.c.d/n"
  std::string to_string() const;
};

// the monitored network; a packet is measured from the perspective of every
// endpoint inside it
struct AnetSpec {
  std::vector<CidrPrefix> prefixes;

  bool contains(uint32_t ip) const {
    for (const auto& p : prefixes)
      if (p.contains(ip)) return true;
    return false;
  }

  // comma-separated CIDR list; must be non-empty
  static AnetSpec parse(std::string_view text);
};

// "ts_micro,src,dst" with optional whitespace; '#' lines and blank lines are
// skipped (nullopt). Malformed content throws ParseError.
std::optional<RawPacket> parse_trace_line(std::string_view line);

std::string format_trace_line(const RawPacket& p);

// zero, one or two measurement records depending on which endpoints are
// inside the monitored network; returns how many were written
int classify(const RawPacket& p, const AnetSpec& anet, std::array<TraceRecord, 2>& out);

// line-oriented trace file reader with abort-or-skip handling of bad lines
class TraceReader {
 public:
  struct Options {
    bool skip_malformed = false;
  };

  explicit TraceReader(const std::string& path) : TraceReader(path, Options{}) {}
  TraceReader(const std::string& path, Options opt);

  std::optional<RawPacket> next();  // nullopt at end of file

  uint64_t lines_read() const { return line_; }
  uint64_t malformed_skipped() const { return skipped_; }

 private:
  std::ifstream in_;
  std::string path_;
  Options opt_;
  uint64_t line_ = 0;
  uint64_t skipped_ = 0;
};

}  // namespace slidecard
