#include "slidecard/trace.hpp"

#include <charconv>

#include "slidecard/errors.hpp"

namespace slidecard {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

uint64_t parse_u64(std::string_view s, const char* what) {
  uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw ParseError(std::string("invalid ") + what + ": '" + std::string(s) + "'");
  return value;
}

}  // namespace

uint32_t parse_ipv4(std::string_view text) {
  uint32_t out = 0;
  size_t pos = 0;
  for (int octet = 0; octet < 4; ++octet) {
    size_t dot = octet == 3 ? text.size() : text.find('.', pos);
    if (dot == std::string_view::npos)
      throw ParseError("invalid IPv4 address: '" + std::string(text) + "'");
    std::string_view part = text.substr(pos, dot - pos);
    if (part.empty() || part.size() > 3)
      throw ParseError("invalid IPv4 address: '" + std::string(text) + "'");
    uint32_t v = 0;
    for (char c : part) {
      if (c < '0' || c > '9')
        throw ParseError("invalid IPv4 address: '" + std::string(text) + "'");
      v = v * 10 + static_cast<uint32_t>(c - '0');
    }
    if (v > 255) throw ParseError("invalid IPv4 address: '" + std::string(text) + "'");
    out = (out << 8) | v;
    pos = dot + 1;
  }
  return out;
}

std::string format_ipv4(uint32_t addr) {
  char buf[16];
  int n = snprintf(buf, sizeof(buf), "%u.%u.%u.%u", (addr >> 24) & 0xFF,
                   (addr >> 16) & 0xFF, (addr >> 8) & 0xFF, addr & 0xFF);
  return std::string(buf, static_cast<size_t>(n));
}

CidrPrefix CidrPrefix::parse(std::string_view text) {
  text = trim(text);
  size_t slash = text.find('/');
  if (slash == std::string_view::npos)
    throw ParseError("invalid CIDR prefix (missing /bits): '" + std::string(text) + "'");
  CidrPrefix p;
  p.addr = parse_ipv4(text.substr(0, slash));
  p.bits = static_cast<uint32_t>(parse_u64(text.substr(slash + 1), "prefix length"));
  if (p.bits > 32) throw ParseError("CIDR prefix length must be <= 32");
  return p;
}

std::string CidrPrefix::to_string() const {
  return format_ipv4(addr) + "/" + std::to_string(bits);
}

AnetSpec AnetSpec::parse(std::string_view text) {
  AnetSpec spec;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t comma = text.find(',', pos);
    std::string_view part =
        text.substr(pos, comma == std::string_view::npos ? text.size() - pos : comma - pos);
    part = trim(part);
    if (!part.empty()) spec.prefixes.push_back(CidrPrefix::parse(part));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  if (spec.prefixes.empty()) throw ParseError("monitored network list is empty");
  return spec;
}

std::optional<RawPacket> parse_trace_line(std::string_view line) {
  std::string_view s = trim(line);
  if (s.empty() || s.front() == '#') return std::nullopt;

  size_t c1 = s.find(',');
  size_t c2 = c1 == std::string_view::npos ? std::string_view::npos : s.find(',', c1 + 1);
  if (c1 == std::string_view::npos || c2 == std::string_view::npos)
    throw ParseError("expected 'timestamp,src,dst'");

  RawPacket p;
  p.ts_us = parse_u64(trim(s.substr(0, c1)), "timestamp");
  p.src = parse_ipv4(trim(s.substr(c1 + 1, c2 - c1 - 1)));
  std::string_view rest = trim(s.substr(c2 + 1));
  if (rest.find(',') != std::string_view::npos) throw ParseError("expected exactly 3 fields");
  p.dst = parse_ipv4(rest);
  return p;
}

std::string format_trace_line(const RawPacket& p) {
  return std::to_string(p.ts_us) + "," + format_ipv4(p.src) + "," + format_ipv4(p.dst);
}

int classify(const RawPacket& p, const AnetSpec& anet, std::array<TraceRecord, 2>& out) {
  int n = 0;
  if (anet.contains(p.src)) out[n++] = TraceRecord{p.ts_us, p.src, p.dst};
  if (anet.contains(p.dst)) out[n++] = TraceRecord{p.ts_us, p.dst, p.src};
  return n;
}

TraceReader::TraceReader(const std::string& path, Options opt)
    : in_(path), path_(path), opt_(opt) {
  if (!in_) throw ParseError("cannot open trace file: " + path);
}

std::optional<RawPacket> TraceReader::next() {
  std::string line;
  while (std::getline(in_, line)) {
    ++line_;
    try {
      auto p = parse_trace_line(line);
      if (p) return p;
    } catch (const ParseError& e) {
      if (!opt_.skip_malformed)
        throw ParseError(path_ + ":" + std::to_string(line_) + ": " + e.what());
      ++skipped_;
    }
  }
  return std::nullopt;
}

}  // namespace slidecard
