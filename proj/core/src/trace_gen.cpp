#include "slidecard/trace_gen.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>

#include "slidecard/errors.hpp"
#include "slidecard/io_util.hpp"
#include "slidecard/rng.hpp"

namespace slidecard {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

TraceGenSpec TraceGenSpec::parse(const std::string& text) {
  TraceGenSpec spec;
  size_t pos = 0;
  uint64_t lineno = 0;
  while (pos <= text.size()) {
    size_t nl = text.find('\n', pos);
    std::string_view line(text.data() + pos,
                          (nl == std::string::npos ? text.size() : nl) - pos);
    ++lineno;
    pos = nl == std::string::npos ? text.size() + 1 : nl + 1;

    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    size_t eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("trace spec line " + std::to_string(lineno) + ": expected key = value");
    std::string key(trim(line.substr(0, eq)));
    std::string value(trim(line.substr(eq + 1)));
    try {
      if (key == "slices") spec.slices = std::stoull(value);
      else if (key == "slice_seconds") spec.slice_us = static_cast<uint64_t>(std::stod(value) * 1e6);
      else if (key == "t0_us") spec.t0_us = std::stoull(value);
      else if (key == "anet") spec.anet = CidrPrefix::parse(value);
      else if (key == "background_hosts") spec.background_hosts = std::stoull(value);
      else if (key == "background_max_cardinality") spec.background_max_cardinality = static_cast<uint32_t>(std::stoul(value));
      else if (key == "background_zipf_exponent") spec.background_zipf_exponent = std::stod(value);
      else if (key == "planted_supers") spec.planted_supers = std::stoull(value);
      else if (key == "planted_cardinality_min") spec.planted_cardinality_min = static_cast<uint32_t>(std::stoul(value));
      else if (key == "planted_cardinality_max") spec.planted_cardinality_max = static_cast<uint32_t>(std::stoul(value));
      else if (key == "planted_spread") spec.planted_spread = static_cast<uint32_t>(std::stoul(value));
      else if (key == "window_k") spec.window_k = std::stoull(value);
      else throw ConfigError("trace spec: unknown key '" + key + "'");
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception&) {
      throw ConfigError("trace spec line " + std::to_string(lineno) + ": bad value for '" + key + "'");
    }
  }
  spec.validate();
  return spec;
}

TraceGenSpec TraceGenSpec::load_file(const std::string& path) {
  return parse(read_file(path));
}

void TraceGenSpec::validate() const {
  if (slices == 0) throw ConfigError("trace spec: slices must be positive");
  if (slice_us == 0) throw ConfigError("trace spec: slice duration must be positive");
  if (window_k == 0 || window_k > 65534)
    throw ConfigError("trace spec: window_k must be in [1, 65534]");
  if (anet.bits == 0 || anet.bits > 30)
    throw ConfigError("trace spec: anet prefix length must be in [1, 30]");
  const uint64_t capacity = (uint64_t{1} << (32 - anet.bits)) - 1;
  if (background_hosts + planted_supers > capacity)
    throw ConfigError("trace spec: more hosts than the monitored prefix can address");
  if (planted_supers > 0) {
    if (planted_cardinality_min == 0 || planted_cardinality_min > planted_cardinality_max)
      throw ConfigError("trace spec: planted cardinality range is empty");
    if (planted_cardinality_max >= (uint32_t{1} << 30))
      throw ConfigError("trace spec: planted cardinality exceeds the opposite address space");
    if (planted_spread == 0 || planted_spread > slices)
      throw ConfigError("trace spec: planted_spread must be in [1, slices]");
  }
  if (background_hosts > 0) {
    if (background_max_cardinality == 0)
      throw ConfigError("trace spec: background hosts need a positive max cardinality");
    if (background_max_cardinality >= (uint32_t{1} << 30))
      throw ConfigError("trace spec: background cardinality exceeds the opposite address space");
    if (background_zipf_exponent < 0.0)
      throw ConfigError("trace spec: zipf exponent must be non-negative");
  }
}

namespace {

struct GenRecord {
  uint64_t ts;
  uint32_t aip;
  uint32_t bip;
};

// deterministic opposite-host pool: distinct per host, never inside anet
uint32_t make_bip(uint32_t base, uint32_t j, const CidrPrefix& anet) {
  uint32_t v = base + j;
  if (anet.contains(v)) v ^= 0x80000000u;  // prefix bits >= 1 pin the top bit
  return v;
}

}  // namespace

TraceGenResult gen_trace(const TraceGenSpec& spec, uint64_t seed,
                         const std::string& out_prefix) {
  spec.validate();
  Rng rng(seed);

  const uint32_t prefix_base =
      spec.anet.addr & (spec.anet.bits >= 32 ? 0xFFFFFFFFu
                                             : ~((uint32_t{1} << (32 - spec.anet.bits)) - 1));
  auto host_aip = [&](uint64_t index) {
    return prefix_base + 1 + static_cast<uint32_t>(index);
  };

  std::vector<GenRecord> records;

  // background: cardinality max_card / rank^exponent, one sighting per peer
  // at a uniform slice
  for (uint64_t h = 0; h < spec.background_hosts; ++h) {
    const double rank = static_cast<double>(h + 1);
    uint32_t card = static_cast<uint32_t>(
        static_cast<double>(spec.background_max_cardinality) /
        std::pow(rank, spec.background_zipf_exponent));
    card = std::max<uint32_t>(1, std::min(card, spec.background_max_cardinality));
    const uint32_t aip = host_aip(h);
    const uint32_t bip_base = rng.next_u32();
    for (uint32_t j = 0; j < card; ++j) {
      const uint64_t slice = rng.below(spec.slices);
      const uint64_t ts = spec.t0_us + slice * spec.slice_us + rng.below(spec.slice_us);
      records.push_back(GenRecord{ts, aip, make_bip(bip_base, j, spec.anet)});
    }
  }

  // planted heavy hosts: peer j shows up at every slice congruent to
  // j mod spread, so any window of >= spread slices holds the whole peer set
  std::vector<uint32_t> planted_cards(spec.planted_supers);
  std::vector<uint32_t> planted_aips(spec.planted_supers);
  for (uint64_t s = 0; s < spec.planted_supers; ++s) {
    const uint32_t span =
        spec.planted_cardinality_max - spec.planted_cardinality_min + 1;
    const uint32_t card =
        spec.planted_cardinality_min + static_cast<uint32_t>(rng.below(span));
    planted_cards[s] = card;
    planted_aips[s] = host_aip(spec.background_hosts + s);
    const uint32_t bip_base = rng.next_u32();
    for (uint32_t j = 0; j < card; ++j) {
      const uint32_t bip = make_bip(bip_base, j, spec.anet);
      for (uint64_t slice = j % spec.planted_spread; slice < spec.slices;
           slice += spec.planted_spread) {
        const uint64_t ts = spec.t0_us + slice * spec.slice_us + rng.below(spec.slice_us);
        records.push_back(GenRecord{ts, planted_aips[s], bip});
      }
    }
  }

  std::sort(records.begin(), records.end(), [](const GenRecord& a, const GenRecord& b) {
    if (a.ts != b.ts) return a.ts < b.ts;
    if (a.aip != b.aip) return a.aip < b.aip;
    return a.bip < b.bip;
  });

  uint64_t last_slice = 0;
  if (!records.empty()) last_slice = (records.back().ts - spec.t0_us) / spec.slice_us;

  write_file_atomic(out_prefix + ".trace", [&](std::ostream& out) {
    for (const auto& r : records)
      out << r.ts << ',' << format_ipv4(r.aip) << ',' << format_ipv4(r.bip) << '\n';
  });

  // ground truth for the planted hosts on the report cadence: every window
  // end from k-1 through the last slice, or a single partial window when the
  // trace is shorter than one window
  TraceGenResult result;
  result.records = records.size();

  std::vector<uint64_t> window_ends;
  if (!records.empty()) {
    const uint64_t k = spec.window_k;
    const uint64_t first_end = last_slice + 1 >= k ? k - 1 : last_slice;
    for (uint64_t e = first_end; e <= last_slice; ++e) window_ends.push_back(e);
  }

  write_file_atomic(out_prefix + ".truth.csv", [&](std::ostream& out) {
    out << "window_end_slice,aip,exact_cardinality\n";
    for (uint64_t end : window_ends) {
      const uint64_t ws = end + 1 >= spec.window_k ? end + 1 - spec.window_k : 0;
      std::vector<std::pair<uint64_t, uint32_t>> rows;  // cardinality, aip
      for (uint64_t s = 0; s < spec.planted_supers; ++s) {
        // count residues with at least one occurrence inside [ws, end]
        const uint32_t spread = spec.planted_spread;
        const uint32_t card = planted_cards[s];
        uint64_t covered = 0;
        for (uint32_t r0 = 0; r0 < spread && r0 < spec.slices && r0 < card; ++r0) {
          uint64_t o = r0;
          if (o < ws) o += ((ws - o) + spread - 1) / spread * spread;
          if (o > end || o >= spec.slices) continue;
          // peers with j % spread == r0
          covered += (card - r0 + spread - 1) / spread;
        }
        rows.emplace_back(covered, planted_aips[s]);
      }
      std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
      });
      for (const auto& [card, aip] : rows) {
        out << end << ',' << format_ipv4(aip) << ',' << card << '\n';
        ++result.truth_rows;
      }
    }
  });

  return result;
}

}  // namespace slidecard
