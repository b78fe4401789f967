#include "slidecard/distributed.hpp"

#include <string>

#include "slidecard/errors.hpp"
#include "slidecard/parallel.hpp"
#include "slidecard/sketch_io.hpp"

namespace slidecard {

PartitionPolicy parse_partition_policy(std::string_view name) {
  if (name == "hash-pair") return PartitionPolicy::hash_pair;
  if (name == "round-robin") return PartitionPolicy::round_robin;
  if (name == "by-source-prefix") return PartitionPolicy::by_source_prefix;
  throw ConfigError("unknown partition policy: " + std::string(name));
}

namespace {

uint32_t route(const TraceRecord& rec, uint64_t index, PartitionPolicy policy, uint32_t nodes) {
  switch (policy) {
    case PartitionPolicy::hash_pair:
      return static_cast<uint32_t>(
          hash64((static_cast<uint64_t>(rec.aip) << 32) | rec.bip, 0x70617274) % nodes);
    case PartitionPolicy::round_robin:
      return static_cast<uint32_t>(index % nodes);
    case PartitionPolicy::by_source_prefix:
      return (rec.aip >> 24) % nodes;
  }
  return 0;
}

}  // namespace

std::vector<DetectionReport> run_distributed(std::span<const TraceRecord> records,
                                             const WindowConfig& cfg,
                                             const RsraConfig& rsra_cfg,
                                             const SleaConfig& slea_cfg,
                                             const DistributedOptions& opt,
                                             DistributedStats* stats) {
  cfg.validate();
  if (opt.nodes == 0) throw ConfigError("distributed run needs at least one node");

  struct Node {
    Rsra rsra;
    Slea slea;
    std::vector<TraceRecord> pending;
  };
  std::vector<Node> nodes;
  nodes.reserve(opt.nodes);
  for (uint32_t i = 0; i < opt.nodes; ++i)
    nodes.push_back(Node{Rsra(rsra_cfg), Slea(slea_cfg), {}});

  std::vector<DetectionReport> reports;
  SliceClock clock(cfg.t0_us, cfg.slice_us, cfg.regression_tolerance_us);
  uint64_t current = 0;
  bool active = false;

  auto flush = [&] {
    // nodes are independent; their slice batches can apply concurrently
    parallel_chunks(nodes.size(), cfg.workers, [&](size_t, size_t begin, size_t end) {
      for (size_t n = begin; n < end; ++n) {
        for (const auto& rec : nodes[n].pending) {
          nodes[n].rsra.update(rec.aip, rec.bip);
          nodes[n].slea.update(rec.aip, rec.bip);
        }
        nodes[n].pending.clear();
      }
    });
  };

  auto merged_detect = [&](uint64_t window_end, bool partial) {
    Rsra global_rsra = nodes[0].rsra;
    Slea global_slea = nodes[0].slea;
    for (size_t n = 1; n < nodes.size(); ++n) {
      global_rsra.merge_min(nodes[n].rsra);
      global_slea.merge_min(nodes[n].slea);
    }
    if (stats) {
      ++stats->slice_merges;
      stats->bytes_exchanged +=
          opt.nodes * (serialized_size(global_rsra) + serialized_size(global_slea));
    }
    reports.push_back(run_detection(global_rsra, global_slea, window_end, partial, cfg));
  };

  auto complete_slice = [&] {
    if (current + 1 >= cfg.k) merged_detect(current, false);
    for (auto& n : nodes) {
      if (cfg.reinit_per_window) {
        n.rsra.reinitialize();
        n.slea.reinitialize();
      } else {
        n.rsra.slide();
        n.slea.slide();
      }
    }
    ++current;
  };

  uint64_t index = 0;
  for (const auto& rec : records) {
    const uint64_t s = clock.place(rec.ts_us);
    active = true;
    if (s > current) {
      flush();
      while (current < s) complete_slice();
    }
    nodes[route(rec, index, opt.policy, opt.nodes)].pending.push_back(rec);
    ++index;
  }
  if (active) {
    flush();
    merged_detect(current, true);
  }
  return reports;
}

}  // namespace slidecard
