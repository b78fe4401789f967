#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "slidecard/window.hpp"

namespace slidecard {

enum class PartitionPolicy { hash_pair, round_robin, by_source_prefix };

PartitionPolicy parse_partition_policy(std::string_view name);  // throws ConfigError

struct DistributedOptions {
  uint32_t nodes = 4;
  PartitionPolicy policy = PartitionPolicy::hash_pair;
};

struct DistributedStats {
  uint64_t slice_merges = 0;
  uint64_t bytes_exchanged = 0;  // nodes * serialized sketch bytes, per merge
};

// Edge-router deployment on one machine: every record lands on exactly one
// node's sketches, nodes slide in lockstep, and at each slice boundary the
// merged (per-counter minimum) global sketches run the same detection as a
// single-node engine. With identical seeds the merged arrays match a
// single-node run bit for bit.
std::vector<DetectionReport> run_distributed(std::span<const TraceRecord> records,
                                             const WindowConfig& cfg,
                                             const RsraConfig& rsra_cfg,
                                             const SleaConfig& slea_cfg,
                                             const DistributedOptions& opt,
                                             DistributedStats* stats = nullptr);

}  // namespace slidecard
