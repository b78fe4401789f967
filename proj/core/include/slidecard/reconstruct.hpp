#pragma once

#include <cstdint>
#include <vector>

#include "slidecard/hash.hpp"

namespace slidecard {

struct ReconstructOptions {
  // live candidate-tuple budget; exceeding it aborts the slice with an
  // overflow report instead of growing without bound
  uint64_t tuple_cap = uint64_t{1} << 22;
  // overlap-check budget for the same reason
  uint64_t work_cap = uint64_t{1} << 32;
  uint32_t workers = 1;
};

struct ReconstructResult {
  std::vector<uint32_t> addresses;  // sorted, unique, all forward-verified
  bool overflow = false;            // caps exceeded; addresses is empty
  uint64_t tuples_checked = 0;
  uint64_t tuples_kept = 0;  // tuples surviving every overlap check
};

// Folds per-row hot column lists back into candidate addresses. Tuples are
// seeded from the first three rows and grown one row at a time through two
// alternating buffers; each growth step only checks the overlap between the
// newly derived address window and its predecessor. Every surviving tuple is
// inverted and only addresses whose full forward image matches are emitted.
ReconstructResult reconstruct_candidates(
    const std::vector<std::vector<uint32_t>>& hot_columns,
    const ReversibleHashGroup& group, const ReconstructOptions& opt = {});

}  // namespace slidecard
