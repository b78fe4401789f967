#include "slidecard/reconstruct.hpp"

#include <algorithm>
#include <atomic>
#include <stdexcept>

#include "slidecard/parallel.hpp"

namespace slidecard {

namespace {

struct StageState {
  std::atomic<uint64_t> kept{0};
  std::atomic<uint64_t> checked{0};
  std::atomic<bool> abort{false};
};

// splice worker-local outputs back in worker order so the result does not
// depend on scheduling
void splice_ordered(std::vector<std::vector<uint32_t>>& parts,
                    std::vector<uint32_t>& out) {
  size_t total = 0;
  for (auto& p : parts) total += p.size();
  out.clear();
  out.reserve(total);
  for (auto& p : parts) out.insert(out.end(), p.begin(), p.end());
}

}  // namespace

ReconstructResult reconstruct_candidates(
    const std::vector<std::vector<uint32_t>>& hot_columns,
    const ReversibleHashGroup& group, const ReconstructOptions& opt) {
  const uint32_t r = group.r();
  if (hot_columns.size() != r)
    throw std::invalid_argument("reconstruct: expected one hot list per row");
  if (r < 3) throw std::invalid_argument("reconstruct: need at least 3 rows");

  ReconstructResult result;
  for (const auto& row : hot_columns)
    if (row.empty()) return result;

  const uint32_t workers = std::max<uint32_t>(1, opt.workers);
  const uint64_t check_interval = 4096;

  auto overflowed = [&result] {
    result = ReconstructResult{};
    result.overflow = true;
    return result;
  };

  // seed tuples over the first three rows; the only overlap that exists yet
  // is between the windows derived from rows 1 and 2
  const auto& h0 = hot_columns[0];
  const auto& h1 = hot_columns[1];
  const auto& h2 = hot_columns[2];
  const uint64_t seed_work =
      static_cast<uint64_t>(h0.size()) * h1.size() * h2.size();
  if (seed_work > opt.work_cap) return overflowed();

  std::vector<uint32_t> tuples;  // flat, stride = current width
  {
    StageState st;
    std::vector<std::vector<uint32_t>> parts(workers);
    parallel_chunks(h0.size(), workers, [&](size_t part, size_t begin, size_t end) {
      auto& local = parts[part];
      uint64_t local_since_check = 0;
      for (size_t a = begin; a < end && !st.abort.load(std::memory_order_relaxed); ++a) {
        const uint32_t he0 = h0[a];
        for (uint32_t he1 : h1) {
          const uint32_t b1 = he1 ^ he0;
          for (uint32_t he2 : h2) {
            const uint32_t b2 = he2 ^ he0;
            if (!group.windows_consistent(b1, b2)) continue;
            local.push_back(he0);
            local.push_back(he1);
            local.push_back(he2);
            if (++local_since_check >= check_interval) {
              if (st.kept.fetch_add(local_since_check) + local_since_check > opt.tuple_cap)
                st.abort.store(true, std::memory_order_relaxed);
              local_since_check = 0;
            }
          }
        }
      }
      st.kept.fetch_add(local_since_check);
    });
    if (st.abort.load() || st.kept.load() > opt.tuple_cap) return overflowed();
    result.tuples_checked += seed_work;
    splice_ordered(parts, tuples);
  }

  // grow one row at a time; only the newly exposed overlap needs checking
  std::vector<uint32_t> next;
  for (uint32_t row = 3; row < r; ++row) {
    const uint32_t width = row;  // current tuple width
    const size_t count = tuples.size() / width;
    const auto& hrow = hot_columns[row];
    const uint64_t work = static_cast<uint64_t>(count) * hrow.size();
    if (result.tuples_checked + work > opt.work_cap) return overflowed();

    StageState st;
    std::vector<std::vector<uint32_t>> parts(workers);
    parallel_chunks(count, workers, [&](size_t part, size_t begin, size_t end) {
      auto& local = parts[part];
      uint64_t local_since_check = 0;
      for (size_t t = begin; t < end && !st.abort.load(std::memory_order_relaxed); ++t) {
        const uint32_t* tuple = tuples.data() + t * width;
        const uint32_t he0 = tuple[0];
        const uint32_t b_prev = tuple[width - 1] ^ he0;
        for (uint32_t he : hrow) {
          const uint32_t b_cur = he ^ he0;
          if (!group.windows_consistent(b_prev, b_cur)) continue;
          local.insert(local.end(), tuple, tuple + width);
          local.push_back(he);
          if (++local_since_check >= check_interval) {
            if (st.kept.fetch_add(local_since_check) + local_since_check > opt.tuple_cap)
              st.abort.store(true, std::memory_order_relaxed);
            local_since_check = 0;
          }
        }
      }
      st.kept.fetch_add(local_since_check);
    });
    if (st.abort.load() || st.kept.load() > opt.tuple_cap) return overflowed();
    result.tuples_checked += work;
    splice_ordered(parts, next);
    tuples.swap(next);
  }

  const size_t final_count = tuples.size() / r;
  result.tuples_kept = final_count;

  // invert the surviving tuples; inversion re-checks every overlap and
  // forward-verifies, so this stage only ever narrows the set
  std::vector<std::vector<uint32_t>> parts(workers);
  parallel_chunks(final_count, workers, [&](size_t part, size_t begin, size_t end) {
    auto& local = parts[part];
    for (size_t t = begin; t < end; ++t) {
      auto addrs = group.invert({tuples.data() + t * r, r});
      local.insert(local.end(), addrs.begin(), addrs.end());
    }
  });
  splice_ordered(parts, result.addresses);
  std::sort(result.addresses.begin(), result.addresses.end());
  result.addresses.erase(
      std::unique(result.addresses.begin(), result.addresses.end()),
      result.addresses.end());
  return result;
}

}  // namespace slidecard
