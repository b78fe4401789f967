#include <doctest.h>

#include <algorithm>
#include <set>
#include <vector>

#include "slidecard/errors.hpp"
#include "slidecard/reconstruct.hpp"
#include "slidecard/rng.hpp"
#include "slidecard/rsra.hpp"

using namespace slidecard;

namespace {

RsraConfig small_config(uint64_t seed = 1) {
  // theta = 64, eta = 8 -> tau = 3
  RsraConfig cfg;
  cfg.q = 14;
  cfg.r = 5;
  cfg.delta = 6;  // (5-2)*6 + 14 = 32
  cfg.eta = 8;
  cfg.tau = 3;
  HashSeeds s = HashSeeds::derive(seed, 0);
  cfg.seed_h1 = s.h1;
  cfg.seed_h2 = s.h2;
  cfg.seed_rhfg0 = s.rhfg0;
  return cfg;
}

// distinct opposite addresses for one host
std::vector<uint32_t> distinct_peers(size_t n, Rng& rng) {
  std::set<uint32_t> peers;
  while (peers.size() < n) peers.insert(rng.next_u32());
  return {peers.begin(), peers.end()};
}

}  // namespace

TEST_CASE("construction constraints") {
  auto cfg = small_config();
  cfg.delta = 5;  // (5-2)*5 + 14 = 29 < 32
  CHECK_THROWS_AS(Rsra{cfg}, ConfigError);
  cfg = small_config();
  cfg.r = 2;
  CHECK_THROWS_AS(Rsra{cfg}, ConfigError);
}

TEST_CASE("update: gate rejection leaves no trace, pass sets one slot per row") {
  Rsra s(small_config());
  SeededHash h1(s.config().seed_h1);
  Rng rng(5);

  uint32_t rejected = 0, accepted = 0;
  while (rejected == 0 || accepted == 0) {
    const uint32_t bip = rng.next_u32();
    const bool passes = lsb(static_cast<uint32_t>(h1(bip))) >= s.config().tau;
    Rsra before = s;
    s.update(0x0A010203, bip);
    size_t changed = 0;
    for (size_t i = 0; i < s.cells().size(); ++i)
      if (s.cells()[i] != before.cells()[i]) ++changed;
    if (passes) {
      CHECK(changed <= s.config().r);  // may hit already-zero slots
      Rsra again = s;
      s.update(0x0A010203, bip);  // idempotent within the slice
      CHECK(std::equal(s.cells().begin(), s.cells().end(), again.cells().begin()));
      ++accepted;
    } else {
      CHECK(changed == 0);
      ++rejected;
    }
  }
}

TEST_CASE("one passing pair sets exactly r counters") {
  Rsra s(small_config());
  SeededHash h1(s.config().seed_h1);
  Rng rng(6);
  uint32_t bip = rng.next_u32();
  while (lsb(static_cast<uint32_t>(h1(bip))) < s.config().tau) bip = rng.next_u32();
  s.update(0x0A0B0C0D, bip);
  size_t zeros = 0;
  for (uint16_t c : s.cells()) zeros += c == 0;
  CHECK(zeros == s.config().r);
}

TEST_CASE("permutation invariance of a slice's updates") {
  Rng rng(9);
  std::vector<std::pair<uint32_t, uint32_t>> pairs;
  for (int i = 0; i < 500; ++i) pairs.emplace_back(rng.next_u32(), rng.next_u32());

  Rsra a(small_config());
  for (auto [aip, bip] : pairs) a.update(aip, bip);

  std::vector<size_t> order(pairs.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = order.size() - 1 - i;
  Rsra b(small_config());
  for (size_t i : order) b.update(pairs[i].first, pairs[i].second);

  CHECK(std::equal(a.cells().begin(), a.cells().end(), b.cells().begin()));
}

TEST_CASE("extract_hot: fresh array has none; a planted heavy host lights all rows") {
  Rsra s(small_config());
  auto hot = s.extract_hot(1);
  for (const auto& row : hot) CHECK(row.empty());

  // 2 * theta distinct peers in one slice
  Rng rng(10);
  const uint32_t host = 0x0A111213;
  for (uint32_t bip : distinct_peers(128, rng)) s.update(host, bip);

  hot = s.extract_hot(1);
  const auto cols = s.hash_group().forward(host);
  const double rho = detection_rho();
  for (uint32_t i = 0; i < s.config().r; ++i) {
    CHECK(std::is_sorted(hot[i].begin(), hot[i].end()));
    CHECK(std::adjacent_find(hot[i].begin(), hot[i].end()) == hot[i].end());
    const bool listed = std::binary_search(hot[i].begin(), hot[i].end(), cols[i]);
    const bool is_hot =
        static_cast<double>(counter_ops::weight(s.sre(i, cols[i]), 1)) >=
        rho * s.config().eta;
    CHECK(listed == is_hot);
    CHECK(listed);  // 2*theta peers make ~16 sampled slots out of 8
  }
}

TEST_CASE("one slide shifts every window weight by exactly one slice") {
  Rsra s(small_config());
  Rng rng(99);
  for (int i = 0; i < 400; ++i) s.update(rng.next_u32(), rng.next_u32());
  std::vector<size_t> before;
  for (uint32_t k : {2u, 3u, 10u})
    before.push_back(counter_ops::weight(s.cells(), k - 1));
  s.slide();
  size_t i = 0;
  for (uint32_t k : {2u, 3u, 10u})
    CHECK(counter_ops::weight(s.cells(), k) == before[i++]);
}

TEST_CASE("slide ages every counter; merge keeps the most recent sighting") {
  Rsra a(small_config()), b(small_config());
  Rng rng(11);
  const auto peers = distinct_peers(256, rng);
  for (size_t i = 0; i < peers.size(); ++i)
    (i % 2 ? a : b).update(0x0A000001, peers[i]);
  a.slide();
  b.slide();

  Rsra whole(small_config());
  for (uint32_t bip : peers) whole.update(0x0A000001, bip);
  whole.slide();

  Rsra merged = merge(a, b);
  CHECK(std::equal(merged.cells().begin(), merged.cells().end(), whole.cells().begin()));

  // merging with a fresh same-shape array changes nothing
  Rsra fresh(small_config());
  fresh.slide();
  Rsra merged2 = merge(merged, fresh);
  CHECK(std::equal(merged2.cells().begin(), merged2.cells().end(), merged.cells().begin()));
}

TEST_CASE("merge rejects mismatched shape, seeds or slice position") {
  Rsra a(small_config(1));
  Rsra b(small_config(2));
  CHECK_THROWS_AS(a.merge_min(b), IncompatibleSketchError);
  Rsra c(small_config(1));
  c.slide();
  CHECK_THROWS_AS(a.merge_min(c), IncompatibleSketchError);
}

TEST_CASE("reconstruct: planted hosts come back, empty rows mean no candidates") {
  Rsra s(small_config());
  Rng rng(12);
  const std::vector<uint32_t> hosts = {0x0A000001, 0x0AFFFE07, 0x0A123456};
  for (uint32_t host : hosts)
    for (uint32_t bip : distinct_peers(128, rng)) s.update(host, bip);

  const auto hot = s.extract_hot(1);
  const auto rec = reconstruct_candidates(hot, s.hash_group());
  CHECK_FALSE(rec.overflow);
  for (uint32_t host : hosts)
    CHECK(std::binary_search(rec.addresses.begin(), rec.addresses.end(), host));
  // soundness: every candidate's columns are hot in every row
  for (uint32_t addr : rec.addresses) {
    const auto cols = s.hash_group().forward(addr);
    for (uint32_t i = 0; i < s.config().r; ++i)
      CHECK(std::binary_search(hot[i].begin(), hot[i].end(), cols[i]));
  }

  auto empty_row = hot;
  empty_row[2].clear();
  const auto none = reconstruct_candidates(empty_row, s.hash_group());
  CHECK(none.addresses.empty());
  CHECK_FALSE(none.overflow);
}

namespace {

// full cross-product enumeration with per-tuple inversion; the oracle the
// incremental path must match exactly
std::vector<uint32_t> brute_force_reconstruct(
    const std::vector<std::vector<uint32_t>>& hot, const ReversibleHashGroup& g) {
  std::vector<uint32_t> out;
  std::vector<uint32_t> tuple(g.r());
  std::vector<size_t> idx(g.r(), 0);
  if (hot.size() != g.r()) return out;
  for (const auto& row : hot)
    if (row.empty()) return out;
  while (true) {
    for (uint32_t i = 0; i < g.r(); ++i) tuple[i] = hot[i][idx[i]];
    auto addrs = g.invert(tuple);
    out.insert(out.end(), addrs.begin(), addrs.end());
    uint32_t pos = g.r();
    while (pos > 0) {
      --pos;
      if (++idx[pos] < hot[pos].size()) break;
      idx[pos] = 0;
      if (pos == 0) {
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
      }
    }
  }
}

}  // namespace

TEST_CASE("reconstruct equals brute-force cross-product enumeration") {
  // deliberately non-covering parameters: equality of the two routes does not
  // depend on the coverage constraint
  ReversibleHashGroup g(10, 5, 3, 321);
  Rng rng(13);
  for (int instance = 0; instance < 20; ++instance) {
    std::vector<std::vector<uint32_t>> hot(5);
    // plant a couple of real addresses so consistent tuples exist
    for (int p = 0; p < 2; ++p) {
      const auto cols = g.forward(rng.next_u32());
      for (uint32_t i = 0; i < 5; ++i) hot[i].push_back(cols[i]);
    }
    for (auto& row : hot) {
      while (row.size() < 8) row.push_back(static_cast<uint32_t>(rng.below(1u << 10)));
      std::sort(row.begin(), row.end());
      row.erase(std::unique(row.begin(), row.end()), row.end());
    }
    const auto inc = reconstruct_candidates(hot, g);
    const auto brute = brute_force_reconstruct(hot, g);
    REQUIRE_FALSE(inc.overflow);
    CHECK(inc.addresses == brute);
  }
}

TEST_CASE("tuple budget overflow aborts with a report, not an allocation spree") {
  ReversibleHashGroup g(10, 5, 3, 321);
  std::vector<std::vector<uint32_t>> hot(5);
  Rng rng(14);
  for (auto& row : hot) {
    std::set<uint32_t> cols;
    while (cols.size() < 40) cols.insert(static_cast<uint32_t>(rng.below(1u << 10)));
    row.assign(cols.begin(), cols.end());
  }
  ReconstructOptions opt;
  opt.tuple_cap = 2;
  const auto rec = reconstruct_candidates(hot, g, opt);
  CHECK(rec.overflow);
  CHECK(rec.addresses.empty());
}
