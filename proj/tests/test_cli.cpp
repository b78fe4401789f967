#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <unistd.h>
#include <string>

#include "slidecard/io_util.hpp"

using namespace slidecard;
namespace fs = std::filesystem;

namespace {

// the built binary path arrives via the test environment
const char* cli_path() { return std::getenv("SLIDECARD_BIN"); }

struct TmpDir {
  fs::path dir;
  TmpDir() {
    dir = fs::temp_directory_path() / ("slidecard_cli_" + std::to_string(::getpid()));
    fs::create_directories(dir);
  }
  ~TmpDir() {
    std::error_code ec;
    fs::remove_all(dir, ec);
  }
  std::string path(const std::string& name) const { return (dir / name).string(); }
};

int run(const std::string& cmd) {
  const int rc = std::system((cmd + " > /dev/null 2>&1").c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string run_capture(const std::string& cmd, int* exit_code = nullptr) {
  const std::string out_file = "/tmp/slidecard_cli_capture_" + std::to_string(::getpid());
  const int rc = std::system((cmd + " > " + out_file + " 2>/dev/null").c_str());
  if (exit_code) *exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  std::string out = read_file(out_file);
  std::remove(out_file.c_str());
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  f << text;
}

}  // namespace

TEST_CASE("cli: end-to-end pipeline on a tiny synthetic trace") {
  if (!cli_path()) {
    MESSAGE("SLIDECARD_BIN not set; skipping CLI tests");
    return;
  }
  const std::string bin = cli_path();
  TmpDir tmp;

  write_text(tmp.path("gen.spec"),
             "slices = 12\n"
             "anet = 10.0.0.0/8\n"
             "background_hosts = 200\n"
             "background_max_cardinality = 20\n"
             "planted_supers = 2\n"
             "planted_cardinality_min = 150\n"
             "planted_cardinality_max = 220\n"
             "planted_spread = 4\n"
             "window_k = 4\n");
  CHECK(run(bin + " gen-trace --spec " + tmp.path("gen.spec") + " --seed 5 --out " +
            tmp.path("t")) == 0);

  const std::string common =
      " --anet 10.0.0.0/8 --slice 1 --k 4 --theta 64 --t0 1400000000000000";
  CHECK(run(bin + " detect --trace " + tmp.path("t.trace") + common +
            " --eta 8 --q 12 --r 5 --delta 7 --q-prime 8 --r-prime 3 --delta-prime 8"
            " --eta-prime 256 --seed 9 --out " + tmp.path("report.csv")) == 0);

  CHECK(run(bin + " oracle --trace " + tmp.path("t.trace") + common + " --out " +
            tmp.path("truth.csv")) == 0);

  int code = 0;
  const std::string out = run_capture(bin + " compare --report " + tmp.path("report.csv") +
                                          " --truth " + tmp.path("truth.csv") + " --out " +
                                          tmp.path("acc.csv"),
                                      &code);
  CHECK(code == 0);
  CHECK(out.find("avg_tfr=0.000000") != std::string::npos);  // tiny trace: exact detection

  // report scored against itself is all zeros
  const std::string self = run_capture(bin + " compare --report " + tmp.path("report.csv") +
                                       " --truth " + tmp.path("report.csv") + " --out " +
                                       tmp.path("self.csv"));
  CHECK(self.find("avg_fpr=0.000000") != std::string::npos);
  CHECK(self.find("avg_fnr=0.000000") != std::string::npos);
}

TEST_CASE("cli: exit codes and no partial outputs") {
  if (!cli_path()) return;
  const std::string bin = cli_path();
  TmpDir tmp;

  // missing trace file: parse error, no report file left behind
  CHECK(run(bin + " detect --trace " + tmp.path("nope.trace") +
            " --anet 10.0.0.0/8 --out " + tmp.path("r.csv")) == 3);
  CHECK_FALSE(fs::exists(tmp.path("r.csv")));
  CHECK_FALSE(fs::exists(tmp.path("r.csv.tmp")));

  // config validation fires before any processing
  write_text(tmp.path("t.trace"), "1,10.0.0.1,9.9.9.9\n");
  CHECK(run(bin + " detect --trace " + tmp.path("t.trace") +
            " --anet 10.0.0.0/8 --k 0 --out " + tmp.path("r.csv")) == 2);
  CHECK(run(bin + " detect --trace " + tmp.path("t.trace") +
            " --anet 10.0.0.0/8 --delta 30 --out " + tmp.path("r.csv")) == 2);

  // malformed trace line aborts with exit 3 unless skipping is requested
  write_text(tmp.path("bad.trace"), "1,10.0.0.1,9.9.9.9\nnot a line\n");
  CHECK(run(bin + " detect --trace " + tmp.path("bad.trace") +
            " --anet 10.0.0.0/8 --k 1 --out " + tmp.path("r.csv")) == 3);
  CHECK(run(bin + " detect --trace " + tmp.path("bad.trace") +
            " --anet 10.0.0.0/8 --k 1 --skip-bad-lines --out " + tmp.path("r.csv")) == 0);

  // unknown flag is a usage (config) error
  CHECK(run(bin + " detect --no-such-flag") == 2);

  // strict discrete mode is only defined for k = 1
  CHECK(run(bin + " detect --trace " + tmp.path("t.trace") +
            " --anet 10.0.0.0/8 --k 3 --reinit --out " + tmp.path("r.csv")) == 2);
  CHECK(run(bin + " detect --trace " + tmp.path("t.trace") +
            " --anet 10.0.0.0/8 --k 1 --reinit --theta 8 --out " + tmp.path("r.csv")) == 0);

  // blowing the oracle's pair budget is a resource error
  std::string many;
  for (int i = 0; i < 64; ++i) {
    char line[48];
    snprintf(line, sizeof(line), "%d,10.0.0.1,9.9.9.%d\n", 1000 + i, i);
    many += line;
  }
  write_text(tmp.path("many.trace"), many);
  CHECK(run(bin + " oracle --trace " + tmp.path("many.trace") +
            " --anet 10.0.0.0/8 --k 1 --max-pairs 10 --out " + tmp.path("t.csv")) == 4);
  CHECK_FALSE(fs::exists(tmp.path("t.csv")));
}

TEST_CASE("cli: analyze prints the frozen occupancy example") {
  if (!cli_path()) return;
  const std::string bin = cli_path();
  const std::string out = run_capture(bin + " analyze --card 4 --eta 2 --tau 0 --n 0");
  CHECK(out.find("eq,2,0.875") != std::string::npos);
  CHECK(out.find("ge,0,1") != std::string::npos);
}

TEST_CASE("cli: node shards merge into the single-node detection") {
  if (!cli_path()) return;
  const std::string bin = cli_path();
  TmpDir tmp;

  // deterministic trace split across two shards by line parity
  std::string shard_a, shard_b, whole;
  for (int i = 0; i < 400; ++i) {
    char line[64];
    snprintf(line, sizeof(line), "%d,10.0.0.%d,9.9.%d.%d\n", 1000000 + i * 2500,
             1 + i % 3, i / 250, i % 250);
    whole += line;
    ((i % 2) ? shard_a : shard_b) += line;
  }
  write_text(tmp.path("whole.trace"), whole);
  write_text(tmp.path("a.trace"), shard_a);
  write_text(tmp.path("b.trace"), shard_b);

  const std::string params =
      " --anet 10.0.0.0/8 --slice 0.25 --theta 8 --eta 8 --q 12 --r 5 --delta 7"
      " --q-prime 8 --r-prime 3 --delta-prime 8 --eta-prime 256 --seed 4";
  const std::string t0 = " --t0 1000000";

  CHECK(run(bin + " node --trace " + tmp.path("a.trace") + params + t0 +
            " --end-slice 3 --out-prefix " + tmp.path("na")) == 0);
  CHECK(run(bin + " node --trace " + tmp.path("b.trace") + params + t0 +
            " --end-slice 3 --out-prefix " + tmp.path("nb")) == 0);
  CHECK(run(bin + " merge " + tmp.path("na.rsra") + " " + tmp.path("nb.rsra") +
            " --out " + tmp.path("g.rsra")) == 0);
  CHECK(run(bin + " merge " + tmp.path("na.slea") + " " + tmp.path("nb.slea") +
            " --out " + tmp.path("g.slea")) == 0);

  // merge of a single file reproduces it byte for byte
  CHECK(run(bin + " merge " + tmp.path("na.rsra") + " --out " + tmp.path("solo.rsra")) == 0);
  CHECK(read_file(tmp.path("solo.rsra")) == read_file(tmp.path("na.rsra")));

  // merge order does not matter
  CHECK(run(bin + " merge " + tmp.path("nb.rsra") + " " + tmp.path("na.rsra") +
            " --out " + tmp.path("g2.rsra")) == 0);
  CHECK(read_file(tmp.path("g.rsra")) == read_file(tmp.path("g2.rsra")));

  // detection from the merged pair equals detecting the whole trace, where
  // the single-node run is aligned to the same final slice
  CHECK(run(bin + " detect --from-sketch " + tmp.path("g.rsra") + " " + tmp.path("g.slea") +
            params + " --k 4 --out " + tmp.path("merged_report.csv")) == 0);
  CHECK(run(bin + " detect --trace " + tmp.path("whole.trace") + params + t0 +
            " --k 4 --out " + tmp.path("whole_report.csv")) == 0);

  // the whole-trace run's final window is the same state the merged pair was
  // built from; rows must agree except for the partial flag
  auto window3_rows = [](const std::string& csv) {
    std::vector<std::string> rows;
    size_t pos = 0;
    while ((pos = csv.find("3,", pos)) != std::string::npos) {
      if (pos > 0 && csv[pos - 1] != '\n') {
        ++pos;
        continue;
      }
      const size_t end = csv.find('\n', pos);
      std::string row = csv.substr(pos, end - pos);
      row = row.substr(0, row.rfind(','));  // drop the flags column
      rows.push_back(row);
      pos = end;
    }
    return rows;
  };
  const auto merged_rows = window3_rows(read_file(tmp.path("merged_report.csv")));
  const auto whole_rows = window3_rows(read_file(tmp.path("whole_report.csv")));
  CHECK_FALSE(merged_rows.empty());
  CHECK(merged_rows == whole_rows);

  // incompatible merges are rejected with the sketch-mismatch code
  CHECK(run(bin + " merge " + tmp.path("na.rsra") + " " + tmp.path("nb.slea") +
            " --out " + tmp.path("bad.out")) == 5);
}

TEST_CASE("cli: fixed seed runs are byte-identical across worker counts") {
  if (!cli_path()) return;
  const std::string bin = cli_path();
  TmpDir tmp;

  write_text(tmp.path("gen.spec"),
             "slices = 6\n"
             "anet = 10.0.0.0/8\n"
             "background_hosts = 300\n"
             "background_max_cardinality = 40\n"
             "planted_supers = 2\n"
             "planted_cardinality_min = 200\n"
             "planted_cardinality_max = 300\n"
             "planted_spread = 2\n"
             "window_k = 2\n");
  REQUIRE(run(bin + " gen-trace --spec " + tmp.path("gen.spec") + " --seed 3 --out " +
              tmp.path("t")) == 0);

  const std::string base = bin + " detect --trace " + tmp.path("t.trace") +
                           " --anet 10.0.0.0/8 --slice 1 --k 2 --theta 64"
                           " --t0 1400000000000000 --eta 8 --q 12 --r 5 --delta 7"
                           " --q-prime 8 --r-prime 3 --delta-prime 8 --eta-prime 256"
                           " --seed 11";
  int c1 = 0, c2 = 0;
  const std::string out1 =
      run_capture(base + " --workers 1 --out " + tmp.path("w1.csv"), &c1);
  const std::string out4 =
      run_capture(base + " --workers 4 --out " + tmp.path("w4.csv"), &c2);
  CHECK(c1 == 0);
  CHECK(c2 == 0);
  CHECK(out1 == out4);
  CHECK(read_file(tmp.path("w1.csv")) == read_file(tmp.path("w4.csv")));
}
