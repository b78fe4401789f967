// slidecard: sliding-window super point detection and cardinality estimation
// over IP-pair traces, with distributed sketch merging and an exact oracle
// for accuracy evaluation.

#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "slidecard/config.hpp"
#include "slidecard/distributed.hpp"
#include "slidecard/errors.hpp"
#include "slidecard/exact_oracle.hpp"
#include "slidecard/io_util.hpp"
#include "slidecard/occupancy.hpp"
#include "slidecard/report.hpp"
#include "slidecard/sketch_io.hpp"
#include "slidecard/trace.hpp"
#include "slidecard/trace_gen.hpp"
#include "slidecard/window.hpp"

using namespace slidecard;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitParse = 3;
constexpr int kExitResource = 4;
constexpr int kExitIncompatible = 5;

// parameter-file path plus per-flag overrides; flags win
struct ParamArgs {
  std::string params_file;
  std::optional<uint32_t> q, r, delta, eta;
  std::optional<uint32_t> q_prime, r_prime, delta_prime, eta_prime;
  std::optional<uint64_t> theta, seed;

  SketchParams resolve() const {
    SketchParams p;
    if (!params_file.empty()) p = SketchParams::load_file(params_file);
    if (q) p.q = *q;
    if (r) p.r = *r;
    if (delta) p.delta = *delta;
    if (eta) p.eta = *eta;
    if (q_prime) p.q_prime = *q_prime;
    if (r_prime) p.r_prime = *r_prime;
    if (delta_prime) p.delta_prime = *delta_prime;
    if (eta_prime) p.eta_prime = *eta_prime;
    if (theta) p.theta = *theta;
    if (seed) p.seed = *seed;
    p.validate();
    return p;
  }
};

void add_param_flags(CLI::App* cmd, ParamArgs& args) {
  cmd->add_option("--params", args.params_file, "parameter file (key = value)");
  cmd->add_option("--q", args.q, "rough-array column bits");
  cmd->add_option("--r", args.r, "rough-array rows");
  cmd->add_option("--delta", args.delta, "reversible hash bit stride");
  cmd->add_option("--eta", args.eta, "counters per rough estimator");
  cmd->add_option("--q-prime", args.q_prime, "linear-array column bits");
  cmd->add_option("--r-prime", args.r_prime, "linear-array rows");
  cmd->add_option("--delta-prime", args.delta_prime, "linear estimator offset");
  cmd->add_option("--eta-prime", args.eta_prime, "counters per linear estimator");
  cmd->add_option("--theta", args.theta, "super point threshold");
  cmd->add_option("--seed", args.seed, "master hash seed");
}

struct WindowArgs {
  double slice_seconds = 1.0;
  uint32_t k = 300;
  std::optional<uint64_t> t0_us;
  uint64_t tolerance_us = 0;
  uint32_t workers = 1;

  void fill(WindowConfig& cfg) const {
    if (slice_seconds <= 0) throw ConfigError("slice duration must be positive");
    cfg.slice_us = static_cast<uint64_t>(std::llround(slice_seconds * 1e6));
    if (cfg.slice_us == 0) throw ConfigError("slice duration must be at least 1 microsecond");
    cfg.k = k;
    cfg.t0_us = t0_us;
    cfg.regression_tolerance_us = tolerance_us;
    cfg.workers = workers;
  }
};

void add_window_flags(CLI::App* cmd, WindowArgs& args) {
  cmd->add_option("--slice", args.slice_seconds, "slice duration in seconds");
  cmd->add_option("--k", args.k, "window length in slices");
  cmd->add_option("--t0", args.t0_us, "stream start (microseconds; default first record)");
  cmd->add_option("--tolerance-us", args.tolerance_us,
                  "timestamp regression tolerated by clamping into the current slice");
  cmd->add_option("--workers", args.workers, "intra-slice worker threads");
}

void print_window_summary(const DetectionReport& r) {
  std::string hot;
  for (size_t i = 0; i < r.hot_per_row.size(); ++i) {
    if (i) hot += '/';
    hot += std::to_string(r.hot_per_row[i]);
  }
  char sf[32];
  snprintf(sf, sizeof(sf), "%.6g", r.sf_product);
  printf("window=%llu candidates=%llu reported=%zu overflow=%d saturated=%d sf=%s hot=%s partial=%d\n",
         static_cast<unsigned long long>(r.window_end_slice),
         static_cast<unsigned long long>(r.candidate_count), r.entries.size(),
         r.overflow ? 1 : 0, r.slea_saturated ? 1 : 0, sf,
         hot.empty() ? "-" : hot.c_str(), r.partial ? 1 : 0);
}

struct DetectArgs {
  std::string trace;
  std::string anet;
  std::string out;
  ParamArgs params;
  WindowArgs window;
  bool reinit = false;
  bool verbose_candidates = false;
  bool skip_bad_lines = false;
  uint64_t tuple_cap = uint64_t{1} << 22;
  std::vector<std::string> from_sketch;
};

int run_detect(const DetectArgs& args) {
  const SketchParams params = args.params.resolve();

  WindowConfig cfg;
  args.window.fill(cfg);
  cfg.theta = params.theta;
  cfg.reinit_per_window = args.reinit;
  cfg.keep_below_threshold = args.verbose_candidates;
  cfg.tuple_cap = args.tuple_cap;
  cfg.validate();

  std::ostringstream csv;
  write_report_header(csv);
  uint64_t windows = 0;

  if (!args.from_sketch.empty()) {
    if (args.from_sketch.size() != 2)
      throw ConfigError("--from-sketch needs exactly two files (rough and linear array)");
    std::optional<Rsra> rsra;
    std::optional<Slea> slea;
    for (const auto& path : args.from_sketch) {
      AnySketch s = load_sketch_file(path);
      if (std::holds_alternative<Rsra>(s)) {
        if (rsra) throw ConfigError("--from-sketch: two rough arrays given");
        rsra = std::get<Rsra>(std::move(s));
      } else {
        if (slea) throw ConfigError("--from-sketch: two linear arrays given");
        slea = std::get<Slea>(std::move(s));
      }
    }
    if (!rsra || !slea)
      throw ConfigError("--from-sketch needs one rough array and one linear array");
    if (rsra->slides() != slea->slides())
      throw IncompatibleSketchError("sketch pair disagrees on slice position");

    DetectionReport report =
        run_detection(*rsra, *slea, rsra->slides(), /*partial=*/false, cfg);
    print_window_summary(report);
    write_report(report, csv);
    windows = 1;
    write_file_atomic(args.out, [&csv](std::ostream& out) { out << csv.str(); });
    printf("windows=%llu\n", static_cast<unsigned long long>(windows));
    return kExitOk;
  }

  if (args.trace.empty()) throw ConfigError("detect needs --trace (or --from-sketch)");
  if (args.anet.empty()) throw ConfigError("detect needs --anet");
  const AnetSpec anet = AnetSpec::parse(args.anet);

  WindowEngine engine(cfg, Rsra(params.rsra_config()), Slea(params.slea_config()),
                      [&](const DetectionReport& r) {
                        print_window_summary(r);
                        write_report(r, csv);
                        ++windows;
                      });

  TraceReader reader(args.trace, {.skip_malformed = args.skip_bad_lines});
  uint64_t packets = 0, outside = 0;
  std::array<TraceRecord, 2> out{};
  while (auto p = reader.next()) {
    ++packets;
    const int n = classify(*p, anet, out);
    if (n == 0) ++outside;
    for (int i = 0; i < n; ++i) engine.process(out[i]);
  }
  engine.finish();

  write_file_atomic(args.out, [&csv](std::ostream& o) { o << csv.str(); });
  printf("packets=%llu records=%llu outside=%llu clamped=%llu malformed=%llu windows=%llu\n",
         static_cast<unsigned long long>(packets),
         static_cast<unsigned long long>(engine.records()),
         static_cast<unsigned long long>(outside),
         static_cast<unsigned long long>(engine.clamped()),
         static_cast<unsigned long long>(reader.malformed_skipped()),
         static_cast<unsigned long long>(windows));
  return kExitOk;
}

struct NodeArgs {
  std::string trace;
  std::string anet;
  std::string out_prefix;
  ParamArgs params;
  WindowArgs window;
  std::optional<uint64_t> end_slice;
  bool skip_bad_lines = false;
};

int run_node(const NodeArgs& args) {
  const SketchParams params = args.params.resolve();
  if (!args.window.t0_us)
    throw ConfigError("node needs an explicit --t0 so every node slices identically");

  WindowConfig cfg;
  args.window.fill(cfg);
  cfg.theta = params.theta;
  cfg.k = 65534;  // node only builds sketches; suppress mid-stream detection
  cfg.validate();

  const AnetSpec anet = AnetSpec::parse(args.anet);
  WindowEngine engine(cfg, Rsra(params.rsra_config()), Slea(params.slea_config()), nullptr);

  TraceReader reader(args.trace, {.skip_malformed = args.skip_bad_lines});
  uint64_t packets = 0, outside = 0;
  std::array<TraceRecord, 2> out{};
  while (auto p = reader.next()) {
    ++packets;
    const int n = classify(*p, anet, out);
    if (n == 0) ++outside;
    for (int i = 0; i < n; ++i) engine.process(out[i]);
  }
  if (args.end_slice) {
    if (*args.end_slice < engine.current_slice())
      throw ConfigError("--end-slice precedes the last record's slice");
    engine.advance_to_slice(*args.end_slice);
  }
  engine.finish();

  save_sketch_file(AnySketch(engine.rsra()), args.out_prefix + ".rsra");
  save_sketch_file(AnySketch(engine.slea()), args.out_prefix + ".slea");
  printf("packets=%llu records=%llu outside=%llu end_slice=%llu\n",
         static_cast<unsigned long long>(packets),
         static_cast<unsigned long long>(engine.records()),
         static_cast<unsigned long long>(outside),
         static_cast<unsigned long long>(engine.current_slice()));
  return kExitOk;
}

struct MergeArgs {
  std::vector<std::string> inputs;
  std::string out;
};

int run_merge(const MergeArgs& args) {
  AnySketch merged = load_sketch_file(args.inputs[0]);
  for (size_t i = 1; i < args.inputs.size(); ++i) {
    AnySketch next = load_sketch_file(args.inputs[i]);
    if (merged.index() != next.index())
      throw IncompatibleSketchError(args.inputs[i] + ": sketch type differs from " +
                                    args.inputs[0]);
    if (std::holds_alternative<Rsra>(merged))
      std::get<Rsra>(merged).merge_min(std::get<Rsra>(next));
    else
      std::get<Slea>(merged).merge_min(std::get<Slea>(next));
  }
  save_sketch_file(merged, args.out);
  const uint64_t bytes = std::holds_alternative<Rsra>(merged)
                             ? serialized_size(std::get<Rsra>(merged))
                             : serialized_size(std::get<Slea>(merged));
  printf("merged=%zu type=%s bytes=%llu\n", args.inputs.size(),
         std::holds_alternative<Rsra>(merged) ? "rsra" : "slea",
         static_cast<unsigned long long>(bytes));
  return kExitOk;
}

struct OracleArgs {
  std::string trace;
  std::string anet;
  std::string out;
  WindowArgs window;
  uint64_t theta = 1024;
  uint64_t max_pairs = 100'000'000;
  bool skip_bad_lines = false;
};

int run_oracle(const OracleArgs& args) {
  if (args.window.slice_seconds <= 0) throw ConfigError("slice duration must be positive");

  ExactSlidingOracle::Options opt;
  opt.theta = args.theta;
  opt.k = args.window.k;
  opt.t0_us = args.window.t0_us;
  opt.slice_us = static_cast<uint64_t>(std::llround(args.window.slice_seconds * 1e6));
  opt.regression_tolerance_us = args.window.tolerance_us;
  opt.max_pairs = args.max_pairs;

  std::ostringstream csv;
  csv << "window_end_slice,aip,exact_cardinality\n";
  uint64_t windows = 0;
  ExactSlidingOracle oracle(opt, [&](const TruthWindow& w) {
    for (const auto& e : w.supers)
      csv << w.window_end_slice << ',' << format_ipv4(e.aip) << ',' << e.cardinality << '\n';
    ++windows;
  });

  const AnetSpec anet = AnetSpec::parse(args.anet);
  TraceReader reader(args.trace, {.skip_malformed = args.skip_bad_lines});
  uint64_t packets = 0;
  std::array<TraceRecord, 2> out{};
  while (auto p = reader.next()) {
    ++packets;
    const int n = classify(*p, anet, out);
    for (int i = 0; i < n; ++i) oracle.process(out[i]);
  }
  oracle.finish();

  write_file_atomic(args.out, [&csv](std::ostream& o) { o << csv.str(); });
  printf("packets=%llu pairs=%llu windows=%llu\n",
         static_cast<unsigned long long>(packets),
         static_cast<unsigned long long>(oracle.distinct_pairs()),
         static_cast<unsigned long long>(windows));
  return kExitOk;
}

struct CompareArgs {
  std::string report;
  std::string truth;
  std::string out;
};

int run_compare(const CompareArgs& args) {
  std::istringstream report_in(read_file(args.report));
  std::istringstream truth_in(read_file(args.truth));
  const auto report_rows = read_report_csv(report_in, args.report);
  const auto truth_rows = read_report_csv(truth_in, args.truth);

  std::map<uint64_t, std::vector<uint32_t>> detected;
  for (const auto& r : report_rows) detected[r.window_end_slice].push_back(r.aip);
  std::map<uint64_t, std::vector<TruthEntry>> truth;
  for (const auto& r : truth_rows)
    truth[r.window_end_slice].push_back(
        TruthEntry{r.aip, static_cast<uint64_t>(r.value)});

  if (!detected.empty() && !truth.empty()) {
    bool overlap = false;
    for (const auto& [w, _] : detected)
      if (truth.count(w)) {
        overlap = true;
        break;
      }
    if (!overlap)
      throw ConfigError("report and truth share no window; comparing different runs?");
  }

  std::map<uint64_t, bool> windows;
  for (const auto& [w, _] : detected) windows[w] = true;
  for (const auto& [w, _] : truth) windows[w] = true;

  std::ostringstream csv;
  csv << "window_end_slice,n_true,n_detected,n_false_pos,n_false_neg,fpr,fnr,tfr\n";
  double sum_fpr = 0, sum_fnr = 0, sum_tfr = 0;
  uint64_t defined = 0, tot_true = 0, tot_det = 0, tot_fp = 0, tot_fn = 0;
  char num[64];
  for (const auto& [w, _] : windows) {
    static const std::vector<uint32_t> no_det;
    static const std::vector<TruthEntry> no_truth;
    const auto& det = detected.count(w) ? detected[w] : no_det;
    const auto& tru = truth.count(w) ? truth[w] : no_truth;
    const AccuracyResult r = score(w, det, tru);
    tot_true += r.n_true;
    tot_det += r.n_detected;
    tot_fp += r.n_false_pos;
    tot_fn += r.n_false_neg;
    csv << w << ',' << r.n_true << ',' << r.n_detected << ',' << r.n_false_pos << ','
        << r.n_false_neg << ',';
    if (r.defined) {
      snprintf(num, sizeof(num), "%.6f,%.6f,%.6f", r.fpr, r.fnr, r.tfr);
      csv << num << '\n';
      sum_fpr += r.fpr;
      sum_fnr += r.fnr;
      sum_tfr += r.tfr;
      ++defined;
    } else {
      csv << "n/a,n/a,n/a\n";
    }
  }
  csv << "average," << tot_true << ',' << tot_det << ',' << tot_fp << ',' << tot_fn << ',';
  if (defined > 0) {
    snprintf(num, sizeof(num), "%.6f,%.6f,%.6f", sum_fpr / defined, sum_fnr / defined,
             sum_tfr / defined);
    csv << num << '\n';
  } else {
    csv << "n/a,n/a,n/a\n";
  }

  write_file_atomic(args.out, [&csv](std::ostream& o) { o << csv.str(); });
  if (defined > 0)
    printf("windows=%zu avg_fpr=%.6f avg_fnr=%.6f avg_tfr=%.6f\n", windows.size(),
           sum_fpr / defined, sum_fnr / defined, sum_tfr / defined);
  else
    printf("windows=%zu avg_fpr=n/a avg_fnr=n/a avg_tfr=n/a\n", windows.size());
  return kExitOk;
}

struct AnalyzeArgs {
  uint64_t card = 0;
  uint32_t eta = 8;
  uint32_t tau = 0;
  uint32_t n = 0;
};

int run_analyze(const AnalyzeArgs& args) {
  if (args.eta == 0 || args.eta > 64) throw ConfigError("analyze: eta must be in [1, 64]");
  if (args.n > args.eta) throw ConfigError("analyze: n must be at most eta");
  char num[64];
  printf("kind,index,probability\n");
  for (uint32_t eta1 = 0; eta1 <= args.eta; ++eta1) {
    snprintf(num, sizeof(num), "%.12g", prob_weight_eq(args.card, args.eta, args.tau, eta1));
    printf("eq,%u,%s\n", eta1, num);
  }
  snprintf(num, sizeof(num), "%.12g", prob_weight_ge(args.card, args.eta, args.tau, args.n));
  printf("ge,%u,%s\n", args.n, num);
  return kExitOk;
}

struct GenTraceArgs {
  std::string spec;
  uint64_t seed = 1;
  std::string out_prefix;
};

int run_gen_trace(const GenTraceArgs& args) {
  const TraceGenSpec spec = TraceGenSpec::load_file(args.spec);
  const TraceGenResult r = gen_trace(spec, args.seed, args.out_prefix);
  printf("records=%llu truth_rows=%llu\n", static_cast<unsigned long long>(r.records),
         static_cast<unsigned long long>(r.truth_rows));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sliding-window super point detection and cardinality estimation"};
  app.require_subcommand(1);

  DetectArgs detect_args;
  auto* detect = app.add_subcommand(
      "detect", "detect super points over a trace and estimate their cardinalities");
  detect->add_option("--trace", detect_args.trace, "IP-pair trace file");
  detect->add_option("--anet", detect_args.anet, "monitored network, comma-separated CIDRs");
  detect->add_option("--out", detect_args.out, "report CSV output")->required();
  add_param_flags(detect, detect_args.params);
  add_window_flags(detect, detect_args.window);
  detect->add_flag("--reinit", detect_args.reinit,
                   "reinitialize per window (strict discrete mode, k = 1)");
  detect->add_flag("--verbose-candidates", detect_args.verbose_candidates,
                   "keep candidates whose estimate is below theta");
  detect->add_flag("--skip-bad-lines", detect_args.skip_bad_lines,
                   "count malformed trace lines instead of aborting");
  detect->add_option("--tuple-cap", detect_args.tuple_cap,
                     "candidate tuple budget per window");
  detect->add_option("--from-sketch", detect_args.from_sketch,
                     "run detection on a merged sketch pair instead of a trace")
      ->expected(2);

  NodeArgs node_args;
  auto* node = app.add_subcommand(
      "node", "build sketches from one trace shard for offline merging");
  node->add_option("--trace", node_args.trace, "IP-pair trace shard")->required();
  node->add_option("--anet", node_args.anet, "monitored network")->required();
  node->add_option("--out-prefix", node_args.out_prefix,
                   "writes <prefix>.rsra and <prefix>.slea")
      ->required();
  add_param_flags(node, node_args.params);
  add_window_flags(node, node_args.window);
  node->add_option("--end-slice", node_args.end_slice,
                   "slide through this slice so all nodes align");
  node->add_flag("--skip-bad-lines", node_args.skip_bad_lines,
                 "count malformed trace lines instead of aborting");

  MergeArgs merge_args;
  auto* merge = app.add_subcommand("merge", "merge compatible sketch files (per-slot minimum)");
  merge->add_option("inputs", merge_args.inputs, "sketch files")->required()->expected(-1);
  merge->add_option("--out", merge_args.out, "merged sketch output")->required();

  OracleArgs oracle_args;
  auto* oracle = app.add_subcommand(
      "oracle", "exact per-window super points by brute force (ground truth)");
  oracle->add_option("--trace", oracle_args.trace, "IP-pair trace file")->required();
  oracle->add_option("--anet", oracle_args.anet, "monitored network")->required();
  oracle->add_option("--out", oracle_args.out, "truth CSV output")->required();
  add_window_flags(oracle, oracle_args.window);
  oracle->add_option("--theta", oracle_args.theta, "super point threshold");
  oracle->add_option("--max-pairs", oracle_args.max_pairs, "distinct pair budget");
  oracle->add_flag("--skip-bad-lines", oracle_args.skip_bad_lines,
                   "count malformed trace lines instead of aborting");

  CompareArgs compare_args;
  auto* compare =
      app.add_subcommand("compare", "score a detection report against ground truth");
  compare->add_option("--report", compare_args.report, "detection report CSV")->required();
  compare->add_option("--truth", compare_args.truth, "ground truth CSV")->required();
  compare->add_option("--out", compare_args.out, "accuracy CSV output")->required();

  AnalyzeArgs analyze_args;
  auto* analyze = app.add_subcommand(
      "analyze", "print the rough-estimator weight distribution for a cardinality");
  analyze->add_option("--card", analyze_args.card, "true cardinality")->required();
  analyze->add_option("--eta", analyze_args.eta, "estimator slot count");
  analyze->add_option("--tau", analyze_args.tau, "sampling threshold");
  analyze->add_option("--n", analyze_args.n, "tail threshold for the >= probability");

  GenTraceArgs gen_args;
  auto* gen = app.add_subcommand("gen-trace", "generate a synthetic trace plus ground truth");
  gen->add_option("--spec", gen_args.spec, "traffic spec file")->required();
  gen->add_option("--seed", gen_args.seed, "generator seed");
  gen->add_option("--out", gen_args.out_prefix, "output prefix")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*detect) return run_detect(detect_args);
    if (*node) return run_node(node_args);
    if (*merge) return run_merge(merge_args);
    if (*oracle) return run_oracle(oracle_args);
    if (*compare) return run_compare(compare_args);
    if (*analyze) return run_analyze(analyze_args);
    if (*gen) return run_gen_trace(gen_args);
  } catch (const ConfigError& e) {
    fprintf(stderr, "error: %s\n", e.what());
    return kExitConfig;
  } catch (const ParseError& e) {
    fprintf(stderr, "error: %s\n", e.what());
    return kExitParse;
  } catch (const IncompatibleSketchError& e) {
    fprintf(stderr, "error: %s\n", e.what());
    return kExitIncompatible;
  } catch (const ResourceError& e) {
    fprintf(stderr, "error: %s\n", e.what());
    return kExitResource;
  } catch (const std::exception& e) {
    fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return kExitOk;
}
