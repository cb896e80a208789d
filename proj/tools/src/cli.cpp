#include "sentinel_cli/cli.hpp"

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "sentinel/detectors.hpp"
#include "sentinel/error.hpp"
#include "sentinel/graph.hpp"
#include "sentinel/harness.hpp"
#include "sentinel/models.hpp"

namespace sentinel::cli {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr const char* kProgram = "subgraph_sentinel";

struct Options {
  std::string config;
  // model
  std::string model = "null";
  std::size_t N = 0;
  std::size_t n = 0;
  double p0 = 0.0;
  double p0_prime = 0.0;
  double p1 = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  bool uniform_planted = false;
  // detector
  std::string graph;
  std::string detector;
  std::string mode;
  std::uint64_t budget_enumeration = SearchBudget{}.enumeration;
  std::uint64_t budget_nodes = SearchBudget{}.nodes;
  bool lower_bound = false;
  // calibration and risk
  double alpha = 0.05;
  std::size_t replicates = 0;
  std::size_t calibration_replicates = 199;
  std::string method = "monte_carlo";
  unsigned workers = 0;
  // output
  std::string out;
  std::string graph_out = "graph.txt";
  std::string planted_out;
  std::string format = "csv";
  bool timings = false;
  std::string resume;
  // classify
  std::string knowledge = "known";
  bool no_constraints = false;
  double n_p0_threshold = 0.5;
};

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidSpec:
    case ErrorKind::InvalidSpecPair:
    case ErrorKind::MismatchedNullSpec:
    case ErrorKind::InsufficientReplicates:
      return kConfigError;
    case ErrorKind::IoError:
    case ErrorKind::ParseError:
      return kIoError;
    case ErrorKind::BudgetExceeded:
    case ErrorKind::TimeBudgetExceeded:
      return kBudgetExceeded;
    default:
      return kDetectorError;
  }
}

std::string utc_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream s;
  s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return s.str();
}

// Final value of every option on `sub`, from flags, config or defaults.
json resolved_config(const CLI::App& sub) {
  json j = json::object();
  for (const CLI::Option* opt : sub.get_options()) {
    if (opt->get_lnames().empty()) continue;
    const std::string& name = opt->get_lnames().front();
    if (name == "help" || name == "config") continue;
    if (opt->get_expected_min() == 0) {
      j[name] = opt->count() > 0;
    } else if (opt->count() > 0) {
      j[name] = opt->results().back();
    } else {
      j[name] = opt->get_default_str();
    }
  }
  return j;
}

void write_run_log(const CLI::App& sub, const std::string& out_path, std::ostream& err, double seconds) {
  json log{{"subcommand", sub.get_name()},
           {"config", resolved_config(sub)},
           {"started_utc", utc_now()},
           {"seconds", seconds}};
  if (out_path.empty()) {
    err << "resolved config: " << log.dump() << '\n';
    return;
  }
  std::ofstream f(out_path + ".run.json");
  require(static_cast<bool>(f), ErrorKind::IoError, "cannot write " + out_path + ".run.json");
  f << log.dump(2) << '\n';
}

// Splices config-file values in front of the user's flags, so flags given on
// the command line win (options take their last value).
std::vector<std::string> merge_config(const std::vector<std::string>& args, const CLI::App& app) {
  if (args.empty() || args.front().starts_with("-")) return args;
  const CLI::App* sub = nullptr;
  try {
    sub = app.get_subcommand(args.front());
  } catch (const CLI::OptionNotFound&) {
    return args;
  }
  if (sub->get_name() == "phase") return args;
  std::string path;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].starts_with("--config=")) path = args[i].substr(9);
  }
  if (path.empty()) return args;
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorKind::IoError, "cannot open config " + path);
  const json cfg = json::parse(in, nullptr, false);
  require(!cfg.is_discarded() && cfg.is_object(), ErrorKind::InvalidSpec, "config " + path + " is not a JSON object");

  std::vector<std::string> merged{args.front()};
  for (const auto& [raw_key, val] : cfg.items()) {
    std::string key = raw_key;
    std::replace(key.begin(), key.end(), '_', '-');
    const CLI::Option* opt = nullptr;
    for (const CLI::Option* o : sub->get_options())
      if (!o->get_lnames().empty() && o->get_lnames().front() == key) opt = o;
    require(opt != nullptr && key != "config", ErrorKind::InvalidSpec,
            "unknown config key '" + raw_key + "' for " + sub->get_name());
    if (opt->get_expected_min() == 0) {
      if (val.get<bool>()) merged.push_back("--" + key);
    } else {
      merged.push_back("--" + key);
      merged.push_back(val.is_string() ? val.get<std::string>() : val.dump());
    }
  }
  merged.insert(merged.end(), args.begin() + 1, args.end());
  return merged;
}

DetectorParams detector_params(const Options& o, DetectorId id) {
  DetectorParams p;
  p.n = o.n;
  p.budget = {o.budget_enumeration, o.budget_nodes};
  p.relaxed_lower_bound = o.lower_bound;
  if (!o.mode.empty()) {
    if (id == DetectorId::DensestSubgraph)
      p.densest_mode = parse_densest_mode(o.mode);
    else
      p.scan_mode = parse_scan_mode(o.mode);
  }
  return p;
}

ModelSpec model_spec(const Options& o) {
  ModelSpec s;
  if (o.model == "null")
    s = ModelSpec::null(o.N, o.p0);
  else if (o.model == "planted")
    s = ModelSpec::planted(o.N, o.p0, o.n, o.p1);
  else if (o.model == "fixed_degree")
    s = ModelSpec::fixed_degree(o.N, o.p0_prime > 0.0 ? o.p0_prime : o.p0, o.n, o.p1);
  else
    fail(ErrorKind::InvalidSpec, "unknown model '" + o.model + "' (expected null, planted or fixed_degree)");
  s.validate();
  return s;
}

std::ostream& open_output(const std::string& path, std::ofstream& file, std::ostream& fallback) {
  if (path.empty()) return fallback;
  file.open(path);
  require(static_cast<bool>(file), ErrorKind::IoError, "cannot write " + path);
  return file;
}

void cmd_sample(const Options& o) {
  const ModelSpec spec = model_spec(o);
  const Sample s = sample(spec, {o.seed, o.stream},
                          o.uniform_planted ? PlantedChoice::UniformRandom : PlantedChoice::Default);
  write_graph(s.graph, o.graph_out);
  if (s.planted) {
    const std::string path = o.planted_out.empty() ? o.graph_out + ".planted" : o.planted_out;
    std::ofstream f(path);
    require(static_cast<bool>(f), ErrorKind::IoError, "cannot write " + path);
    for (Node v : *s.planted) f << v << '\n';
    require(static_cast<bool>(f), ErrorKind::IoError, "write failed for " + path);
  }
}

void cmd_stat(const Options& o, std::ostream& out) {
  const DetectorId id = parse_detector(o.detector);
  const Graph g = read_graph(o.graph);
  out << json(evaluate(id, detector_params(o, id), g)).dump() << '\n';
}

void cmd_calibrate(const Options& o, std::ostream& out) {
  const DetectorId id = parse_detector(o.detector);
  const DetectorParams params = detector_params(o, id);
  const CalibrationMethod method = parse_calibration_method(o.method);
  const RunOptions run{o.workers};
  const std::size_t reps = o.replicates == 0 ? 999 : o.replicates;
  CalibratedTest t;
  if (method == CalibrationMethod::ParametricBootstrap) {
    require(!o.graph.empty(), ErrorKind::InvalidSpec, "bootstrap calibration needs --graph");
    t = bootstrap_calibrate(id, params, read_graph(o.graph), o.alpha, reps, o.seed, run);
  } else {
    t = calibrate(id, params, ModelSpec::null(o.N, o.p0), o.alpha, reps, o.seed, method, run);
  }
  std::ofstream file;
  open_output(o.out, file, out) << json(t).dump() << '\n';
}

void write_rows(const std::vector<SweepRow>& rows, const Options& o, std::ostream& out) {
  std::ofstream file;
  std::ostream& dst = open_output(o.out, file, out);
  if (o.format == "csv") {
    dst << risk_csv_header() << '\n';
    for (const auto& r : rows) dst << risk_csv_row(r, o.timings) << '\n';
  } else if (o.format == "json") {
    for (const auto& r : rows) {
      json j = r;
      if (!o.timings) j.erase("seconds");
      dst << j.dump() << '\n';
    }
  } else {
    fail(ErrorKind::InvalidSpec, "unknown format '" + o.format + "' (expected csv or json)");
  }
  require(static_cast<bool>(dst), ErrorKind::IoError, "write failed");
}

void log_row(std::ostream& err, const SweepRow& r) {
  err << "[" << detector_name(r.detector) << " N=" << r.cell.N << " n=" << r.cell.n
      << " p0=" << format_number(r.cell.p0) << " p1=" << format_number(r.cell.p1) << "] ";
  if (r.risk)
    err << "gamma=" << format_number(r.risk->gamma_hat);
  else
    err << "error: " << r.error;
  err << " (" << std::fixed << std::setprecision(2) << r.seconds << "s)\n" << std::defaultfloat;
}

void cmd_risk(const Options& o, std::ostream& out, std::ostream& err) {
  SweepConfig cfg;
  SweepCell cell;
  cell.N = o.N;
  cell.n = o.n;
  cell.p0 = o.model == "fixed_degree" && o.p0_prime > 0.0 ? o.p0_prime : o.p0;
  cell.p1 = o.p1;
  if (o.model == "planted")
    cell.model = ModelVariant::PlantedKnownP0;
  else if (o.model == "fixed_degree")
    cell.model = ModelVariant::PlantedFixedDegree;
  else
    fail(ErrorKind::InvalidSpec, "risk needs --model planted or fixed_degree");
  cfg.cells = {cell};
  cfg.detectors = {parse_detector(o.detector)};
  cfg.params = detector_params(o, cfg.detectors.front());
  cfg.alpha = o.alpha;
  cfg.calibration_replicates = o.calibration_replicates;
  cfg.replicates = o.replicates;
  cfg.seed = o.seed;
  const auto rows = phase_sweep(cfg, std::nullopt, RunOptions{o.workers}, [&](const SweepRow& r) { log_row(err, r); });
  write_rows(rows, o, out);
}

void cmd_phase(const Options& o, std::ostream& out, std::ostream& err) {
  std::ifstream in(o.config);
  require(static_cast<bool>(in), ErrorKind::IoError, "cannot open sweep config " + o.config);
  const json j = json::parse(in, nullptr, false);
  require(!j.is_discarded(), ErrorKind::InvalidSpec, "sweep config " + o.config + " is not valid JSON");
  const SweepConfig cfg = j.get<SweepConfig>();
  std::optional<fs::path> checkpoint;
  if (!o.resume.empty()) checkpoint = fs::path(o.resume);
  const auto rows = phase_sweep(cfg, checkpoint, RunOptions{o.workers}, [&](const SweepRow& r) { log_row(err, r); });
  write_rows(rows, o, out);
}

void cmd_classify(const Options& o, std::ostream& out) {
  const RegimeReport r = classify_regime(o.N, o.n, o.p0, o.p1, parse_knowledge(o.knowledge), !o.no_constraints,
                                         o.n_p0_threshold);
  out << json(r).dump() << '\n';
}

void add_model_flags(CLI::App* sub, Options& o, bool with_null) {
  sub->add_option("--model", o.model, with_null ? "null, planted or fixed_degree" : "planted or fixed_degree");
  sub->add_option("--N", o.N, "number of nodes");
  sub->add_option("--n", o.n, "community size");
  sub->add_option("--p0", o.p0, "null connection probability (p0' for fixed_degree)");
  sub->add_option("--p0-prime", o.p0_prime, "fixed_degree background probability (overrides --p0)");
  sub->add_option("--p1", o.p1, "connection probability inside the community");
}

void add_detector_flags(CLI::App* sub, Options& o) {
  sub->add_option("--detector", o.detector,
                  "total_degree, max_degree, degree_variance, scan, glr, clique_number, densest_subgraph, "
                  "densest_at_least or relaxed_scan")
      ->required();
  sub->add_option("--mode", o.mode,
                  "scan and glr: exact, branch_bound (default) or greedy; densest_subgraph: exact_flow (default) "
                  "or peel");
  sub->add_option("--budget-enumeration", o.budget_enumeration, "exact scan subset budget");
  sub->add_option("--budget-nodes", o.budget_nodes, "branch-and-bound node budget");
  sub->add_flag("--lower-bound", o.lower_bound, "relaxed_scan: also report the sparse-eigenvalue lower bound");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  // One option set per subcommand, so per-command defaults stay separate.
  Options so, to, co, ro, po, lo;
  ro.model = "planted";
  co.replicates = 999;
  ro.replicates = 200;
  CLI::App app{"Detection of dense subgraphs in random graphs", kProgram};
  app.option_defaults()->always_capture_default()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  app.set_version_flag("--version", "subgraph_sentinel 0.1.0");

  auto* sample_cmd = app.add_subcommand("sample", "Draw a graph from a null or planted model");
  sample_cmd->add_option("--config", so.config, "JSON file with flag values; flags override it");
  add_model_flags(sample_cmd, so, true);
  sample_cmd->add_option("--seed", so.seed, "master seed");
  sample_cmd->add_option("--stream", so.stream, "stream index under the master seed");
  sample_cmd->add_flag("--uniform-planted", so.uniform_planted, "draw the planted set uniformly");
  sample_cmd->add_option("--out", so.graph_out, "graph file");
  sample_cmd->add_option("--planted-out", so.planted_out, "planted set file (default: <out>.planted)");

  auto* stat_cmd = app.add_subcommand("stat", "Evaluate a detector on a graph file");
  stat_cmd->add_option("--config", to.config, "JSON file with flag values; flags override it");
  stat_cmd->add_option("--graph", to.graph, "edge-list graph file")->required();
  add_detector_flags(stat_cmd, to);
  stat_cmd->add_option("--n", to.n, "community size");

  auto* cal_cmd = app.add_subcommand("calibrate", "Calibrate a detector threshold under the null");
  cal_cmd->add_option("--config", co.config, "JSON file with flag values; flags override it");
  add_detector_flags(cal_cmd, co);
  cal_cmd->add_option("--n", co.n, "community size");
  cal_cmd->add_option("--N", co.N, "number of nodes");
  cal_cmd->add_option("--p0", co.p0, "null connection probability");
  cal_cmd->add_option("--alpha", co.alpha, "level");
  cal_cmd->add_option("--replicates", co.replicates, "null replicates");
  cal_cmd->add_option("--method", co.method, "monte_carlo, bootstrap or analytic_binomial");
  cal_cmd->add_option("--graph", co.graph, "observed graph (bootstrap)");
  cal_cmd->add_option("--seed", co.seed, "master seed");
  cal_cmd->add_option("--workers", co.workers, "worker threads (0: SUBGRAPH_SENTINEL_WORKERS or all cores)");
  cal_cmd->add_option("--out", co.out, "output file (default: standard output)");

  auto* risk_cmd = app.add_subcommand("risk", "Estimate type I, type II and total risk of a calibrated test");
  risk_cmd->add_option("--config", ro.config, "JSON file with flag values; flags override it");
  add_detector_flags(risk_cmd, ro);
  add_model_flags(risk_cmd, ro, false);
  risk_cmd->add_option("--alpha", ro.alpha, "level");
  risk_cmd->add_option("--calibration-replicates", ro.calibration_replicates, "null replicates for the threshold");
  risk_cmd->add_option("--replicates", ro.replicates, "replicates per hypothesis");
  risk_cmd->add_option("--seed", ro.seed, "master seed");
  risk_cmd->add_option("--workers", ro.workers, "worker threads (0: SUBGRAPH_SENTINEL_WORKERS or all cores)");
  risk_cmd->add_option("--format", ro.format, "csv or json");
  risk_cmd->add_option("--out", ro.out, "output file (default: standard output)");
  risk_cmd->add_flag("--timings", ro.timings, "fill the seconds column");

  auto* phase_cmd = app.add_subcommand("phase", "Run a risk sweep over a parameter grid");
  phase_cmd->add_option("--config", po.config, "sweep JSON: cells, detectors, params, alpha, replicates, seed")
      ->required();
  phase_cmd->add_option("--resume", po.resume, "checkpoint directory; finished rows are reused");
  phase_cmd->add_option("--workers", po.workers, "worker threads (0: SUBGRAPH_SENTINEL_WORKERS or all cores)");
  phase_cmd->add_option("--format", po.format, "csv or json");
  phase_cmd->add_option("--out", po.out, "output file (default: standard output)");
  phase_cmd->add_flag("--timings", po.timings, "fill the seconds column");

  auto* cls_cmd = app.add_subcommand("classify", "Evaluate the detection-boundary conditions");
  cls_cmd->add_option("--config", lo.config, "JSON file with flag values; flags override it");
  cls_cmd->add_option("--N", lo.N, "number of nodes");
  cls_cmd->add_option("--n", lo.n, "community size");
  cls_cmd->add_option("--p0", lo.p0, "null probability (p0' when unknown)");
  cls_cmd->add_option("--p1", lo.p1, "community probability");
  cls_cmd->add_option("--knowledge", lo.knowledge, "known or unknown");
  cls_cmd->add_flag("--no-constraints", lo.no_constraints, "skip the side conditions");
  cls_cmd->add_option("--n-p0-threshold", lo.n_p0_threshold, "threshold for the n p0 side condition");

  const auto start = std::chrono::steady_clock::now();
  CLI::App* sub = nullptr;
  try {
    std::vector<std::string> merged = merge_config(args, app);
    std::reverse(merged.begin(), merged.end());
    app.parse(merged);
    sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    const Options* used = &lo;
    if (name == "sample") {
      cmd_sample(*(used = &so));
    } else if (name == "stat") {
      cmd_stat(*(used = &to), out);
    } else if (name == "calibrate") {
      cmd_calibrate(*(used = &co), out);
    } else if (name == "risk") {
      cmd_risk(*(used = &ro), out, err);
    } else if (name == "phase") {
      cmd_phase(*(used = &po), out, err);
    } else {
      cmd_classify(lo, out);
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_run_log(*sub, name == "sample" ? used->graph_out : used->out, err, secs);
    return kOk;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  } catch (const Error& e) {
    if (sub != nullptr && sub->get_name() == "stat" && exit_code(e.kind()) != kConfigError) {
      out << json{{"error", error_name(e.kind())}, {"message", e.what()}}.dump() << '\n';
    }
    err << kProgram << ": " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const json::exception& e) {
    err << kProgram << ": config error: " << e.what() << '\n';
    return kConfigError;
  }
}

}  // namespace sentinel::cli
