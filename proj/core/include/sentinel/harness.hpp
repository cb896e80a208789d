#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "sentinel/detectors.hpp"
#include "sentinel/graph.hpp"
#include "sentinel/models.hpp"

namespace sentinel {

// ---------------------------------------------------------------------------
// Parallel execution

/// Worker count from SUBGRAPH_SENTINEL_WORKERS, else hardware concurrency.
unsigned default_workers();

/// Calls fn(i) for i in [0, count) on `workers` threads. The first exception
/// thrown by any call is rethrown after all workers stop.
void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& fn);

struct RunOptions {
  unsigned workers = 0;  // 0 = default_workers()
  PlantedChoice planted_choice = PlantedChoice::Default;

  unsigned resolved_workers() const { return workers == 0 ? default_workers() : workers; }
};

// ---------------------------------------------------------------------------
// Calibration

enum class CalibrationMethod { MonteCarloKnownP0, ParametricBootstrap, AnalyticBinomial };

std::string_view calibration_method_name(CalibrationMethod m);
CalibrationMethod parse_calibration_method(std::string_view name);

/// Rejects iff statistic > threshold.
struct CalibratedTest {
  DetectorId detector_id = DetectorId::TotalDegree;
  DetectorParams params;
  double threshold = 0.0;
  double level_alpha = 0.05;
  CalibrationMethod method = CalibrationMethod::MonteCarloKnownP0;
  std::uint64_t calibration_seed = 0;
  std::size_t replicates = 0;
  ModelSpec null_spec;

  bool rejects_value(double statistic) const noexcept { return statistic > threshold; }
  bool rejects(const Graph& g) const { return rejects_value(evaluate(detector_id, params, g).value); }
};

void to_json(nlohmann::json& j, const CalibratedTest& t);

/// ceil((1 - alpha)(B + 1)), 1-based; throws InsufficientReplicates when it
/// exceeds B.
std::size_t calibration_rank(double alpha, std::size_t replicates);

/// Statistic values on `replicates` null draws; draw r uses stream r of
/// `seed`. Result is independent of the worker count.
std::vector<double> simulate_statistic(DetectorId id, const DetectorParams& params, const ModelSpec& spec,
                                       std::size_t replicates, std::uint64_t seed, const RunOptions& run = {});

/// Threshold from null_spec (a Null spec). AnalyticBinomial applies to the
/// total degree only and ignores `replicates`.
CalibratedTest calibrate(DetectorId id, const DetectorParams& params, const ModelSpec& null_spec, double alpha,
                         std::size_t replicates, std::uint64_t seed,
                         CalibrationMethod method = CalibrationMethod::MonteCarloKnownP0,
                         const RunOptions& run = {});

/// W / N^(2).
double estimate_p0_hat(const Graph& g);

/// Null replicates drawn at estimate_p0_hat(observed). Throws DegenerateGraph
/// when the estimate is 0 or 1.
CalibratedTest bootstrap_calibrate(DetectorId id, const DetectorParams& params, const Graph& observed, double alpha,
                                   std::size_t replicates, std::uint64_t seed, const RunOptions& run = {});

/// Calibrates on each observed graph separately (parametric bootstrap).
struct BootstrapTest {
  DetectorId detector_id = DetectorId::Scan;
  DetectorParams params;
  double level_alpha = 0.05;
  std::size_t replicates = 199;
  std::uint64_t seed = 0;
};

/// Rejects iff any component rejects.
struct CombinedTest {
  std::vector<CalibratedTest> parts;
};

/// Throws MismatchedNullSpec unless all parts share one null spec and level.
CombinedTest bonferroni_combine(std::vector<CalibratedTest> tests);

/// The likelihood ratio test {L > 1} under the uniform prior on S.
struct LikelihoodRatioTest {
  std::size_t n = 0;
  double p0 = 0.0;
  double p1 = 0.0;
};

using TestRule = std::variant<CalibratedTest, BootstrapTest, CombinedTest, LikelihoodRatioTest>;

/// `tag` separates the bootstrap streams of different observed graphs.
bool rejects(const TestRule& test, const Graph& g, std::uint64_t tag = 0);

// ---------------------------------------------------------------------------
// Risk

struct RiskReport {
  double type1_hat = 0.0;
  double type2_hat = 0.0;
  double gamma_hat = 0.0;
  /// 95% Clopper-Pearson half-widths; gamma's is the sum of the two.
  double half_width_type1 = 0.0;
  double half_width_type2 = 0.0;
  double half_width = 0.0;
  std::size_t replicates = 0;
  ModelSpec spec_null;
  ModelSpec spec_alt;
};

void to_json(nlohmann::json& j, const RiskReport& r);
void from_json(const nlohmann::json& j, RiskReport& r);

/// Half of the 95% Clopper-Pearson interval width for k successes in n.
double clopper_pearson_half_width(std::size_t k, std::size_t n);

/// Independent Monte Carlo under each hypothesis; draw r of each uses stream r.
/// Throws InvalidSpecPair unless null_spec is Null, alt_spec is planted, and
/// both share N.
RiskReport estimate_risk(const TestRule& test, const ModelSpec& null_spec, const ModelSpec& alt_spec,
                         std::size_t replicates, std::uint64_t seed, const RunOptions& run = {});

// ---------------------------------------------------------------------------
// Likelihood ratio

/// Subset budget for exact averaging over all n-subsets.
inline constexpr std::uint64_t kLikelihoodBudget = 1'000'000;

/// Counts of n-subsets by internal edge count: out[w] = #{|S| = n : W_S = w}.
std::vector<std::uint64_t> subset_edge_histogram(const Graph& g, std::size_t n,
                                                 std::uint64_t budget = kLikelihoodBudget);

/// L = mean over |S| = n of exp(theta W_S - Lambda(theta) n^(2)), theta = theta_{p1}.
/// At p1 = 1 this is the clique-count ratio; at p1 = p0 it is exactly 1.
double lr_statistic(const Graph& g, std::size_t n, double p0, double p1);

/// Risk of {L > 1}; alt_spec must be PlantedKnownP0.
RiskReport lr_oracle_risk(const ModelSpec& null_spec, const ModelSpec& alt_spec, std::size_t replicates,
                          std::uint64_t seed, const RunOptions& run = {});

// ---------------------------------------------------------------------------
// Regime classification

enum class Knowledge { KnownP0, UnknownP0 };
std::string_view knowledge_name(Knowledge k);
Knowledge parse_knowledge(std::string_view name);

enum class RegimeLabel {
  Undetectable,
  ScanRegime,
  TotalDegreeRegime,
  DegreeVarianceRegime,
  CliqueRegime,
  RelaxedScanRegime,
};
std::string_view regime_name(RegimeLabel r);

struct Predicate {
  std::string name;
  double value;
  /// Value the ratio is compared against.
  double threshold;
  bool holds;
};

struct RegimeReport {
  /// Cell of the detection-boundary table, and whether its condition holds.
  RegimeLabel label = RegimeLabel::Undetectable;
  /// Same for the polynomial-time table.
  RegimeLabel poly_label = RegimeLabel::Undetectable;
  std::string column;  // "small_n" or "large_n"
  std::string row;     // "dense" (n p0 >> log(N/n)) or "sparse"
  double cell_ratio = 0.0;
  double cell_threshold = 0.0;
  std::vector<Predicate> predicates;
  /// Side conditions; present when requested.
  std::optional<bool> n_p0_holds;
  std::optional<bool> n_log_holds;
};

void to_json(nlohmann::json& j, const RegimeReport& r);

/// `p0` is p0' under UnknownP0. Throws DomainError outside 1 <= n < N and
/// 0 < p0 <= p1 <= 1, p0 < 1.
RegimeReport classify_regime(std::size_t N, std::size_t n, double p0, double p1, Knowledge knowledge,
                             bool constraints_check = true, double n_p0_threshold = 0.5);

// ---------------------------------------------------------------------------
// Phase sweep

struct SweepCell {
  std::size_t N = 0;
  std::size_t n = 0;
  double p0 = 0.0;  // p0' for the fixed-degree model
  double p1 = 0.0;
  ModelVariant model = ModelVariant::PlantedKnownP0;

  friend bool operator==(const SweepCell&, const SweepCell&) = default;
};

struct SweepConfig {
  std::vector<SweepCell> cells;
  std::vector<DetectorId> detectors;
  /// `n` is overwritten per cell.
  DetectorParams params;
  double alpha = 0.05;
  std::size_t calibration_replicates = 199;
  std::size_t replicates = 200;
  std::uint64_t seed = 0;
};

void to_json(nlohmann::json& j, const SweepConfig& c);
void from_json(const nlohmann::json& j, SweepConfig& c);

struct SweepRow {
  SweepCell cell;
  DetectorId detector = DetectorId::TotalDegree;
  double alpha = 0.0;
  std::size_t replicates = 0;
  std::optional<RiskReport> risk;
  std::string regime;
  double seconds = 0.0;
  std::string error;  // empty on success
};

void to_json(nlohmann::json& j, const SweepRow& r);
void from_json(const nlohmann::json& j, SweepRow& r);

/// Stable 64-bit hash of a cell (FNV-1a over its canonical JSON).
std::uint64_t cell_hash(const SweepCell& c);

/// One row per (cell, detector) in grid order. With a checkpoint directory,
/// finished rows are appended to checkpoint.jsonl as they complete and rows
/// already present there are reused when alpha, both replicate counts and the
/// detector params match. Cell-level errors land in the row.
std::vector<SweepRow> phase_sweep(const SweepConfig& config,
                                  const std::optional<std::filesystem::path>& checkpoint_dir = std::nullopt,
                                  const RunOptions& run = {},
                                  const std::function<void(const SweepRow&)>& progress = {});

// ---------------------------------------------------------------------------
// Serialization

/// N,n,p0,p1,model,detector,alpha,replicates,type1,type2,gamma,ci_half,regime,seconds
std::string risk_csv_header();
/// `seconds` stays empty unless with_seconds, so outputs are reproducible.
std::string risk_csv_row(const SweepRow& row, bool with_seconds = false);

/// Shortest decimal form that round-trips; integral values print without a
/// fractional part.
std::string format_number(double v);

}  // namespace sentinel
