// Null calibration of detector thresholds and test combination.

#include <algorithm>
#include <cmath>
#include <string>

#include <nlohmann/json.hpp>

#include "sentinel/error.hpp"
#include "sentinel/harness.hpp"
#include "sentinel/kernels.hpp"

namespace sentinel {
namespace {

constexpr std::uint64_t kCalibrationTag = 0xCA11B;
constexpr std::uint64_t kBootstrapTag = 0xB0075;

}  // namespace

std::string_view calibration_method_name(CalibrationMethod m) {
  switch (m) {
    case CalibrationMethod::MonteCarloKnownP0:
      return "monte_carlo";
    case CalibrationMethod::ParametricBootstrap:
      return "bootstrap";
    case CalibrationMethod::AnalyticBinomial:
      return "analytic_binomial";
  }
  return "?";
}

CalibrationMethod parse_calibration_method(std::string_view name) {
  for (auto m : {CalibrationMethod::MonteCarloKnownP0, CalibrationMethod::ParametricBootstrap,
                 CalibrationMethod::AnalyticBinomial})
    if (calibration_method_name(m) == name) return m;
  fail(ErrorKind::InvalidSpec, "unknown calibration method '" + std::string(name) +
                                   "' (expected monte_carlo, bootstrap or analytic_binomial)");
}

void to_json(nlohmann::json& j, const CalibratedTest& t) {
  j = nlohmann::json{{"detector_id", detector_name(t.detector_id)},
                     {"params", t.params},
                     {"threshold", t.threshold},
                     {"level_alpha", t.level_alpha},
                     {"method", calibration_method_name(t.method)},
                     {"calibration_seed", t.calibration_seed},
                     {"replicates", t.replicates},
                     {"null_spec", t.null_spec}};
}

std::size_t calibration_rank(double alpha, std::size_t replicates) {
  require(alpha > 0.0 && alpha < 1.0, ErrorKind::DomainError, "alpha must lie in (0, 1)");
  // The 1e-9 slack keeps exact products such as 0.95 * 200 = 190 from
  // rounding up to 191.
  const double raw = (1.0 - alpha) * static_cast<double>(replicates + 1);
  const auto rank = static_cast<std::size_t>(std::ceil(raw - 1e-9));
  require(rank <= replicates && replicates > 0, ErrorKind::InsufficientReplicates,
          "rank " + std::to_string(rank) + " exceeds " + std::to_string(replicates) + " replicates at alpha " +
              std::to_string(alpha));
  return std::max<std::size_t>(rank, 1);
}

std::vector<double> simulate_statistic(DetectorId id, const DetectorParams& params, const ModelSpec& spec,
                                       std::size_t replicates, std::uint64_t seed, const RunOptions& run) {
  spec.validate();
  std::vector<double> out(replicates);
  parallel_for(replicates, run.resolved_workers(), [&](std::size_t r) {
    const Sample s = sample(spec, {seed, r}, run.planted_choice);
    out[r] = evaluate(id, params, s.graph).value;
  });
  return out;
}

CalibratedTest calibrate(DetectorId id, const DetectorParams& params, const ModelSpec& null_spec, double alpha,
                         std::size_t replicates, std::uint64_t seed, CalibrationMethod method,
                         const RunOptions& run) {
  require(null_spec.variant == ModelVariant::Null, ErrorKind::InvalidSpec, "calibration needs a Null spec");
  null_spec.validate();
  CalibratedTest t;
  t.detector_id = id;
  t.params = params;
  t.level_alpha = alpha;
  t.method = method;
  t.calibration_seed = seed;
  t.replicates = replicates;
  t.null_spec = null_spec;

  if (method == CalibrationMethod::AnalyticBinomial) {
    require(id == DetectorId::TotalDegree, ErrorKind::DomainError,
            "analytic calibration is available for total_degree only");
    require(alpha > 0.0 && alpha < 1.0, ErrorKind::DomainError, "alpha must lie in (0, 1)");
    t.threshold = static_cast<double>(binomial_upper_quantile(half_pair(null_spec.N), null_spec.p0, alpha));
    return t;
  }

  const std::size_t rank = calibration_rank(alpha, replicates);
  auto values = simulate_statistic(id, params, null_spec, replicates, derive_seed(seed, kCalibrationTag), run);
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(rank - 1), values.end());
  t.threshold = values[rank - 1];
  return t;
}

double estimate_p0_hat(const Graph& g) {
  require(g.num_nodes() >= 2, ErrorKind::DegenerateGraph, "p0 estimate needs N >= 2");
  return static_cast<double>(g.total_edges()) / static_cast<double>(half_pair(g.num_nodes()));
}

CalibratedTest bootstrap_calibrate(DetectorId id, const DetectorParams& params, const Graph& observed, double alpha,
                                   std::size_t replicates, std::uint64_t seed, const RunOptions& run) {
  const double p_hat = estimate_p0_hat(observed);
  require(p_hat > 0.0 && p_hat < 1.0, ErrorKind::DegenerateGraph,
          "bootstrap needs 0 < p0_hat < 1, got " + std::to_string(p_hat));
  CalibratedTest t = calibrate(id, params, ModelSpec::null(observed.num_nodes(), p_hat), alpha, replicates,
                               derive_seed(seed, kBootstrapTag), CalibrationMethod::MonteCarloKnownP0, run);
  t.method = CalibrationMethod::ParametricBootstrap;
  t.calibration_seed = seed;
  return t;
}

CombinedTest bonferroni_combine(std::vector<CalibratedTest> tests) {
  require(!tests.empty(), ErrorKind::DomainError, "combination needs at least one test");
  for (const auto& t : tests) {
    require(t.null_spec == tests.front().null_spec, ErrorKind::MismatchedNullSpec,
            "component tests were calibrated under different null specs");
    require(t.level_alpha == tests.front().level_alpha, ErrorKind::MismatchedNullSpec,
            "component tests carry different levels");
  }
  return CombinedTest{std::move(tests)};
}

bool rejects(const TestRule& test, const Graph& g, std::uint64_t tag) {
  struct Visitor {
    const Graph& g;
    std::uint64_t tag;
    bool operator()(const CalibratedTest& t) const { return t.rejects(g); }
    bool operator()(const CombinedTest& t) const {
      return std::any_of(t.parts.begin(), t.parts.end(), [&](const CalibratedTest& p) { return p.rejects(g); });
    }
    bool operator()(const BootstrapTest& t) const {
      const double p_hat = estimate_p0_hat(g);
      // A constant graph leaves nothing to resample; the null draw at p_hat
      // reproduces the observed statistic, so the strict test cannot reject.
      if (p_hat <= 0.0 || p_hat >= 1.0) return false;
      const CalibratedTest c = bootstrap_calibrate(t.detector_id, t.params, g, t.level_alpha, t.replicates,
                                                   derive_seed(t.seed, tag), RunOptions{1});
      return c.rejects(g);
    }
    bool operator()(const LikelihoodRatioTest& t) const { return lr_statistic(g, t.n, t.p0, t.p1) > 1.0; }
  };
  return std::visit(Visitor{g, tag}, test);
}

}  // namespace sentinel
