// Monte Carlo estimates of the two error rates of a test.

#include <string>

#include <boost/math/special_functions/beta.hpp>
#include <nlohmann/json.hpp>

#include "sentinel/error.hpp"
#include "sentinel/harness.hpp"

namespace sentinel {
namespace {

constexpr std::uint64_t kNullTag = 0x0;
constexpr std::uint64_t kAltTag = 0xA17;
// Bootstrap tags of alternative draws start here so they never meet null tags.
constexpr std::uint64_t kAltBootstrapOffset = 1ULL << 40;

}  // namespace

void to_json(nlohmann::json& j, const RiskReport& r) {
  j = nlohmann::json{{"type1_hat", r.type1_hat},
                     {"type2_hat", r.type2_hat},
                     {"gamma_hat", r.gamma_hat},
                     {"half_width_type1", r.half_width_type1},
                     {"half_width_type2", r.half_width_type2},
                     {"half_width", r.half_width},
                     {"ci_method", "clopper_pearson"},
                     {"replicates", r.replicates},
                     {"spec_null", r.spec_null},
                     {"spec_alt", r.spec_alt}};
}

void from_json(const nlohmann::json& j, RiskReport& r) {
  r.type1_hat = j.at("type1_hat").get<double>();
  r.type2_hat = j.at("type2_hat").get<double>();
  r.gamma_hat = j.at("gamma_hat").get<double>();
  r.half_width_type1 = j.at("half_width_type1").get<double>();
  r.half_width_type2 = j.at("half_width_type2").get<double>();
  r.half_width = j.at("half_width").get<double>();
  r.replicates = j.at("replicates").get<std::size_t>();
  r.spec_null = j.at("spec_null").get<ModelSpec>();
  r.spec_alt = j.at("spec_alt").get<ModelSpec>();
}

double clopper_pearson_half_width(std::size_t k, std::size_t n) {
  require(n > 0 && k <= n, ErrorKind::DomainError, "need 0 <= k <= n, n > 0");
  const auto kd = static_cast<double>(k);
  const auto nd = static_cast<double>(n);
  const double lower = k == 0 ? 0.0 : boost::math::ibeta_inv(kd, nd - kd + 1.0, 0.025);
  const double upper = k == n ? 1.0 : boost::math::ibeta_inv(kd + 1.0, nd - kd, 0.975);
  return (upper - lower) / 2.0;
}

RiskReport estimate_risk(const TestRule& test, const ModelSpec& null_spec, const ModelSpec& alt_spec,
                         std::size_t replicates, std::uint64_t seed, const RunOptions& run) {
  require(null_spec.variant == ModelVariant::Null, ErrorKind::InvalidSpecPair, "null_spec must be Null");
  require(alt_spec.is_planted(), ErrorKind::InvalidSpecPair, "alt_spec must be a planted model");
  require(null_spec.N == alt_spec.N, ErrorKind::InvalidSpecPair,
          "null and alternative sizes differ: " + std::to_string(null_spec.N) + " vs " + std::to_string(alt_spec.N));
  require(replicates > 0, ErrorKind::DomainError, "risk estimation needs replicates > 0");
  null_spec.validate();
  alt_spec.validate();

  const std::uint64_t null_seed = derive_seed(seed, kNullTag);
  const std::uint64_t alt_seed = derive_seed(seed, kAltTag);
  std::vector<char> outcome(2 * replicates);
  parallel_for(2 * replicates, run.resolved_workers(), [&](std::size_t i) {
    if (i < replicates) {
      const Sample s = sample(null_spec, {null_seed, i});
      outcome[i] = rejects(test, s.graph, i);
    } else {
      const std::size_t r = i - replicates;
      const Sample s = sample(alt_spec, {alt_seed, r}, run.planted_choice);
      outcome[i] = !rejects(test, s.graph, kAltBootstrapOffset + r);
    }
  });

  std::size_t false_alarms = 0, misses = 0;
  for (std::size_t r = 0; r < replicates; ++r) {
    false_alarms += outcome[r] ? 1 : 0;
    misses += outcome[replicates + r] ? 1 : 0;
  }
  RiskReport rep;
  const auto b = static_cast<double>(replicates);
  rep.type1_hat = static_cast<double>(false_alarms) / b;
  rep.type2_hat = static_cast<double>(misses) / b;
  rep.gamma_hat = rep.type1_hat + rep.type2_hat;
  rep.half_width_type1 = clopper_pearson_half_width(false_alarms, replicates);
  rep.half_width_type2 = clopper_pearson_half_width(misses, replicates);
  rep.half_width = rep.half_width_type1 + rep.half_width_type2;
  rep.replicates = replicates;
  rep.spec_null = null_spec;
  rep.spec_alt = alt_spec;
  return rep;
}

}  // namespace sentinel
