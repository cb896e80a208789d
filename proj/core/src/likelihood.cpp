// Exact likelihood ratio under the uniform prior on the planted set.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "sentinel/error.hpp"
#include "sentinel/harness.hpp"
#include "sentinel/kernels.hpp"

namespace sentinel {
namespace {

std::uint64_t binomial_capped(std::uint64_t n, std::uint64_t k, std::uint64_t cap) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 c = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    c = c * (n - k + i) / i;
    if (c > cap) return cap + 1;
  }
  return static_cast<std::uint64_t>(c);
}

void histogram_dfs(const Graph& g, std::size_t n, Node start, std::vector<Node>& chosen, std::uint64_t w,
                   std::vector<std::uint64_t>& hist) {
  if (chosen.size() == n) {
    ++hist[w];
    return;
  }
  const std::size_t N = g.num_nodes();
  for (Node v = start; v + (n - chosen.size()) <= N; ++v) {
    std::uint64_t add = 0;
    const auto row = g.row(v);
    for (Node u : chosen) add += (row[u >> 6] >> (u & 63)) & 1U;
    chosen.push_back(v);
    histogram_dfs(g, n, v + 1, chosen, w + add, hist);
    chosen.pop_back();
  }
}

}  // namespace

std::vector<std::uint64_t> subset_edge_histogram(const Graph& g, std::size_t n, std::uint64_t budget) {
  require(n >= 1 && n <= g.num_nodes(), ErrorKind::InvalidSize, "need 1 <= n <= N");
  const std::uint64_t count = binomial_capped(g.num_nodes(), n, budget);
  require(count <= budget, ErrorKind::BudgetExceeded,
          "C(" + std::to_string(g.num_nodes()) + ", " + std::to_string(n) + ") exceeds the subset budget " +
              std::to_string(budget));
  std::vector<std::uint64_t> hist(half_pair(n) + 1, 0);
  std::vector<Node> chosen;
  chosen.reserve(n);
  histogram_dfs(g, n, 0, chosen, 0, hist);
  return hist;
}

double lr_statistic(const Graph& g, std::size_t n, double p0, double p1) {
  require(p0 > 0.0 && p0 < 1.0, ErrorKind::DomainError, "likelihood ratio needs 0 < p0 < 1");
  require(p1 > 0.0 && p1 <= 1.0, ErrorKind::DomainError, "likelihood ratio needs 0 < p1 <= 1");
  if (p1 == p0) return 1.0;
  const auto hist = subset_edge_histogram(g, n);
  const std::uint64_t n2 = half_pair(n);
  std::uint64_t total = 0;
  for (auto c : hist) total += c;
  const double log_total = std::log(static_cast<double>(total));

  if (p1 == 1.0) {
    // Tilt is infinite; only complete subsets carry likelihood.
    if (hist[n2] == 0) return 0.0;
    return std::exp(std::log(static_cast<double>(hist[n2])) - log_total -
                    static_cast<double>(n2) * std::log(p0));
  }

  const double theta = tilt_theta(p1, p0);
  const double lambda = log_mgf(theta, p0);
  std::vector<double> terms;
  terms.reserve(hist.size());
  for (std::uint64_t w = 0; w < hist.size(); ++w)
    if (hist[w] > 0)
      terms.push_back(std::log(static_cast<double>(hist[w])) + theta * static_cast<double>(w) -
                      lambda * static_cast<double>(n2));
  const double top = *std::max_element(terms.begin(), terms.end());
  double acc = 0.0;
  for (double t : terms) acc += std::exp(t - top);
  return std::exp(top + std::log(acc) - log_total);
}

RiskReport lr_oracle_risk(const ModelSpec& null_spec, const ModelSpec& alt_spec, std::size_t replicates,
                          std::uint64_t seed, const RunOptions& run) {
  require(alt_spec.variant == ModelVariant::PlantedKnownP0, ErrorKind::InvalidSpecPair,
          "the likelihood ratio oracle needs a PlantedKnownP0 alternative");
  require(null_spec.p0 == alt_spec.p0, ErrorKind::InvalidSpecPair, "null and alternative p0 differ");
  return estimate_risk(LikelihoodRatioTest{alt_spec.n, null_spec.p0, alt_spec.p1}, null_spec, alt_spec,
                       replicates, seed, run);
}

}  // namespace sentinel
