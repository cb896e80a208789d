#pragma once

#include <cstdint>
#include <utility>

namespace sentinel {

/// Relative entropy H_p(q) of Bern(q) to Bern(p). p in (0,1), q in [0,1];
/// H_p(0) = -log(1-p) and H_p(1) = -log(p).
double bern_entropy(double p, double q);

/// Tilt re-centering Bern(p0) at mean q: log(q (1-p0) / (p0 (1-q))).
double tilt_theta(double q, double p0);

/// Log moment generating function of Bern(p0): log(1 - p0 + p0 e^theta).
/// Stable for |theta| large; returns +inf at theta = +inf.
double log_mgf(double theta, double p0);

/// Closed form of Lambda(2 theta_{p1}) - 2 Lambda(theta_{p1}):
/// log(1 + (p1 - p0)^2 / (p0 (1 - p0))).
double second_moment_gap(double p0, double p1);
/// The same quantity evaluated through the tilt.
double second_moment_gap_tilted(double p0, double p1);

/// exp(-n H_{p0}(q)) >= P(Bin(n, p0) >= q n), for q in [p0, 1].
double chernoff_tail(std::uint64_t n_trials, double p0, double q);

/// exp(-x^2 / (2 [n p0 (1-p0) + x/3])) >= P(Bin(n, p0) >= n p0 + x).
double bernstein_tail(std::uint64_t n_trials, double p0, double x);

struct LogBinomBounds {
  double lower;
  double upper;
};
/// k log(n/k) <= log C(n, k) <= k log(n e / k), for 1 <= k <= n.
LogBinomBounds log_binom_bounds(std::uint64_t n, std::uint64_t k);
/// log C(n, k) through lgamma.
double log_binomial(std::uint64_t n, std::uint64_t k);

/// R = sqrt(n) (p1 - p0) / sqrt(p0 (1 - p0)).
double snr(std::uint64_t n, double p0, double p1);

/// (mean1 - mean0) / max(sd1, sd0). Throws DegenerateVariance when both
/// variances vanish and the means agree.
double two_moment_ratio(double mean0, double var0, double mean1, double var1);

/// log P(Bin(n, p) = k).
double binomial_log_pmf(std::uint64_t n, double p, std::uint64_t k);
/// P(Bin(n, p) >= k), summed recursively from the mode outward.
double binomial_upper_tail(std::uint64_t n, double p, std::uint64_t k);
/// Smallest t with P(Bin(n, p) > t) <= alpha.
std::uint64_t binomial_upper_quantile(std::uint64_t n, double p, double alpha);

/// h(p) = p log p + (1-p) log(1-p), with h(0) = h(1) = 0.
double neg_binary_entropy(double p);

}  // namespace sentinel
