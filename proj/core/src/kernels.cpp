#include "sentinel/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "sentinel/error.hpp"

namespace sentinel {
namespace {

void check_open(double p, const char* name) {
  require(p > 0.0 && p < 1.0, ErrorKind::DomainError, std::string(name) + " must lie in (0,1)");
}

void check_closed(double p, const char* name) {
  require(p >= 0.0 && p <= 1.0, ErrorKind::DomainError, std::string(name) + " must lie in [0,1]");
}

}  // namespace

double bern_entropy(double p, double q) {
  check_open(p, "p");
  check_closed(q, "q");
  if (q == 0.0) return -std::log1p(-p);
  if (q == 1.0) return -std::log(p);
  // log1p arguments vanish as q -> p, avoiding cancellation on the boundary.
  const double h = q * std::log1p((q - p) / p) + (1.0 - q) * std::log1p((p - q) / (1.0 - p));
  return std::max(h, 0.0);
}

double tilt_theta(double q, double p0) {
  check_open(p0, "p0");
  check_open(q, "q");
  return (std::log(q) - std::log(p0)) + (std::log1p(-p0) - std::log1p(-q));
}

double log_mgf(double theta, double p0) {
  check_open(p0, "p0");
  if (std::isinf(theta)) return theta > 0 ? theta : std::log1p(-p0);
  if (theta <= 0.0) return std::log1p(p0 * std::expm1(theta));
  // log(e^theta (p0 + (1-p0) e^-theta)) without forming e^theta.
  return theta + std::log1p((1.0 - p0) * std::expm1(-theta));
}

double second_moment_gap(double p0, double p1) {
  check_open(p0, "p0");
  require(p1 >= p0 && p1 < 1.0, ErrorKind::DomainError, "p1 must lie in [p0, 1)");
  const double d = p1 - p0;
  return std::log1p(d * d / (p0 * (1.0 - p0)));
}

double second_moment_gap_tilted(double p0, double p1) {
  check_open(p0, "p0");
  require(p1 >= p0 && p1 < 1.0, ErrorKind::DomainError, "p1 must lie in [p0, 1)");
  const double theta = tilt_theta(p1, p0);
  return log_mgf(2.0 * theta, p0) - 2.0 * log_mgf(theta, p0);
}

double chernoff_tail(std::uint64_t n_trials, double p0, double q) {
  check_open(p0, "p0");
  require(q >= p0 && q <= 1.0, ErrorKind::DomainError, "q must lie in [p0, 1]");
  return std::exp(-static_cast<double>(n_trials) * bern_entropy(p0, q));
}

double bernstein_tail(std::uint64_t n_trials, double p0, double x) {
  check_open(p0, "p0");
  require(x >= 0.0, ErrorKind::DomainError, "x must be nonnegative");
  const double v = static_cast<double>(n_trials) * p0 * (1.0 - p0);
  return std::exp(-x * x / (2.0 * (v + x / 3.0)));
}

LogBinomBounds log_binom_bounds(std::uint64_t n, std::uint64_t k) {
  require(k >= 1 && k <= n, ErrorKind::DomainError, "need 1 <= k <= n");
  const double r = static_cast<double>(n) / static_cast<double>(k);
  const double kd = static_cast<double>(k);
  return {kd * std::log(r), kd * (std::log(r) + 1.0)};
}

double log_binomial(std::uint64_t n, std::uint64_t k) {
  require(k <= n, ErrorKind::DomainError, "need k <= n");
  const double nd = static_cast<double>(n), kd = static_cast<double>(k);
  return std::lgamma(nd + 1.0) - std::lgamma(kd + 1.0) - std::lgamma(nd - kd + 1.0);
}

double snr(std::uint64_t n, double p0, double p1) {
  check_open(p0, "p0");
  require(p1 >= p0 && p1 <= 1.0, ErrorKind::DomainError, "p1 must lie in [p0, 1]");
  return std::sqrt(static_cast<double>(n)) * (p1 - p0) / std::sqrt(p0 * (1.0 - p0));
}

double two_moment_ratio(double mean0, double var0, double mean1, double var1) {
  require(var0 >= 0.0 && var1 >= 0.0, ErrorKind::DomainError, "variances must be nonnegative");
  const double sd = std::max(std::sqrt(var0), std::sqrt(var1));
  const double diff = mean1 - mean0;
  if (sd == 0.0) {
    require(diff != 0.0, ErrorKind::DegenerateVariance, "both variances vanish and means agree");
    return diff > 0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
  }
  return diff / sd;
}

double binomial_log_pmf(std::uint64_t n, double p, std::uint64_t k) {
  if (k > n) return -std::numeric_limits<double>::infinity();
  if (p == 0.0) return k == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
  if (p == 1.0) return k == n ? 0.0 : -std::numeric_limits<double>::infinity();
  return log_binomial(n, k) + static_cast<double>(k) * std::log(p) +
         static_cast<double>(n - k) * std::log1p(-p);
}

double binomial_upper_tail(std::uint64_t n, double p, std::uint64_t k) {
  check_closed(p, "p");
  if (k == 0) return 1.0;
  if (k > n) return 0.0;
  if (p == 0.0) return 0.0;
  if (p == 1.0) return 1.0;
  const double odds = p / (1.0 - p);
  const auto mode = static_cast<std::uint64_t>(std::floor(static_cast<double>(n + 1) * p));
  if (k > mode) {
    // Terms decrease from k upward.
    double term = std::exp(binomial_log_pmf(n, p, k));
    double sum = 0.0;
    for (std::uint64_t j = k; j <= n && term > 0.0; ++j) {
      sum += term;
      if (term < sum * 1e-17) break;
      term *= odds * static_cast<double>(n - j) / static_cast<double>(j + 1);
    }
    return std::min(sum, 1.0);
  }
  // Lower tail P(X <= k-1), terms decrease from k-1 downward.
  double term = std::exp(binomial_log_pmf(n, p, k - 1));
  double lower = 0.0;
  for (std::uint64_t j = k - 1;; --j) {
    lower += term;
    if (j == 0 || term < lower * 1e-17) break;
    term *= static_cast<double>(j) / (odds * static_cast<double>(n - j + 1));
  }
  return std::clamp(1.0 - lower, 0.0, 1.0);
}

std::uint64_t binomial_upper_quantile(std::uint64_t n, double p, double alpha) {
  require(alpha > 0.0 && alpha < 1.0, ErrorKind::DomainError, "alpha must lie in (0,1)");
  std::uint64_t lo = 0, hi = n;  // P(X > n) = 0 <= alpha always
  while (lo < hi) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    if (binomial_upper_tail(n, p, mid + 1) <= alpha) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return lo;
}

double neg_binary_entropy(double p) {
  double h = 0.0;
  if (p > 0.0) h += p * std::log(p);
  if (p < 1.0) h += (1.0 - p) * std::log1p(-p);
  return h;
}

}  // namespace sentinel
