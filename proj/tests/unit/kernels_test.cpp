#include <cmath>
#include <limits>

#include <boost/math/distributions/binomial.hpp>
#include <boost/math/special_functions/binomial.hpp>
#include <gtest/gtest.h>

#include "expect_error.hpp"
#include "sentinel/kernels.hpp"

namespace sentinel {
namespace {

// P(Bin(n, p) >= k) from Boost's incomplete beta; independent of the
// library's mode-outward summation.
double exact_tail(std::uint64_t n, double p, std::uint64_t k) {
  if (k == 0) return 1.0;
  if (k > n) return 0.0;
  boost::math::binomial_distribution<> b(static_cast<double>(n), p);
  return boost::math::cdf(boost::math::complement(b, static_cast<double>(k - 1)));
}

// Interior grid points i / (steps + 1), i = 1..steps.
double grid(int i, int steps) { return static_cast<double>(i) / (steps + 1); }

TEST(BernEntropy, Examples) {
  for (double p : {0.01, 0.3, 0.5, 0.97}) EXPECT_EQ(bern_entropy(p, p), 0.0);
  EXPECT_NEAR(bern_entropy(0.5, 1.0), std::log(2.0), 1e-15);
  // mpmath, 30 digits.
  EXPECT_NEAR(bern_entropy(0.1, 0.3), 0.153663586803798653, 1e-15);
  EXPECT_NEAR(bern_entropy(0.2, 0.0), -std::log(0.8), 1e-15);
  EXPECT_NEAR(bern_entropy(0.2, 1.0), -std::log(0.2), 1e-15);
  EXPECT_ERROR_KIND(bern_entropy(0.0, 0.5), DomainError);
  EXPECT_ERROR_KIND(bern_entropy(1.0, 0.5), DomainError);
  EXPECT_ERROR_KIND(bern_entropy(0.5, 1.5), DomainError);
}

TEST(BernEntropy, NonnegativeAndConvex) {
  for (int i = 1; i <= 30; ++i) {
    const double p = grid(i, 30);
    for (int j = 0; j <= 60; ++j) {
      const double q = j / 60.0;
      const double hq = bern_entropy(p, q);
      EXPECT_GE(hq, 0.0);
      if (j > 0 && j < 60) {
        const double mid = 0.5 * (bern_entropy(p, (j - 1) / 60.0) + bern_entropy(p, (j + 1) / 60.0));
        EXPECT_LE(hq, mid + 1e-15);
      }
    }
  }
}

TEST(BernEntropy, QuadraticRegime) {
  for (int i = 1; i <= 30; ++i) {
    const double p = std::pow(10.0, -6.0 + 6.0 * grid(i, 30));
    for (double rel : {-0.01, -0.005, -0.001, 0.001, 0.005, 0.01}) {
      const double q = p * (1 + rel);
      const double quad = (q - p) * (q - p) / (2 * p * (1 - p));
      const double hq = bern_entropy(p, q);
      EXPECT_LT(std::abs(hq - quad) / hq, 0.05) << p << " " << q;
    }
  }
}

TEST(BernEntropy, MiddleRegime) {
  const double p = 1e-6;
  for (double r : {1.5, 2.0, 3.0, 10.0}) {
    const double approx = p * (r * std::log(r) - r + 1);
    EXPECT_NEAR(bern_entropy(p, r * p) / approx, 1.0, 1e-4) << r;
  }
}

// H_p(q) = q log(q/p) + O(q) as q/p grows; the O(q) remainder is about -q.
TEST(BernEntropy, LargeRatioRegime) {
  double prev_ratio = 0.0;
  for (double p : {1e-4, 1e-6, 1e-8, 1e-10, 1e-12}) {
    const double q = 1e-2;
    const double lead = q * std::log(q / p);
    const double hq = bern_entropy(p, q);
    EXPECT_LE(std::abs(hq - lead), 1.01 * q) << p;
    EXPECT_GT(hq / lead, prev_ratio);
    prev_ratio = hq / lead;
  }
  // mpmath values.
  EXPECT_NEAR(bern_entropy(1e-6, 1e-2) / (1e-2 * std::log(1e4)), 0.891981815083162, 1e-9);
  EXPECT_NEAR(bern_entropy(1e-12, 1e-2) / (1e-2 * std::log(1e10)), 0.956788426520044, 1e-9);
}

TEST(Tilt, Examples) {
  EXPECT_EQ(tilt_theta(0.3, 0.3), 0.0);
  EXPECT_NEAR(tilt_theta(0.75, 0.25), 2.19722457733621938, 1e-14);
  EXPECT_NEAR(tilt_theta(0.25, 0.75), -2.19722457733621938, 1e-14);
  EXPECT_ERROR_KIND(tilt_theta(0.0, 0.3), DomainError);
  EXPECT_ERROR_KIND(tilt_theta(1.0, 0.3), DomainError);
  double prev = -std::numeric_limits<double>::infinity();
  for (int i = 1; i <= 50; ++i) {
    const double t = tilt_theta(grid(i, 50), 0.2);
    EXPECT_GT(t, prev);
    prev = t;
  }
}

TEST(LogMgf, ExamplesAndStability) {
  for (double p : {0.01, 0.5, 0.9}) EXPECT_EQ(log_mgf(0.0, p), 0.0);
  EXPECT_NEAR(log_mgf(std::log(3.0), 0.5), std::log(2.0), 1e-15);
  EXPECT_NEAR(log_mgf(1000.0, 0.5), 1000.0 + std::log(0.5), 1e-9);
  EXPECT_NEAR(log_mgf(-1000.0, 0.5), std::log(0.5), 1e-15);
  EXPECT_TRUE(std::isfinite(log_mgf(1e6, 0.3)));
  EXPECT_EQ(log_mgf(std::numeric_limits<double>::infinity(), 0.3), std::numeric_limits<double>::infinity());
  for (double th = -10; th <= 10; th += 0.5)
    EXPECT_LE(log_mgf(th, 0.3), 0.5 * (log_mgf(th - 0.5, 0.3) + log_mgf(th + 0.5, 0.3)) + 1e-15);
}

TEST(Fenchel, SpecPointAndGrid) {
  const double t = tilt_theta(0.6, 0.2);
  EXPECT_NEAR(bern_entropy(0.2, 0.6), 0.6 * t - log_mgf(t, 0.2), 1e-12);
  for (int i = 1; i <= 30; ++i)
    for (int j = 1; j <= 30; ++j) {
      const double p0 = grid(i, 30), q = grid(j, 30);
      const double th = tilt_theta(q, p0);
      EXPECT_NEAR(bern_entropy(p0, q), q * th - log_mgf(th, p0), 1e-10) << p0 << " " << q;
    }
}

// The supremum over theta, located by a coarse scan, never exceeds H and
// approaches it.
TEST(Fenchel, SupremumOverTheta) {
  for (double p0 : {0.05, 0.3, 0.7})
    for (double q : {0.1, 0.5, 0.9}) {
      double sup = -std::numeric_limits<double>::infinity();
      for (double th = -20; th <= 20; th += 1e-3) sup = std::max(sup, q * th - log_mgf(th, p0));
      EXPECT_LE(sup, bern_entropy(p0, q) + 1e-12);
      EXPECT_NEAR(sup, bern_entropy(p0, q), 1e-6);
    }
}

TEST(SecondMomentGap, ExamplesAndBothForms) {
  EXPECT_EQ(second_moment_gap(0.3, 0.3), 0.0);
  EXPECT_NEAR(second_moment_gap(0.25, 0.75), 0.847297860387203614, 1e-14);
  EXPECT_NEAR(second_moment_gap_tilted(0.25, 0.75), 0.847297860387203614, 1e-12);
  EXPECT_ERROR_KIND(second_moment_gap(0.5, 0.4), DomainError);
  EXPECT_ERROR_KIND(second_moment_gap(0.5, 1.0), DomainError);
  for (int i = 1; i <= 20; ++i)
    for (int j = 0; j < 20; ++j) {
      const double p0 = grid(i, 20);
      const double p1 = p0 + (1 - p0) * j / 20.0;
      EXPECT_NEAR(second_moment_gap(p0, p1), second_moment_gap_tilted(p0, p1), 1e-10) << p0 << " " << p1;
    }
}

TEST(Chernoff, Examples) {
  EXPECT_DOUBLE_EQ(chernoff_tail(50, 0.3, 0.3), 1.0);
  const double bound = chernoff_tail(10, 0.3, 0.7);
  EXPECT_NEAR(exact_tail(10, 0.3, 7), 0.0105920784, 1e-10);
  EXPECT_GE(bound, exact_tail(10, 0.3, 7));
  EXPECT_NEAR(bound, std::exp(-10 * bern_entropy(0.3, 0.7)), 1e-15);
  double prev = 2.0;
  for (int j = 0; j <= 40; ++j) {
    const double b = chernoff_tail(30, 0.2, 0.2 + 0.8 * j / 40.0);
    EXPECT_LE(b, prev);
    prev = b;
  }
  EXPECT_ERROR_KIND(chernoff_tail(10, 0.3, 0.2), DomainError);
}

TEST(Bernstein, Examples) {
  EXPECT_DOUBLE_EQ(bernstein_tail(100, 0.2, 0.0), 1.0);
  EXPECT_NEAR(exact_tail(100, 0.2, 40), 3.60842e-6, 1e-10);
  EXPECT_GE(bernstein_tail(100, 0.2, 20.0), exact_tail(100, 0.2, 40));
  EXPECT_NEAR(bernstein_tail(100, 0.2, 20.0), std::exp(-400.0 / (2 * (16.0 + 20.0 / 3))), 1e-18);
  double prev = 2.0;
  for (double x = 0; x <= 30; x += 0.5) {
    const double b = bernstein_tail(100, 0.2, x);
    EXPECT_LT(b, prev);
    prev = b;
  }
  EXPECT_ERROR_KIND(bernstein_tail(10, 0.3, -1.0), DomainError);
}

TEST(TailBounds, DominateExactTails) {
  for (std::uint64_t n = 1; n <= 60; ++n)
    for (int i = 1; i <= 19; ++i) {
      const double p0 = grid(i, 19);
      for (std::uint64_t k = 0; k <= n; ++k) {
        const double exact = exact_tail(n, p0, k);
        if (k >= p0 * n) {
          EXPECT_GE(chernoff_tail(n, p0, double(k) / n) * (1 + 1e-12), exact) << n << " " << p0 << " " << k;
        }
        const double x = k - n * p0;
        if (x >= 0) {
          EXPECT_GE(bernstein_tail(n, p0, x) * (1 + 1e-12), exact) << n << " " << p0 << " " << k;
        }
      }
    }
}

TEST(BinomialTail, MatchesIndependentOracle) {
  for (std::uint64_t n : {1, 7, 60, 435, 4950})
    for (double p : {0.001, 0.1, 0.5, 0.93})
      for (std::uint64_t k = 0; k <= n; k += std::max<std::uint64_t>(1, n / 50)) {
        const double e = exact_tail(n, p, k);
        if (e < 1e-300) continue;
        EXPECT_NEAR(binomial_upper_tail(n, p, k) / e, 1.0, 1e-9) << n << " " << p << " " << k;
      }
  EXPECT_EQ(binomial_upper_tail(10, 0.5, 11), 0.0);
  EXPECT_EQ(binomial_upper_tail(10, 0.5, 0), 1.0);
}

TEST(BinomialQuantile, Definition) {
  for (std::uint64_t n : {10, 100, 4950})
    for (double p : {0.01, 0.2, 0.5})
      for (double alpha : {0.01, 0.05, 0.2}) {
        const auto t = binomial_upper_quantile(n, p, alpha);
        EXPECT_LE(exact_tail(n, p, t + 1), alpha + 1e-12);
        if (t > 0) {
          EXPECT_GT(exact_tail(n, p, t), alpha - 1e-12);
        }
      }
}

TEST(LogBinom, BoundsBracketExact) {
  const auto b = log_binom_bounds(4, 2);
  EXPECT_NEAR(b.lower, 1.38629436111989062, 1e-14);
  EXPECT_NEAR(b.upper, 3.38629436111989062, 1e-14);
  EXPECT_NEAR(log_binomial(4, 2), 1.79175946922805500, 1e-14);
  const auto full = log_binom_bounds(7, 7);
  EXPECT_EQ(full.lower, 0.0);
  EXPECT_NEAR(full.upper, 7.0, 1e-14);
  for (unsigned n = 1; n <= 40; ++n)
    for (unsigned k = 1; k <= n; ++k) {
      const double exact = std::log(boost::math::binomial_coefficient<double>(n, k));
      const auto bb = log_binom_bounds(n, k);
      EXPECT_NEAR(log_binomial(n, k), exact, 1e-10);
      EXPECT_LE(bb.lower, exact + 1e-12);
      EXPECT_GE(bb.upper, exact - 1e-12);
    }
  EXPECT_ERROR_KIND(log_binom_bounds(4, 0), DomainError);
  EXPECT_ERROR_KIND(log_binom_bounds(4, 5), DomainError);
}

TEST(Snr, Examples) {
  EXPECT_EQ(snr(50, 0.2, 0.2), 0.0);
  EXPECT_NEAR(snr(100, 0.1, 0.4), 10.0, 1e-12);
  EXPECT_NEAR(snr(400, 0.1, 0.4) / snr(100, 0.1, 0.4), 2.0, 1e-12);
  EXPECT_ERROR_KIND(snr(10, 0.4, 0.3), DomainError);
}

TEST(TwoMomentRatio, Examples) {
  EXPECT_EQ(two_moment_ratio(3, 1, 3, 2), 0.0);
  EXPECT_DOUBLE_EQ(two_moment_ratio(0, 1, 10, 4), 5.0);
  EXPECT_ERROR_KIND(two_moment_ratio(1, 0, 1, 0), DegenerateVariance);
  EXPECT_ERROR_KIND(two_moment_ratio(1, -1, 2, 0), DomainError);
  // Total degree at N=100, n=30, p0=0.1, p1=0.5 from its analytic moments.
  const double pairs = 4950, inner = 435;
  const double r = two_moment_ratio(pairs * 0.1, pairs * 0.09, pairs * 0.1 + inner * 0.4,
                                    pairs * 0.09 + inner * (0.25 - 0.09));
  EXPECT_NEAR(r, 7.66661180164883, 1e-12);
}

TEST(Kernels, Deterministic) {
  for (int rep = 0; rep < 3; ++rep) {
    EXPECT_EQ(bern_entropy(0.123, 0.456), bern_entropy(0.123, 0.456));
    EXPECT_EQ(second_moment_gap_tilted(0.01, 0.3), second_moment_gap_tilted(0.01, 0.3));
    EXPECT_EQ(binomial_upper_tail(4950, 0.1, 600), binomial_upper_tail(4950, 0.1, 600));
  }
}

TEST(NegBinaryEntropy, Endpoints) {
  EXPECT_EQ(neg_binary_entropy(0.0), 0.0);
  EXPECT_EQ(neg_binary_entropy(1.0), 0.0);
  EXPECT_NEAR(neg_binary_entropy(0.5), -std::log(2.0), 1e-15);
}

}  // namespace
}  // namespace sentinel
