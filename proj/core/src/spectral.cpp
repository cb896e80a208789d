// W^2, largest eigenvalues, sparse-eigenvalue lower bounds and the
// thresholded dual bound used by the relaxed scan.

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/Dense>

#include "sentinel/detectors.hpp"
#include "sentinel/error.hpp"
#include "sentinel/random.hpp"

namespace sentinel {
namespace {

constexpr std::size_t kDenseLimit = 64;
constexpr std::size_t kLanczosSteps = 64;
constexpr int kLanczosRestarts = 50;
constexpr double kRelTol = 1e-10;

// Row-compressed symmetric matrix holding the entries of B kept by a filter.
struct Csr {
  std::size_t n = 0;
  std::vector<std::size_t> start;
  std::vector<std::uint32_t> col;
  std::vector<double> val;

  void multiply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const {
    for (std::size_t i = 0; i < n; ++i) {
      double acc = 0.0;
      for (std::size_t k = start[i]; k < start[i + 1]; ++k) acc += val[k] * x[col[k]];
      y[static_cast<Eigen::Index>(i)] = acc;
    }
  }
};

template <class Keep>
Csr compress(const SquaredAdjacency& b, Keep keep) {
  Csr m;
  m.n = b.size();
  m.start.reserve(m.n + 1);
  m.start.push_back(0);
  for (std::size_t i = 0; i < m.n; ++i) {
    for (std::size_t j = 0; j < m.n; ++j) {
      const double v = b(i, j);
      if (v != 0.0 && keep(v)) {
        m.col.push_back(static_cast<std::uint32_t>(j));
        m.val.push_back(v);
      }
    }
    m.start.push_back(m.col.size());
  }
  return m;
}

struct Ritz {
  double theta;     // Ritz value; never above the true maximum
  double residual;  // |A v - theta v| for the unit Ritz vector v
};

double dense_max(const Eigen::MatrixXd& a) {
  if (a.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(a.rows() - 1);
}

// Restarted Lanczos with full reorthogonalization. The start vector is the
// all-ones vector with a small deterministic perturbation, so it overlaps
// the Perron vector of a nonnegative matrix.
Ritz lanczos_max(const Csr& a) {
  const auto n = static_cast<Eigen::Index>(a.n);
  if (a.val.empty()) return {0.0, 0.0};
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = 1.0 + 1e-3 * static_cast<double>(i % 7);
  v.normalize();

  const auto steps = static_cast<Eigen::Index>(std::min<std::size_t>(kLanczosSteps, a.n));
  Eigen::MatrixXd basis(n, steps);
  Eigen::VectorXd alpha(steps), beta(steps), w(n);
  Ritz best{0.0, 0.0};
  for (int restart = 0; restart < kLanczosRestarts; ++restart) {
    Eigen::Index k = 0;
    basis.col(0) = v;
    for (; k < steps; ++k) {
      a.multiply(basis.col(k), w);
      alpha[k] = basis.col(k).dot(w);
      // Two passes of Gram-Schmidt against the whole basis.
      for (int pass = 0; pass < 2; ++pass)
        w -= basis.leftCols(k + 1) * (basis.leftCols(k + 1).transpose() * w);
      beta[k] = w.norm();
      if (k + 1 == steps || beta[k] <= 1e-14 * std::abs(alpha[k]) + 1e-300) {
        ++k;
        break;
      }
      basis.col(k + 1) = w / beta[k];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
    Eigen::VectorXd diag = alpha.head(k);
    Eigen::VectorXd sub = beta.head(std::max<Eigen::Index>(k - 1, 0));
    tri.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    const double theta = tri.eigenvalues()(k - 1);
    const Eigen::VectorXd y = tri.eigenvectors().col(k - 1);
    const double residual = std::abs(beta[k - 1] * y[k - 1]);
    best = {theta, residual};
    if (residual <= kRelTol * std::max(std::abs(theta), 1.0)) break;
    v = basis.leftCols(k) * y;
    v.normalize();
  }
  return best;
}

Ritz max_eigen(const SquaredAdjacency& b, double z) {
  const std::size_t n = b.size();
  if (n <= kDenseLimit) {
    Eigen::MatrixXd a(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const double v = b(i, j);
        a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = std::abs(v) > z ? v : 0.0;
      }
    return {dense_max(a), 0.0};
  }
  return lanczos_max(compress(b, [z](double v) { return std::abs(v) > z; }));
}

Eigen::MatrixXd principal(const SquaredAdjacency& b, std::span<const Node> s) {
  const auto k = static_cast<Eigen::Index>(s.size());
  Eigen::MatrixXd a(k, k);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j) a(i, j) = b(s[i], s[j]);
  return a;
}

// Lower bound on lambda_max(B_S): a Ritz value never exceeds the maximum.
double principal_lower(const SquaredAdjacency& b, std::span<const Node> s) {
  if (s.size() <= kDenseLimit) return dense_max(principal(b, s));
  std::vector<double> vals;
  vals.reserve(s.size() * s.size());
  for (Node i : s)
    for (Node j : s) vals.push_back(b(i, j));
  return lanczos_max(compress(SquaredAdjacency::from_dense(s.size(), std::move(vals)),
                              [](double) { return true; }))
      .theta;
}

SparseEigenBound enumerate_supports(const SquaredAdjacency& b, std::size_t n) {
  const std::size_t N = b.size();
  std::vector<Node> s(n);
  std::iota(s.begin(), s.end(), Node{0});
  SparseEigenBound best{-std::numeric_limits<double>::infinity(), {}, true};
  while (true) {
    const double v = dense_max(principal(b, s));
    if (v > best.value) best = {v, NodeSubset(s), true};
    // Next combination in lexicographic order.
    std::size_t i = n;
    while (i > 0 && s[i - 1] == N - n + i - 1) --i;
    if (i == 0) break;
    ++s[i - 1];
    for (std::size_t j = i; j < n; ++j) s[j] = s[j - 1] + 1;
  }
  return best;
}

// Indices of the n largest |x_i|, ties to the smaller index, sorted.
std::vector<Node> top_support(const Eigen::VectorXd& x, std::size_t n) {
  std::vector<Node> idx(static_cast<std::size_t>(x.size()));
  std::iota(idx.begin(), idx.end(), Node{0});
  std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n), idx.end(),
                    [&](Node a, Node c) {
                      const double fa = std::abs(x[a]), fc = std::abs(x[c]);
                      return fa != fc ? fa > fc : a < c;
                    });
  idx.resize(n);
  std::sort(idx.begin(), idx.end());
  return idx;
}

std::vector<Node> truncated_power(const SquaredAdjacency& b, std::vector<Node> support) {
  const std::size_t N = b.size();
  const std::size_t n = support.size();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(N));
  for (Node i : support) x[i] = 1.0;
  Eigen::VectorXd y(static_cast<Eigen::Index>(N));
  for (int it = 0; it < 200; ++it) {
    for (std::size_t i = 0; i < N; ++i) {
      double acc = 0.0;
      for (Node j : support) acc += b(i, j) * x[j];
      y[static_cast<Eigen::Index>(i)] = acc;
    }
    auto next = top_support(y, n);
    x.setZero();
    for (Node i : next) x[i] = y[i];
    const double norm = x.norm();
    if (norm == 0.0) break;
    x /= norm;
    if (next == support) break;
    support = std::move(next);
  }
  return support;
}

}  // namespace

SquaredAdjacency SquaredAdjacency::from_dense(std::size_t n, std::vector<double> values) {
  require(values.size() == n * n, ErrorKind::DomainError, "matrix needs n*n values");
  SquaredAdjacency b;
  b.n_ = n;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      require(values[i * n + j] == values[j * n + i], ErrorKind::DomainError, "matrix is not symmetric");
      if (values[i * n + j] < 0.0) b.nonnegative_ = false;
    }
  b.v_ = std::move(values);
  return b;
}

SquaredAdjacency squared_adjacency(const Graph& g) {
  const std::size_t N = g.num_nodes();
  std::vector<double> v(N * N, 0.0);
  for (Node i = 0; i < N; ++i) {
    v[i * N + i] = g.degree(i);
    const auto ri = g.row(i);
    for (Node j = i + 1; j < N; ++j) {
      const auto rj = g.row(j);
      std::uint64_t common = 0;
      for (std::size_t w = 0; w < ri.size(); ++w) common += std::popcount(ri[w] & rj[w]);
      v[i * N + j] = v[j * N + i] = static_cast<double>(common);
    }
  }
  return SquaredAdjacency::from_dense(N, std::move(v));
}

double lambda_max(const SquaredAdjacency& b) {
  const Ritz r = max_eigen(b, -1.0);
  return r.theta + r.residual;
}

SparseEigenBound sparse_eig_lower(const SquaredAdjacency& b, std::size_t n) {
  const std::size_t N = b.size();
  require(n >= 1 && n <= N, ErrorKind::InvalidSize, "need 1 <= n <= N, got n=" + std::to_string(n));
  if (N <= 14) return enumerate_supports(b, n);

  std::vector<std::vector<Node>> starts;
  {
    Eigen::VectorXd diag(static_cast<Eigen::Index>(N));
    for (std::size_t i = 0; i < N; ++i) diag[static_cast<Eigen::Index>(i)] = b(i, i);
    starts.push_back(top_support(diag, n));
  }
  Philox4x32 rng({derive_seed(0x5eed, N * 1000003ULL + n), 0});
  for (int r = 0; r < 10; ++r) {
    std::vector<Node> all(N);
    std::iota(all.begin(), all.end(), Node{0});
    for (std::size_t k = 0; k < n; ++k) std::swap(all[k], all[k + rng.below(N - k)]);
    all.resize(n);
    std::sort(all.begin(), all.end());
    starts.push_back(std::move(all));
  }

  SparseEigenBound best{-std::numeric_limits<double>::infinity(), {}, false};
  for (auto& start : starts) {
    const auto s = truncated_power(b, std::move(start));
    const double v = principal_lower(b, s);
    if (v > best.value || (v == best.value && NodeSubset(s) < best.support))
      best = {v, NodeSubset(s), false};
  }
  return best;
}

double sdp_dual_bound(const SquaredAdjacency& b, std::size_t n, double z) {
  require(z >= 0.0, ErrorKind::DomainError, "threshold z must be nonnegative");
  const Ritz r = max_eigen(b, z);
  return r.theta + r.residual + static_cast<double>(n) * z;
}

std::vector<double> relaxed_scan_grid(const SquaredAdjacency& b) {
  std::vector<double> vals;
  vals.reserve(b.values().size() + 1);
  vals.push_back(0.0);
  for (double v : b.values()) vals.push_back(std::abs(v));
  std::sort(vals.begin(), vals.end());
  vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
  constexpr std::size_t kMax = 256;
  if (vals.size() <= kMax) return vals;
  std::vector<double> thin;
  thin.reserve(kMax);
  for (std::size_t k = 0; k < kMax; ++k) thin.push_back(vals[k * (vals.size() - 1) / (kMax - 1)]);
  return thin;
}

namespace {

// Minimizes lambda(z) + n z over grid[lo..hi] given both endpoint values.
// For nonnegative B, lambda(z) is non-increasing, so every interior point is
// at least lambda(grid[hi]) + n grid[lo + 1].
void prune_min(const SquaredAdjacency& b, std::size_t n, const std::vector<double>& grid,
               std::size_t lo, double lam_lo, std::size_t hi, double lam_hi, double& best) {
  if (hi - lo < 2) return;
  if (lam_hi + static_cast<double>(n) * grid[lo + 1] >= best) return;
  const std::size_t mid = lo + (hi - lo) / 2;
  const Ritz r = max_eigen(b, grid[mid]);
  const double lam_mid = r.theta + r.residual;
  best = std::min(best, lam_mid + static_cast<double>(n) * grid[mid]);
  prune_min(b, n, grid, lo, lam_lo, mid, lam_mid, best);
  prune_min(b, n, grid, mid, lam_mid, hi, lam_hi, best);
}

}  // namespace

DetectorResult relaxed_scan_stat(const Graph& g, std::size_t n, const RelaxedScanOptions& opt) {
  require(n >= 1 && n <= g.num_nodes(), ErrorKind::InvalidSize, "need 1 <= n <= N, got n=" + std::to_string(n));
  const SquaredAdjacency b = squared_adjacency(g);
  const auto grid = relaxed_scan_grid(b);
  double best = std::numeric_limits<double>::infinity();
  if (b.nonnegative()) {
    const double lam0 = sdp_dual_bound(b, 0, grid.front());
    const double lam1 = sdp_dual_bound(b, 0, grid.back());
    best = std::min(lam0 + static_cast<double>(n) * grid.front(), lam1 + static_cast<double>(n) * grid.back());
    prune_min(b, n, grid, 0, lam0, grid.size() - 1, lam1, best);
  } else {
    for (double z : grid) best = std::min(best, sdp_dual_bound(b, n, z));
  }
  DetectorResult r;
  r.detector_id = DetectorId::RelaxedScan;
  r.value = best;
  r.exact = false;
  if (opt.with_lower_bound) r.lower_bound = sparse_eig_lower(b, n).value;
  return r;
}

}  // namespace sentinel
