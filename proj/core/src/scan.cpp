// Scan statistic max_{|S|=n} W_S and the GLR statistic built on it.

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>

#include "sentinel/detectors.hpp"
#include "sentinel/error.hpp"
#include "sentinel/kernels.hpp"
#include "sentinel/models.hpp"

namespace sentinel {
namespace {

// C(n, k) saturated at `cap`.
std::uint64_t binomial_capped(std::uint64_t n, std::uint64_t k, std::uint64_t cap) {
  k = std::min(k, n - k);
  unsigned __int128 c = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    c = c * (n - k + i) / i;
    if (c > cap) return cap + 1;
  }
  return static_cast<std::uint64_t>(c);
}

struct Best {
  std::uint64_t value = 0;
  std::vector<Node> set;
  bool found = false;
};

// Shared state for the two exact searches. Both visit subsets in
// lexicographic order and replace the incumbent only on strict improvement,
// so the reported witness is the lexicographically smallest optimum.
class ScanSearch {
 public:
  ScanSearch(const Graph& g, std::size_t n, const SearchBudget& budget)
      : g_(g), n_(n), N_(g.num_nodes()), words_(g.words_per_row()), n2_(half_pair(n)),
        budget_(budget.nodes), a_(N_, 0), pmask_(words_, 0), scratch_(n + 1) {}

  Best enumerate() {
    path_.clear();
    enum_dfs(0, 0, n_);
    return best_;
  }

  // `floor` is a value known to be attainable (from the greedy heuristic).
  Best branch_and_bound(std::uint64_t floor) {
    target_ = floor;
    path_.clear();
    bb_dfs(0, 0, n_);
    return best_;
  }

 private:
  void tick() {
    if (++nodes_ > budget_)
      fail(ErrorKind::BudgetExceeded, "scan search exceeded " + std::to_string(budget_) + " nodes");
  }

  void record(std::uint64_t w) {
    best_.value = w;
    best_.set = path_;
    best_.found = true;
    target_ = w + 1;
    if (w == n2_) done_ = true;
  }

  std::uint64_t links_to_path(Node v) const {
    const auto r = g_.row(v);
    std::uint64_t c = 0;
    for (std::size_t k = 0; k < words_; ++k) c += std::popcount(r[k] & pmask_[k]);
    return c;
  }

  void enum_dfs(std::size_t start, std::uint64_t wp, std::size_t r) {
    if (done_) return;
    if (r == 0) {
      if (!best_.found || wp > best_.value) record(wp);
      return;
    }
    for (std::size_t v = start; v + r <= N_ && !done_; ++v) {
      const std::uint64_t w = wp + links_to_path(static_cast<Node>(v));
      pmask_[v / 64] |= std::uint64_t{1} << (v % 64);
      path_.push_back(static_cast<Node>(v));
      enum_dfs(v + 1, w, r - 1);
      path_.pop_back();
      pmask_[v / 64] &= ~(std::uint64_t{1} << (v % 64));
    }
  }

  // Admissible bound on the best completion of the current path using r more
  // vertices from [start, N): each pick contributes its links into the path
  // plus at most half of min(r-1, its degree among candidates).
  std::uint64_t completion_bound(std::size_t start, std::size_t r) {
    std::vector<std::uint64_t> cmask(words_, 0);
    for (std::size_t w = start / 64; w < words_; ++w) cmask[w] = ~std::uint64_t{0};
    cmask[start / 64] &= ~std::uint64_t{0} << (start % 64);

    auto& vals = scratch_[r];
    vals.clear();
    std::vector<std::uint64_t> links;
    links.reserve(N_ - start);
    for (std::size_t c = start; c < N_; ++c) {
      const auto row = g_.row(static_cast<Node>(c));
      std::uint64_t dc = 0;
      for (std::size_t k = start / 64; k < words_; ++k) dc += std::popcount(row[k] & cmask[k]);
      vals.push_back(2 * a_[c] + std::min<std::uint64_t>(r - 1, dc));
      links.push_back(a_[c]);
    }
    auto top_sum = [r](std::vector<std::uint64_t>& v) {
      std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(r - 1), v.end(), std::greater<>());
      return std::accumulate(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(r), std::uint64_t{0});
    };
    const std::uint64_t b1 = top_sum(vals) / 2;
    const std::uint64_t b2 = top_sum(links) + half_pair(r);
    return std::min(b1, b2);
  }

  void bb_dfs(std::size_t start, std::uint64_t wp, std::size_t r) {
    if (done_) return;
    tick();
    if (r == 0) {
      if (wp >= target_) record(wp);
      return;
    }
    if (N_ - start < r) return;
    if (r == 1) {
      std::size_t arg = start;
      for (std::size_t c = start + 1; c < N_; ++c)
        if (a_[c] > a_[arg]) arg = c;
      if (wp + a_[arg] >= target_) {
        path_.push_back(static_cast<Node>(arg));
        record(wp + a_[arg]);
        path_.pop_back();
      }
      return;
    }
    if (wp + completion_bound(start, r) < target_) return;

    for (std::size_t v = start; v + r <= N_ && !done_; ++v) {
      const auto nb = g_.row(static_cast<Node>(v));
      for_each_later_neighbor(nb, v, [&](std::size_t u) { ++a_[u]; });
      path_.push_back(static_cast<Node>(v));
      bb_dfs(v + 1, wp + a_[v], r - 1);
      path_.pop_back();
      for_each_later_neighbor(nb, v, [&](std::size_t u) { --a_[u]; });
    }
  }

  template <class F>
  void for_each_later_neighbor(std::span<const std::uint64_t> row, std::size_t v, F&& f) const {
    for (std::size_t w = (v + 1) / 64; w < words_; ++w) {
      std::uint64_t m = row[w];
      if (w == (v + 1) / 64) m &= ~std::uint64_t{0} << ((v + 1) % 64);
      while (m) {
        f(w * 64 + static_cast<std::size_t>(std::countr_zero(m)));
        m &= m - 1;
      }
    }
  }

  const Graph& g_;
  std::size_t n_, N_, words_;
  std::uint64_t n2_;
  std::uint64_t budget_;
  std::uint64_t nodes_ = 0;
  std::uint64_t target_ = 0;
  bool done_ = false;
  std::vector<std::uint64_t> a_;  // links from each vertex into the current path
  std::vector<std::uint64_t> pmask_;
  std::vector<Node> path_;
  std::vector<std::vector<std::uint64_t>> scratch_;
  Best best_;
};

// Greedy growth from every start vertex, then 1-swap local search on the
// best set found.
Best greedy_scan(const Graph& g, std::size_t n) {
  const std::size_t N = g.num_nodes();
  Best best;
  std::vector<std::uint32_t> links(N);
  std::vector<char> in(N);
  auto add = [&](Node v) {
    in[v] = 1;
    for (Node u : g.neighbors(v)) ++links[u];
  };
  for (Node s = 0; s < N; ++s) {
    std::fill(links.begin(), links.end(), 0);
    std::fill(in.begin(), in.end(), 0);
    std::vector<Node> set{s};
    add(s);
    std::uint64_t w = 0;
    while (set.size() < n) {
      Node pick = 0;
      bool have = false;
      for (Node v = 0; v < N; ++v)
        if (!in[v] && (!have || links[v] > links[pick])) {
          pick = v;
          have = true;
        }
      w += links[pick];
      set.push_back(pick);
      add(pick);
    }
    if (!best.found || w > best.value) {
      best.value = w;
      best.set = set;
      best.found = true;
    }
  }

  // Local search: swap u in S for v outside when it gains edges.
  std::fill(links.begin(), links.end(), 0);
  std::fill(in.begin(), in.end(), 0);
  for (Node v : best.set) add(v);
  for (bool improved = true; improved;) {
    improved = false;
    for (std::size_t k = 0; k < best.set.size() && !improved; ++k) {
      const Node u = best.set[k];
      for (Node v = 0; v < N && !improved; ++v) {
        if (in[v]) continue;
        const std::int64_t gain = static_cast<std::int64_t>(links[v]) - (g.adjacent(u, v) ? 1 : 0) -
                                  static_cast<std::int64_t>(links[u]);
        if (gain > 0) {
          in[u] = 0;
          for (Node x : g.neighbors(u)) --links[x];
          add(v);
          best.set[k] = v;
          best.value += static_cast<std::uint64_t>(gain);
          improved = true;
        }
      }
    }
  }
  std::sort(best.set.begin(), best.set.end());
  return best;
}

void check_size(const Graph& g, std::size_t n) {
  require(n >= 1 && n <= g.num_nodes(), ErrorKind::InvalidSize,
          "community size must lie in [1, N], got " + std::to_string(n));
}

}  // namespace

DetectorResult scan_stat(const Graph& g, std::size_t n, ScanMode mode, const SearchBudget& budget) {
  check_size(g, n);
  DetectorResult r;
  r.detector_id = DetectorId::Scan;
  Best best;
  switch (mode) {
    case ScanMode::Exact: {
      const std::uint64_t count = binomial_capped(g.num_nodes(), n, budget.enumeration);
      require(count <= budget.enumeration, ErrorKind::BudgetExceeded,
              "C(N, n) exceeds the enumeration budget of " + std::to_string(budget.enumeration));
      best = ScanSearch(g, n, budget).enumerate();
      break;
    }
    case ScanMode::BranchBound: {
      const Best seed = n >= 2 ? greedy_scan(g, n) : Best{};
      best = ScanSearch(g, n, budget).branch_and_bound(seed.value);
      break;
    }
    case ScanMode::Greedy:
      best = greedy_scan(g, n);
      r.exact = false;
      break;
  }
  r.value = static_cast<double>(best.value);
  r.witness = NodeSubset(best.set);
  return r;
}

std::vector<DetectorResult> scan_all_sizes(const Graph& g, std::size_t n_min, std::size_t n_max,
                                           ScanMode mode, const SearchBudget& budget) {
  require(n_min >= 1 && n_min <= n_max && n_max <= g.num_nodes(), ErrorKind::InvalidSize,
          "need 1 <= n_min <= n_max <= N");
  std::vector<DetectorResult> out;
  for (std::size_t n = n_min; n <= n_max; ++n) out.push_back(scan_stat(g, n, mode, budget));
  return out;
}

double glr_objective(const Graph& g, std::size_t n, std::uint64_t w_s) {
  const double N2 = static_cast<double>(half_pair(g.num_nodes()));
  const double n2 = static_cast<double>(half_pair(n));
  const double W = static_cast<double>(g.total_edges());
  const double ws = static_cast<double>(w_s);
  const double value = n2 * neg_binary_entropy(ws / n2) + (N2 - n2) * neg_binary_entropy((W - ws) / (N2 - n2)) -
                       N2 * neg_binary_entropy(W / N2);
  // Nonnegative by convexity of h; clear rounding noise.
  return std::max(value, 0.0);
}

DetectorResult glr_stat(const Graph& g, std::size_t n, ScanMode mode, const SearchBudget& budget) {
  require(n >= 2 && n < g.num_nodes(), ErrorKind::InvalidSize, "GLR needs 2 <= n < N");
  require(mode != ScanMode::Greedy, ErrorKind::DomainError, "GLR needs an exact scan mode");
  // The objective is convex in W_S, so the maximum over subsets sits at the
  // largest or the smallest attainable W_S. The smallest is a scan of the
  // complement graph.
  const DetectorResult hi = scan_stat(g, n, mode, budget);
  const DetectorResult lo = scan_stat(g.complement(), n, mode, budget);
  const auto w_hi = static_cast<std::uint64_t>(hi.value);
  const auto w_lo = half_pair(n) - static_cast<std::uint64_t>(lo.value);
  const double g_hi = glr_objective(g, n, w_hi);
  const double g_lo = glr_objective(g, n, w_lo);

  DetectorResult r;
  r.detector_id = DetectorId::Glr;
  if (g_hi > g_lo || (g_hi == g_lo && *hi.witness <= *lo.witness)) {
    r.value = g_hi;
    r.witness = hi.witness;
  } else {
    r.value = g_lo;
    r.witness = lo.witness;
  }
  return r;
}

}  // namespace sentinel
