// Exact clique number: bitset branch and bound with greedy-colouring bounds
// over a degeneracy ordering, then a lexicographic pass for the witness.

#include <algorithm>
#include <bit>
#include <set>
#include <string>

#include "sentinel/detectors.hpp"
#include "sentinel/error.hpp"

namespace sentinel {
namespace {

using Bits = std::vector<std::uint64_t>;

bool any(const Bits& b) {
  return std::any_of(b.begin(), b.end(), [](std::uint64_t w) { return w != 0; });
}

std::size_t count(const Bits& b) {
  std::size_t c = 0;
  for (auto w : b) c += std::popcount(w);
  return c;
}

void reset(Bits& b, std::size_t v) { b[v / 64] &= ~(std::uint64_t{1} << (v % 64)); }
void set(Bits& b, std::size_t v) { b[v / 64] |= std::uint64_t{1} << (v % 64); }

int first(const Bits& b) {
  for (std::size_t w = 0; w < b.size(); ++w)
    if (b[w]) return static_cast<int>(w * 64 + std::countr_zero(b[w]));
  return -1;
}

// Smallest-last removal order: repeatedly drop a minimum-degree vertex.
std::vector<Node> degeneracy_order(const Graph& g, std::uint32_t& degeneracy) {
  const std::size_t N = g.num_nodes();
  std::vector<std::uint32_t> deg(g.degrees().begin(), g.degrees().end());
  std::set<std::pair<std::uint32_t, Node>> queue;
  for (Node v = 0; v < N; ++v) queue.emplace(deg[v], v);
  std::vector<char> gone(N, 0);
  std::vector<Node> removal;
  degeneracy = 0;
  while (!queue.empty()) {
    auto [d, v] = *queue.begin();
    queue.erase(queue.begin());
    degeneracy = std::max(degeneracy, d);
    gone[v] = 1;
    removal.push_back(v);
    for (Node u : g.neighbors(v)) {
      if (gone[u]) continue;
      queue.erase({deg[u], u});
      queue.emplace(--deg[u], u);
    }
  }
  return removal;
}

class CliqueSearch {
 public:
  CliqueSearch(const Graph& g, const std::vector<Node>& order, std::uint64_t budget)
      : N_(g.num_nodes()), words_(g.words_per_row()), order_(order), budget_(budget),
        adj_(N_, Bits(words_, 0)) {
    std::vector<Node> label(N_);
    for (std::size_t i = 0; i < N_; ++i) label[order_[i]] = static_cast<Node>(i);
    for (std::size_t i = 0; i < N_; ++i)
      for (Node u : g.neighbors(order_[i])) set(adj_[i], label[u]);
  }

  // Returns omega. `lower` is a known clique size.
  std::size_t solve(std::size_t lower, std::size_t upper) {
    best_ = lower;
    upper_ = upper;
    Bits all(words_, 0);
    for (std::size_t v = 0; v < N_; ++v) set(all, v);
    expand(all, 0);
    return best_;
  }

 private:
  void expand(Bits p, std::size_t depth) {
    if (++nodes_ > budget_)
      fail(ErrorKind::TimeBudgetExceeded, "clique search budget exhausted; omega in [" +
                                              std::to_string(best_) + ", " + std::to_string(upper_) + "]");
    std::vector<std::pair<std::size_t, std::size_t>> coloured;  // (vertex, colour)
    Bits uncoloured = p;
    for (std::size_t colour = 1; any(uncoloured); ++colour) {
      Bits q = uncoloured;
      for (int v = first(q); v >= 0; v = first(q)) {
        reset(q, static_cast<std::size_t>(v));
        reset(uncoloured, static_cast<std::size_t>(v));
        for (std::size_t w = 0; w < words_; ++w) q[w] &= ~adj_[static_cast<std::size_t>(v)][w];
        coloured.emplace_back(static_cast<std::size_t>(v), colour);
      }
    }
    for (auto it = coloured.rbegin(); it != coloured.rend(); ++it) {
      const auto [v, colour] = *it;
      if (depth + colour <= best_) return;
      Bits next(words_);
      for (std::size_t w = 0; w < words_; ++w) next[w] = p[w] & adj_[v][w];
      if (!any(next)) {
        best_ = std::max(best_, depth + 1);
      } else {
        expand(std::move(next), depth + 1);
      }
      reset(p, v);
    }
  }

  std::size_t N_, words_;
  const std::vector<Node>& order_;
  std::uint64_t budget_;
  std::uint64_t nodes_ = 0;
  std::size_t best_ = 0, upper_ = 0;
  std::vector<Bits> adj_;
};

// Number of colours of a greedy colouring of `p`, in index order.
std::size_t colour_bound(const Graph& g, Bits p) {
  std::size_t colours = 0;
  while (any(p)) {
    ++colours;
    Bits q = p;
    for (int v = first(q); v >= 0; v = first(q)) {
      reset(q, static_cast<std::size_t>(v));
      reset(p, static_cast<std::size_t>(v));
      const auto row = g.row(static_cast<Node>(v));
      for (std::size_t w = 0; w < q.size(); ++w) q[w] &= ~row[w];
    }
  }
  return colours;
}

// Lexicographic DFS for the first clique of size `target`.
bool first_clique(const Graph& g, Bits p, std::size_t target, std::vector<Node>& r) {
  if (r.size() == target) return true;
  if (r.size() + count(p) < target) return false;
  if (r.size() + colour_bound(g, p) < target) return false;
  for (int v = first(p); v >= 0; v = first(p)) {
    reset(p, static_cast<std::size_t>(v));
    const auto row = g.row(static_cast<Node>(v));
    Bits next(p.size());
    for (std::size_t w = 0; w < p.size(); ++w) next[w] = p[w] & row[w];
    r.push_back(static_cast<Node>(v));
    if (first_clique(g, std::move(next), target, r)) return true;
    r.pop_back();
    if (r.size() + count(p) < target) return false;
  }
  return false;
}

}  // namespace

bool is_clique(const Graph& g, const NodeSubset& s) {
  return g.subgraph_edges(s) == s.size() * (s.size() - (s.empty() ? 0 : 1)) / 2;
}

DetectorResult clique_number(const Graph& g, const SearchBudget& budget) {
  require(g.num_nodes() >= 1, ErrorKind::EmptyGraph, "graph has no nodes");
  std::uint32_t degeneracy = 0;
  std::vector<Node> order = degeneracy_order(g, degeneracy);
  std::reverse(order.begin(), order.end());

  // Greedy clique along the ordering as the starting incumbent.
  std::vector<Node> greedy;
  for (Node v : order) {
    bool ok = true;
    for (Node u : greedy) ok = ok && g.adjacent(u, v);
    if (ok) greedy.push_back(v);
  }
  const std::size_t omega = CliqueSearch(g, order, budget.nodes).solve(greedy.size(), degeneracy + 1);

  Bits all(g.words_per_row(), 0);
  for (std::size_t v = 0; v < g.num_nodes(); ++v) set(all, v);
  std::vector<Node> witness;
  first_clique(g, std::move(all), omega, witness);

  DetectorResult r;
  r.detector_id = DetectorId::CliqueNumber;
  r.value = static_cast<double>(omega);
  r.witness = NodeSubset(std::move(witness));
  return r;
}

}  // namespace sentinel
