// Densest subgraph: exact via parametric min cut, and greedy peeling.

#include <algorithm>
#include <limits>
#include <queue>
#include <set>
#include <string>

#include "sentinel/detectors.hpp"
#include "sentinel/error.hpp"

namespace sentinel {
namespace {

// Dinic's algorithm on int64 capacities.
class MaxFlow {
 public:
  explicit MaxFlow(std::size_t nodes) : head_(nodes, -1), level_(nodes), it_(nodes) {}

  void add_edge(std::size_t u, std::size_t v, std::int64_t cap, std::int64_t rev_cap = 0) {
    arcs_.push_back({v, head_[u], cap});
    head_[u] = static_cast<int>(arcs_.size()) - 1;
    arcs_.push_back({u, head_[v], rev_cap});
    head_[v] = static_cast<int>(arcs_.size()) - 1;
  }

  std::int64_t run(std::size_t s, std::size_t t) {
    std::int64_t flow = 0;
    while (bfs(s, t)) {
      for (std::size_t v = 0; v < head_.size(); ++v) it_[v] = head_[v];
      while (std::int64_t f = dfs(s, t, std::numeric_limits<std::int64_t>::max())) flow += f;
    }
    return flow;
  }

  // Nodes reachable from s in the residual graph after run().
  std::vector<char> source_side(std::size_t s) const {
    std::vector<char> seen(head_.size(), 0);
    std::vector<std::size_t> stack{s};
    seen[s] = 1;
    while (!stack.empty()) {
      const std::size_t u = stack.back();
      stack.pop_back();
      for (int e = head_[u]; e >= 0; e = arcs_[e].next)
        if (arcs_[e].cap > 0 && !seen[arcs_[e].to]) {
          seen[arcs_[e].to] = 1;
          stack.push_back(arcs_[e].to);
        }
    }
    return seen;
  }

 private:
  struct Arc {
    std::size_t to;
    int next;
    std::int64_t cap;
  };

  bool bfs(std::size_t s, std::size_t t) {
    std::fill(level_.begin(), level_.end(), -1);
    std::queue<std::size_t> q;
    level_[s] = 0;
    q.push(s);
    while (!q.empty()) {
      const std::size_t u = q.front();
      q.pop();
      for (int e = head_[u]; e >= 0; e = arcs_[e].next)
        if (arcs_[e].cap > 0 && level_[arcs_[e].to] < 0) {
          level_[arcs_[e].to] = level_[u] + 1;
          q.push(arcs_[e].to);
        }
    }
    return level_[t] >= 0;
  }

  std::int64_t dfs(std::size_t u, std::size_t t, std::int64_t pushed) {
    if (u == t) return pushed;
    for (int& e = it_[u]; e >= 0; e = arcs_[e].next) {
      Arc& a = arcs_[e];
      if (a.cap <= 0 || level_[a.to] != level_[u] + 1) continue;
      if (std::int64_t f = dfs(a.to, t, std::min(pushed, a.cap))) {
        a.cap -= f;
        arcs_[e ^ 1].cap += f;
        return f;
      }
    }
    return 0;
  }

  std::vector<int> head_;
  std::vector<Arc> arcs_;
  std::vector<int> level_;
  std::vector<int> it_;
};

// Goldberg's construction scaled by D: some S has D|E_S| - a|S| > 0 iff the
// min cut is below D m N. Returns the maximizing set (empty if infeasible).
std::vector<Node> denser_than(const Graph& g, const std::vector<Edge>& edges, std::int64_t d,
                              std::int64_t a) {
  const std::size_t N = g.num_nodes();
  const auto m = static_cast<std::int64_t>(edges.size());
  const std::size_t s = N, t = N + 1;
  MaxFlow flow(N + 2);
  for (Node v = 0; v < N; ++v) {
    flow.add_edge(s, v, d * m);
    flow.add_edge(v, t, d * m + 2 * a - d * static_cast<std::int64_t>(g.degrees()[v]));
  }
  for (auto [u, v] : edges) flow.add_edge(u, v, d, d);
  const std::int64_t cut = flow.run(s, t);
  std::vector<Node> out;
  if (cut >= d * m * static_cast<std::int64_t>(N)) return out;
  const auto side = flow.source_side(s);
  for (Node v = 0; v < N; ++v)
    if (side[v]) out.push_back(v);
  return out;
}

// Min-degree peeling. Returns the best prefix of the peel among sets with at
// least `min_size` nodes; ties keep the larger set.
std::pair<double, std::vector<Node>> peel(const Graph& g, std::size_t min_size) {
  const std::size_t N = g.num_nodes();
  std::vector<std::uint32_t> deg(g.degrees().begin(), g.degrees().end());
  std::set<std::pair<std::uint32_t, Node>> queue;
  for (Node v = 0; v < N; ++v) queue.emplace(deg[v], v);
  std::vector<char> gone(N, 0);
  std::vector<Node> removed;
  std::uint64_t edges = g.total_edges();
  double best = static_cast<double>(edges) / static_cast<double>(N);
  std::size_t best_removed = 0;
  for (std::size_t size = N; size > min_size;) {
    auto [d, v] = *queue.begin();
    queue.erase(queue.begin());
    gone[v] = 1;
    removed.push_back(v);
    edges -= d;
    for (Node u : g.neighbors(v)) {
      if (gone[u]) continue;
      queue.erase({deg[u], u});
      queue.emplace(--deg[u], u);
    }
    --size;
    const double h = static_cast<double>(edges) / static_cast<double>(size);
    if (h > best) {
      best = h;
      best_removed = removed.size();
    }
  }
  std::vector<char> drop(N, 0);
  for (std::size_t k = 0; k < best_removed; ++k) drop[removed[k]] = 1;
  std::vector<Node> set;
  for (Node v = 0; v < N; ++v)
    if (!drop[v]) set.push_back(v);
  return {best, std::move(set)};
}

}  // namespace

DetectorResult densest_subgraph(const Graph& g, DensestMode mode) {
  require(g.total_edges() >= 1, ErrorKind::EmptyGraph, "densest subgraph needs at least one edge");
  DetectorResult r;
  r.detector_id = DetectorId::DensestSubgraph;
  if (mode == DensestMode::Peel) {
    auto [h, set] = peel(g, 1);
    r.value = h;
    r.witness = NodeSubset(std::move(set));
    r.exact = false;
    return r;
  }

  // Densities m/k with k <= N are separated by at least 1/(N(N-1)), so a
  // search over the grid a/D, D = N(N-1), pins the optimum exactly.
  const std::size_t N = g.num_nodes();
  const auto d = static_cast<std::int64_t>(N * (N - 1));
  const auto edges = g.edge_list();
  std::int64_t lo = 0;                                          // feasible
  std::int64_t hi = d * static_cast<std::int64_t>(N - 1) / 2 + 1;  // infeasible
  std::vector<Node> witness = denser_than(g, edges, d, lo);
  while (hi - lo > 1) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    auto s = denser_than(g, edges, d, mid);
    if (!s.empty()) {
      lo = mid;
      witness = std::move(s);
    } else {
      hi = mid;
    }
  }
  NodeSubset ws(std::move(witness));
  r.value = static_cast<double>(g.subgraph_edges(ws)) / static_cast<double>(ws.size());
  r.witness = std::move(ws);
  return r;
}

DetectorResult densest_at_least(const Graph& g, std::size_t n) {
  require(n >= 1 && n <= g.num_nodes(), ErrorKind::InvalidSize, "need 1 <= n <= N");
  auto [h, set] = peel(g, n);
  DetectorResult r;
  r.detector_id = DetectorId::DensestAtLeast;
  r.value = h;
  r.witness = NodeSubset(std::move(set));
  r.exact = false;
  return r;
}

}  // namespace sentinel
