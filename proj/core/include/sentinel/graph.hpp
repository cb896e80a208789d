#pragma once

#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

namespace sentinel {

using Node = std::uint32_t;
using Edge = std::pair<Node, Node>;

/// Sorted, duplicate-free list of node indices.
class NodeSubset {
 public:
  NodeSubset() = default;
  /// Throws IndexOutOfRange unless `nodes` is strictly increasing.
  explicit NodeSubset(std::vector<Node> nodes);
  NodeSubset(std::initializer_list<Node> nodes) : NodeSubset(std::vector<Node>(nodes)) {}

  /// Accepts any order; sorts and rejects duplicates.
  static NodeSubset from_unsorted(std::vector<Node> nodes);
  /// The prefix {0, ..., n-1}.
  static NodeSubset prefix(std::size_t n);

  std::size_t size() const noexcept { return nodes_.size(); }
  bool empty() const noexcept { return nodes_.empty(); }
  std::span<const Node> nodes() const noexcept { return nodes_; }
  Node operator[](std::size_t i) const { return nodes_[i]; }
  auto begin() const noexcept { return nodes_.begin(); }
  auto end() const noexcept { return nodes_.end(); }
  bool contains(Node v) const;

  friend bool operator==(const NodeSubset&, const NodeSubset&) = default;
  friend auto operator<=>(const NodeSubset& a, const NodeSubset& b) { return a.nodes_ <=> b.nodes_; }

 private:
  std::vector<Node> nodes_;
};

/// Immutable simple undirected graph with bit-packed adjacency rows.
///
/// Row i holds ceil(N/64) words; bit j of row i is set iff {i, j} is an edge.
/// The diagonal is always clear.
class Graph {
 public:
  Graph() = default;

  /// Duplicate pairs collapse to one edge. Throws IndexOutOfRange or
  /// SelfLoopRejected.
  static Graph from_edge_list(std::size_t num_nodes, std::span<const Edge> edges);
  static Graph from_edge_list(std::size_t num_nodes, std::initializer_list<Edge> edges) {
    return from_edge_list(num_nodes, std::span<const Edge>(edges.begin(), edges.size()));
  }
  static Graph complete(std::size_t num_nodes);
  static Graph empty(std::size_t num_nodes) { return from_edge_list(num_nodes, {}); }

  std::size_t num_nodes() const noexcept { return n_; }
  std::size_t words_per_row() const noexcept { return words_; }
  std::uint64_t total_edges() const noexcept { return edges_; }

  std::uint32_t degree(Node i) const;
  std::span<const std::uint32_t> degrees() const noexcept { return degrees_; }
  std::uint32_t max_degree() const noexcept;

  bool adjacent(Node i, Node j) const;
  std::span<const std::uint64_t> row(Node i) const noexcept {
    return {bits_.data() + static_cast<std::size_t>(i) * words_, words_};
  }

  /// Number of edges with both endpoints in `s` (each edge counted once).
  std::uint64_t subgraph_edges(const NodeSubset& s) const;
  /// Same, with the subset given as a bit mask of `words_per_row()` words.
  std::uint64_t subgraph_edges(std::span<const std::uint64_t> mask) const;

  /// Edges as (i, j) pairs with i < j, in row-major order.
  std::vector<Edge> edge_list() const;
  std::vector<Node> neighbors(Node i) const;
  Graph complement() const;

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.n_ == b.n_ && a.bits_ == b.bits_;
  }

 private:
  friend class GraphBuilder;

  std::size_t n_ = 0;
  std::size_t words_ = 0;
  std::uint64_t edges_ = 0;
  std::vector<std::uint64_t> bits_;
  std::vector<std::uint32_t> degrees_;
};

/// Mutable staging area for samplers and parsers. Call build() once.
class GraphBuilder {
 public:
  explicit GraphBuilder(std::size_t num_nodes);

  /// Returns false when the edge was already present. No range checks.
  bool add_edge_unchecked(Node i, Node j);
  /// Range- and loop-checked variant of add_edge_unchecked.
  bool add_edge(Node i, Node j);
  std::size_t num_nodes() const noexcept { return g_.n_; }

  Graph build() &&;

 private:
  Graph g_;
};

struct ReadReport {
  std::size_t duplicate_lines = 0;
};

// Edge-list text format: "N M" header then M lines "i j" with 0 <= i < j < N.
Graph parse_graph(std::istream& in, ReadReport* report = nullptr);
void format_graph(const Graph& g, std::ostream& out);
Graph read_graph(const std::filesystem::path& path, ReadReport* report = nullptr);
void write_graph(const Graph& g, const std::filesystem::path& path);

/// Bit mask (words_per_row() words) with the bits of `s` set.
std::vector<std::uint64_t> subset_mask(const Graph& g, const NodeSubset& s);

}  // namespace sentinel
