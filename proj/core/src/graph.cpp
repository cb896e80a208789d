#include "sentinel/graph.hpp"

#include <algorithm>
#include <bit>
#include <string>

#include "sentinel/error.hpp"

namespace sentinel {

NodeSubset::NodeSubset(std::vector<Node> nodes) : nodes_(std::move(nodes)) {
  for (std::size_t k = 1; k < nodes_.size(); ++k) {
    require(nodes_[k - 1] < nodes_[k], ErrorKind::IndexOutOfRange,
            "node subset must be strictly increasing");
  }
}

NodeSubset NodeSubset::from_unsorted(std::vector<Node> nodes) {
  std::sort(nodes.begin(), nodes.end());
  return NodeSubset(std::move(nodes));
}

NodeSubset NodeSubset::prefix(std::size_t n) {
  std::vector<Node> nodes(n);
  for (std::size_t i = 0; i < n; ++i) nodes[i] = static_cast<Node>(i);
  return NodeSubset(std::move(nodes));
}

bool NodeSubset::contains(Node v) const { return std::binary_search(nodes_.begin(), nodes_.end(), v); }

GraphBuilder::GraphBuilder(std::size_t num_nodes) {
  g_.n_ = num_nodes;
  g_.words_ = (num_nodes + 63) / 64;
  g_.bits_.assign(num_nodes * g_.words_, 0);
  g_.degrees_.assign(num_nodes, 0);
}

bool GraphBuilder::add_edge_unchecked(Node i, Node j) {
  const std::size_t w = g_.words_;
  std::uint64_t& a = g_.bits_[i * w + j / 64];
  const std::uint64_t bit = std::uint64_t{1} << (j % 64);
  if (a & bit) return false;
  a |= bit;
  g_.bits_[j * w + i / 64] |= std::uint64_t{1} << (i % 64);
  ++g_.degrees_[i];
  ++g_.degrees_[j];
  ++g_.edges_;
  return true;
}

bool GraphBuilder::add_edge(Node i, Node j) {
  require(i < g_.n_ && j < g_.n_, ErrorKind::IndexOutOfRange,
          "edge (" + std::to_string(i) + "," + std::to_string(j) + ") outside [0," +
              std::to_string(g_.n_) + ")");
  require(i != j, ErrorKind::SelfLoopRejected, "self loop at node " + std::to_string(i));
  return add_edge_unchecked(i, j);
}

Graph GraphBuilder::build() && { return std::move(g_); }

Graph Graph::from_edge_list(std::size_t num_nodes, std::span<const Edge> edges) {
  require(num_nodes >= 1, ErrorKind::InvalidSize, "graph needs at least one node");
  GraphBuilder b(num_nodes);
  for (auto [i, j] : edges) b.add_edge(i, j);
  return std::move(b).build();
}

Graph Graph::complete(std::size_t num_nodes) {
  GraphBuilder b(num_nodes);
  for (Node i = 0; i < num_nodes; ++i)
    for (Node j = i + 1; j < num_nodes; ++j) b.add_edge_unchecked(i, j);
  return std::move(b).build();
}

std::uint32_t Graph::degree(Node i) const {
  require(i < n_, ErrorKind::IndexOutOfRange, "node " + std::to_string(i));
  return degrees_[i];
}

std::uint32_t Graph::max_degree() const noexcept {
  return degrees_.empty() ? 0 : *std::max_element(degrees_.begin(), degrees_.end());
}

bool Graph::adjacent(Node i, Node j) const {
  require(i < n_ && j < n_, ErrorKind::IndexOutOfRange, "node pair");
  return (bits_[i * words_ + j / 64] >> (j % 64)) & 1U;
}

std::uint64_t Graph::subgraph_edges(std::span<const std::uint64_t> mask) const {
  std::uint64_t twice = 0;
  for (std::size_t w = 0; w < words_; ++w) {
    std::uint64_t m = mask[w];
    while (m) {
      const std::size_t i = w * 64 + static_cast<std::size_t>(std::countr_zero(m));
      m &= m - 1;
      const std::uint64_t* r = bits_.data() + i * words_;
      for (std::size_t k = 0; k < words_; ++k) twice += std::popcount(r[k] & mask[k]);
    }
  }
  return twice / 2;
}

std::uint64_t Graph::subgraph_edges(const NodeSubset& s) const {
  if (s.size() <= 1) {
    for (Node v : s) require(v < n_, ErrorKind::IndexOutOfRange, "node " + std::to_string(v));
    return 0;
  }
  return subgraph_edges(subset_mask(*this, s));
}

std::vector<Edge> Graph::edge_list() const {
  std::vector<Edge> out;
  out.reserve(edges_);
  for (Node i = 0; i < n_; ++i) {
    const std::uint64_t* r = bits_.data() + std::size_t{i} * words_;
    for (std::size_t w = (i + 1) / 64; w < words_; ++w) {
      std::uint64_t m = r[w];
      if (w == (i + 1) / 64) m &= ~std::uint64_t{0} << ((i + 1) % 64);
      while (m) {
        out.emplace_back(i, static_cast<Node>(w * 64 + std::countr_zero(m)));
        m &= m - 1;
      }
    }
  }
  return out;
}

std::vector<Node> Graph::neighbors(Node i) const {
  require(i < n_, ErrorKind::IndexOutOfRange, "node " + std::to_string(i));
  std::vector<Node> out;
  out.reserve(degrees_[i]);
  const auto r = row(i);
  for (std::size_t w = 0; w < words_; ++w) {
    std::uint64_t m = r[w];
    while (m) {
      out.push_back(static_cast<Node>(w * 64 + std::countr_zero(m)));
      m &= m - 1;
    }
  }
  return out;
}

Graph Graph::complement() const {
  GraphBuilder b(n_);
  for (Node i = 0; i < n_; ++i)
    for (Node j = i + 1; j < n_; ++j)
      if (!((bits_[i * words_ + j / 64] >> (j % 64)) & 1U)) b.add_edge_unchecked(i, j);
  return std::move(b).build();
}

std::vector<std::uint64_t> subset_mask(const Graph& g, const NodeSubset& s) {
  std::vector<std::uint64_t> mask(g.words_per_row(), 0);
  for (Node v : s) {
    require(v < g.num_nodes(), ErrorKind::IndexOutOfRange, "node " + std::to_string(v));
    mask[v / 64] |= std::uint64_t{1} << (v % 64);
  }
  return mask;
}

}  // namespace sentinel
