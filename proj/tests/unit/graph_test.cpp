#include <algorithm>
#include <filesystem>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "sentinel/error.hpp"
#include "sentinel/graph.hpp"

namespace sentinel {
namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorKind::DomainError;
}

Graph star(std::size_t N) {
  std::vector<Edge> e;
  for (Node v = 1; v < N; ++v) e.emplace_back(0, v);
  return Graph::from_edge_list(N, e);
}

TEST(Graph, PathFromEdgeList) {
  const Graph g = Graph::from_edge_list(3, {{0, 1}, {1, 2}});
  EXPECT_EQ(g.total_edges(), 2u);
  EXPECT_TRUE(g.adjacent(0, 1));
  EXPECT_TRUE(g.adjacent(2, 1));
  EXPECT_FALSE(g.adjacent(0, 2));
  EXPECT_EQ(g.degree(1), 2u);
}

TEST(Graph, EmptyAndComplete) {
  EXPECT_EQ(Graph::empty(2).total_edges(), 0u);
  EXPECT_EQ(Graph::complete(4).total_edges(), 6u);
  for (Node v = 0; v < 4; ++v) EXPECT_EQ(Graph::complete(4).degree(v), 3u);
}

TEST(Graph, RejectsSelfLoopsAndBadIndices) {
  EXPECT_EQ(kind_of([] { Graph::from_edge_list(3, {{0, 0}}); }), ErrorKind::SelfLoopRejected);
  EXPECT_EQ(kind_of([] { Graph::from_edge_list(3, {{0, 3}}); }), ErrorKind::IndexOutOfRange);
  EXPECT_EQ(kind_of([] { Graph::complete(3).degree(3); }), ErrorKind::IndexOutOfRange);
}

TEST(Graph, DuplicatePairsCollapse) {
  const Graph g = Graph::from_edge_list(3, {{0, 1}, {1, 0}, {0, 1}});
  EXPECT_EQ(g.total_edges(), 1u);
}

TEST(Graph, StarDegrees) {
  const Graph g = star(5);
  EXPECT_EQ(g.degree(0), 4u);
  EXPECT_EQ(g.max_degree(), 4u);
  const Graph h = Graph::from_edge_list(4, {{0, 1}});
  EXPECT_EQ(h.degree(3), 0u);
}

TEST(Graph, SubgraphEdges) {
  const Graph k5 = Graph::complete(5);
  EXPECT_EQ(k5.subgraph_edges(NodeSubset{0, 2, 4}), 3u);
  EXPECT_EQ(k5.subgraph_edges(NodeSubset{3}), 0u);
  EXPECT_EQ(k5.subgraph_edges(NodeSubset{}), 0u);
  EXPECT_EQ(k5.subgraph_edges(NodeSubset::prefix(5)), k5.total_edges());
}

TEST(Graph, NodeSubsetMustBeStrictlyIncreasing) {
  EXPECT_EQ(kind_of([] { NodeSubset({2, 1}); }), ErrorKind::IndexOutOfRange);
  EXPECT_EQ(kind_of([] { NodeSubset({1, 1}); }), ErrorKind::IndexOutOfRange);
  EXPECT_EQ(NodeSubset::from_unsorted({3, 1, 2}), (NodeSubset{1, 2, 3}));
  EXPECT_EQ(kind_of([] { NodeSubset::from_unsorted({3, 1, 2, 1}); }), ErrorKind::IndexOutOfRange);
}

// Degree sum, the pair-loop oracle on every subset, and monotonicity under
// inclusion, on 100 random graphs with N <= 15.
TEST(GraphProperty, SubgraphEdgesMatchesPairLoopOnAllSubsets) {
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t N = 2 + rep % 14;
    const Graph g = oracle::random_graph(rng, N, 0.1 + 0.8 * (rep % 7) / 6.0);
    std::uint64_t deg_sum = 0;
    for (auto d : g.degrees()) deg_sum += d;
    ASSERT_EQ(deg_sum, 2 * g.total_edges());
    const auto a = oracle::adjacency(g);
    for (std::uint32_t mask = 0; mask < (1U << N); ++mask) {
      const auto s = oracle::members(mask);
      const NodeSubset sub(s);
      const auto w = g.subgraph_edges(sub);
      ASSERT_EQ(w, static_cast<std::uint64_t>(oracle::edges_in(a, s)));
      ASSERT_EQ(w, g.subgraph_edges(subset_mask(g, sub)));
      for (Node v = 0; v < N; ++v)
        if (!(mask >> v & 1U)) {
          ASSERT_LE(w, g.subgraph_edges(NodeSubset(oracle::members(mask | 1U << v))));
        }
    }
  }
}

TEST(GraphProperty, RandomSubsetOfTwelveNodes) {
  std::mt19937_64 rng(5);
  for (int rep = 0; rep < 50; ++rep) {
    const Graph g = oracle::random_graph(rng, 12, 0.5);
    std::vector<Node> all(12);
    std::iota(all.begin(), all.end(), Node{0});
    std::shuffle(all.begin(), all.end(), rng);
    all.resize(5);
    const auto sub = NodeSubset::from_unsorted(all);
    EXPECT_EQ(g.subgraph_edges(sub), static_cast<std::uint64_t>(oracle::edges_in(oracle::adjacency(g),
                                                                               {sub.begin(), sub.end()})));
  }
}

TEST(Graph, ComplementAndEdgeList) {
  const Graph g = Graph::from_edge_list(4, {{0, 1}, {2, 3}});
  const Graph c = g.complement();
  EXPECT_EQ(c.total_edges(), 4u);
  EXPECT_FALSE(c.adjacent(0, 1));
  EXPECT_EQ(c.complement(), g);
  EXPECT_EQ(g.edge_list(), (std::vector<Edge>{{0, 1}, {2, 3}}));
  EXPECT_EQ(g.neighbors(0), (std::vector<Node>{1}));
}

TEST(GraphIo, ParsesPathAndEmpty) {
  std::istringstream path("3 2\n0 1\n1 2\n");
  EXPECT_EQ(parse_graph(path), Graph::from_edge_list(3, {{0, 1}, {1, 2}}));
  std::istringstream empty("2 0\n");
  EXPECT_EQ(parse_graph(empty), Graph::empty(2));
}

TEST(GraphIo, ParseErrorsCarryLineNumbers) {
  std::istringstream bad("3 1\n0 3\n");
  try {
    parse_graph(bad);
    FAIL() << "expected ParseError";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ParseError);
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
  for (const char* text : {"", "x\n", "0 0\n", "3 2\n0 1\n", "3 1\n1 0\n", "3 1\n0  1\n", "3 1\n0 1\n1 2\n"}) {
    std::istringstream in(text);
    EXPECT_EQ(kind_of([&] { parse_graph(in); }), ErrorKind::ParseError) << text;
  }
}

TEST(GraphIo, DuplicateLinesAreCounted) {
  std::istringstream in("3 3\n0 1\n0 1\n1 2\n");
  ReadReport report;
  const Graph g = parse_graph(in, &report);
  EXPECT_EQ(g.total_edges(), 2u);
  EXPECT_EQ(report.duplicate_lines, 1u);
}

TEST(GraphIo, ToleratesCarriageReturnsAndTrailingBlankLines) {
  std::istringstream in("3 1\r\n0 2\r\n\n");
  EXPECT_EQ(parse_graph(in), Graph::from_edge_list(3, {{0, 2}}));
}

TEST(GraphIo, FileRoundTrip) {
  std::mt19937_64 rng(3);
  const auto dir = std::filesystem::temp_directory_path() / "sentinel_graph_io_test";
  std::filesystem::create_directories(dir);
  for (int rep = 0; rep < 20; ++rep) {
    const Graph g = oracle::random_graph(rng, 1 + rep * 7, 0.2);
    const auto path = dir / ("g" + std::to_string(rep) + ".txt");
    write_graph(g, path);
    EXPECT_EQ(read_graph(path), g);
  }
  EXPECT_EQ(kind_of([&] { read_graph(dir / "missing.txt"); }), ErrorKind::IoError);
  std::filesystem::remove_all(dir);
}

TEST(GraphIo, FormatIsCanonical) {
  std::ostringstream out;
  format_graph(Graph::from_edge_list(3, {{1, 2}, {0, 1}}), out);
  EXPECT_EQ(out.str(), "3 2\n0 1\n1 2\n");
}

}  // namespace
}  // namespace sentinel
