#include <algorithm>
#include <numeric>
#include <set>

#include <gtest/gtest.h>

#include "tbcavi/errors.hpp"
#include "tbcavi/graph.hpp"

namespace tbcavi {
namespace {

Graph path3() {
  const std::vector<Edge> e{{0, 1}, {1, 2}};
  return Graph::from_edges(3, e);
}

TEST(EdgeList, ParsesPlainPairs) {
  const auto r = load_edge_list("0 1\n1 2");
  EXPECT_EQ(r.graph.num_nodes(), 3u);
  EXPECT_EQ(r.graph.edges(), (std::vector<Edge>{{0, 1}, {1, 2}}));
  EXPECT_EQ(r.dropped(), 0u);
}

TEST(EdgeList, DropsSelfLoopsAndDuplicates) {
  const auto r = load_edge_list("0 0\n0 1\n1 0");
  EXPECT_EQ(r.graph.num_nodes(), 2u);
  EXPECT_EQ(r.graph.edges(), (std::vector<Edge>{{0, 1}}));
  EXPECT_EQ(r.self_loops_dropped, 1u);
  EXPECT_EQ(r.duplicates_dropped, 1u);
  EXPECT_EQ(r.dropped(), 2u);
}

TEST(EdgeList, MalformedTokenReportsLine) {
  try {
    load_edge_list("0 x");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 1u);
  }
  try {
    load_edge_list("# c\n0 1\n2\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  EXPECT_THROW(load_edge_list("0 -1"), ParseError);
  EXPECT_THROW(load_edge_list("0 1.5"), ParseError);
}

TEST(EdgeList, CommentsAndNodeDirective) {
  const auto r = load_edge_list("# nodes 6\n# a comment\n0 1\n\n   \n2 3\n");
  EXPECT_EQ(r.graph.num_nodes(), 6u);
  EXPECT_EQ(r.graph.num_edges(), 2u);
}

TEST(EdgeList, RemapModeKeepsOriginalIds) {
  const auto r = load_edge_list("10 30\n30 20\n", IdMapping::remap);
  EXPECT_EQ(r.graph.num_nodes(), 3u);
  EXPECT_EQ(r.original_ids, (std::vector<std::int64_t>{10, 20, 30}));
  EXPECT_TRUE(r.graph.has_edge(0, 2));
  EXPECT_TRUE(r.graph.has_edge(1, 2));
  EXPECT_FALSE(r.graph.has_edge(0, 1));
}

TEST(EdgeList, RoundTripOnRandomGraphs) {
  Rng rng(7);
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t n = 1 + rng.uniform_index(40);
    std::vector<Edge> e;
    for (int k = 0; k < 60; ++k) {
      e.push_back({static_cast<NodeId>(rng.uniform_index(n)), static_cast<NodeId>(rng.uniform_index(n))});
    }
    const Graph g = Graph::from_edges(n, e);
    const auto back = load_edge_list(serialize_edge_list(g));
    EXPECT_EQ(back.graph, g);
    EXPECT_EQ(back.dropped(), 0u);
  }
}

TEST(Graph, RejectsOutOfRangeIds) {
  const std::vector<Edge> e{{0, 3}};
  EXPECT_THROW(Graph::from_edges(3, e), DomainError);
}

TEST(Graph, NeighborsSorted) {
  const std::vector<Edge> e{{2, 0}, {2, 4}, {1, 2}, {3, 2}};
  const Graph g = Graph::from_edges(5, e);
  const auto nb = g.neighbors(2);
  EXPECT_EQ(std::vector<NodeId>(nb.begin(), nb.end()), (std::vector<NodeId>{0, 1, 3, 4}));
  EXPECT_EQ(g.degree(2), 4u);
  EXPECT_TRUE(g.has_edge(4, 2));
}

TEST(DegreeStats, PathAndEmpty) {
  const DegreeStats s = degree_stats(path3());
  EXPECT_EQ(s.degrees, (std::vector<std::size_t>{1, 2, 1}));
  EXPECT_DOUBLE_EQ(s.avg, 4.0 / 3.0);
  EXPECT_EQ(s.min, 1u);
  EXPECT_EQ(s.max, 2u);

  const DegreeStats z = degree_stats(Graph(3));
  EXPECT_EQ(z.degrees, (std::vector<std::size_t>{0, 0, 0}));
  EXPECT_EQ(z.avg, 0.0);
}

TEST(DegreeStats, DegreeSumIsTwiceEdges) {
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + rng.uniform_index(30);
    std::vector<Edge> e;
    for (int k = 0; k < 50; ++k) {
      e.push_back({static_cast<NodeId>(rng.uniform_index(n)), static_cast<NodeId>(rng.uniform_index(n))});
    }
    const Graph g = Graph::from_edges(n, e);
    const auto s = degree_stats(g);
    EXPECT_EQ(std::accumulate(s.degrees.begin(), s.degrees.end(), std::size_t{0}), 2 * g.num_edges());
  }
}

Graph complete(std::size_t n) {
  std::vector<Edge> e;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) e.push_back({static_cast<NodeId>(i), static_cast<NodeId>(j)});
  return Graph::from_edges(n, e);
}

TEST(SplitEdges, Boundaries) {
  const Graph g = complete(6);
  Rng rng(1);
  auto [a0, b0] = split_edges(g, 0.0, rng);
  EXPECT_EQ(a0.num_edges(), 0u);
  EXPECT_EQ(b0, g);
  auto [a1, b1] = split_edges(g, 1.0, rng);
  EXPECT_EQ(a1, g);
  EXPECT_EQ(b1.num_edges(), 0u);
  EXPECT_THROW(split_edges(g, 1.5, rng), DomainError);
}

TEST(SplitEdges, PartitionForEverySeedAndTau) {
  const Graph g = complete(7);
  const auto all = g.edges();
  for (double tau : {0.0, 0.1, 0.5, 0.9, 1.0}) {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
      Rng rng(seed);
      auto [a, b] = split_edges(g, tau, rng);
      ASSERT_EQ(a.num_nodes(), g.num_nodes());
      ASSERT_EQ(b.num_nodes(), g.num_nodes());
      std::vector<Edge> merged = a.edges();
      const auto be = b.edges();
      merged.insert(merged.end(), be.begin(), be.end());
      std::sort(merged.begin(), merged.end());
      EXPECT_EQ(merged, all);  // disjoint and covering
    }
  }
}

TEST(SplitEdges, HalfSplitOfTenThousandEdges) {
  // 10000 edges on 200 nodes.
  std::vector<Edge> e;
  for (NodeId i = 0; i < 200 && e.size() < 10000; ++i)
    for (NodeId j = i + 1; j < 200 && e.size() < 10000; ++j) e.push_back({i, j});
  const Graph g = Graph::from_edges(200, e);
  ASSERT_EQ(g.num_edges(), 10000u);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng(seed);
    auto [a, b] = split_edges(g, 0.5, rng);
    EXPECT_GE(a.num_edges(), 4700u);
    EXPECT_LE(a.num_edges(), 5300u);
  }
}

TEST(LargestComponent, PicksBiggestAndMapsIds) {
  const std::vector<Edge> e{{0, 1}, {2, 3}, {3, 4}, {4, 2}, {5, 6}};
  const Graph g = Graph::from_edges(8, e);
  const Subgraph s = largest_connected_component(g);
  EXPECT_EQ(s.graph.num_nodes(), 3u);
  EXPECT_EQ(s.graph.num_edges(), 3u);
  EXPECT_EQ(s.parent_ids, (std::vector<NodeId>{2, 3, 4}));
}

TEST(PermuteNodes, PreservesEdgeSet) {
  const Graph g = path3();
  const std::vector<NodeId> perm{2, 0, 1};
  const Graph h = permute_nodes(g, perm);
  EXPECT_TRUE(h.has_edge(2, 0));
  EXPECT_TRUE(h.has_edge(0, 1));
  EXPECT_EQ(h.num_edges(), 2u);
}

TEST(Labels, ParseAndErrors) {
  const auto l = load_labels("# id label\n3 1\n0 0\n");
  ASSERT_EQ(l.size(), 2u);
  EXPECT_EQ(l[0].id, 3);
  EXPECT_EQ(l[0].label, 1);
  EXPECT_THROW(load_labels("1 -2"), ParseError);
  EXPECT_THROW(load_labels("1"), ParseError);
}

}  // namespace
}  // namespace tbcavi
