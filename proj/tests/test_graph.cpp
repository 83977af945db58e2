#include "gridnet/graph.hpp"

#include "fixtures.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <set>
#include <sstream>

using namespace gridnet;
using testing_support::graph;

TEST(GraphSnapshot, RejectsSelfLoopsAndParallelEdges)
{
  EXPECT_THROW(graph(3, {{0, 0}}), std::invalid_argument);
  EXPECT_THROW(graph(3, {{0, 1}, {1, 0}}), std::invalid_argument);
  EXPECT_THROW(graph(3, {{0, 3}}), std::out_of_range);
}

TEST(BuildSnapshot, MergedParallelCircuitCountsOnce)
{
  const auto log = testing_support::fixture_log();
  // E12 duplicates E11 from 1970; E stays 13 in 1969 and 1970.
  EXPECT_EQ(build_snapshot(log, 1969).edge_count(), 13u);
  EXPECT_EQ(build_snapshot(log, 1970).edge_count(), 13u);
}

TEST(BuildSnapshot, EmptyYear)
{
  const auto g = build_snapshot(testing_support::fixture_log(), 1900);
  EXPECT_EQ(g.node_count(), 0u);
  EXPECT_EQ(g.edge_count(), 0u);
  EXPECT_EQ(connected_components(g).count(), 0u);
}

TEST(BuildSnapshot, HandCountedYears)
{
  const auto log = testing_support::fixture_log();
  // 1975: N05 gone (1972), so 11 nodes. Edges E01 E02 E03 E05 E06 E07 E08
  // E09 E10 E11 E13 E14 E15 E16 = 14.
  const auto g = build_snapshot(log, 1975);
  EXPECT_EQ(g.node_count(), 11u);
  EXPECT_EQ(g.edge_count(), 14u);
  EXPECT_FALSE(g.index_of("N05"));
  // 1956: N11 is commissioned but its line only arrives in 1957.
  const auto g56 = build_snapshot(log, 1956);
  EXPECT_EQ(g56.node_count(), 7u);
  EXPECT_EQ(g56.edge_count(), 5u);
  EXPECT_EQ(g56.degree(*g56.index_of("N11")), 0u);
}

TEST(BuildSnapshot, SortedIdIndexingAndPurity)
{
  const auto log = testing_support::fixture_log();
  const auto a = build_snapshot(log, 1980);
  EXPECT_TRUE(std::is_sorted(a.ids().begin(), a.ids().end()));
  EXPECT_EQ(a, build_snapshot(log, 1980));
}

TEST(ShortestPaths, PathGraphFromEnd)
{
  EXPECT_EQ(shortest_path_lengths(testing_support::path(4), 0), (std::vector<int>{0, 1, 2, 3}));
}

TEST(ShortestPaths, UnreachableFlagged)
{
  const auto g = graph(6, {{0, 1}, {1, 2}, {3, 4}, {4, 5}});
  const auto d = shortest_path_lengths(g, 0);
  EXPECT_EQ(d[3], kUnreachable);
  EXPECT_EQ(d[5], kUnreachable);
  EXPECT_EQ(d[2], 2);
  EXPECT_THROW(shortest_path_lengths(g, 6), std::out_of_range);
}

TEST(ShortestPaths, MatchesFloydWarshallOnRandomGraphs)
{
  for (std::uint32_t seed = 0; seed < 100; ++seed)
  {
    const std::size_t n = 2 + seed % 49;
    const double p = 0.02 + 0.2 * ((seed * 37) % 10) / 10.0;
    const auto edges = oracle::random_edges(n, p, seed);
    const auto g = graph(n, edges);
    const auto fw = oracle::floyd_warshall(n, edges);
    for (NodeIndex s = 0; s < n; ++s)
    {
      const auto d = shortest_path_lengths(g, s);
      for (std::size_t t = 0; t < n; ++t)
      {
        const int expected = fw[s][t] == oracle::kInf ? kUnreachable : fw[s][t];
        ASSERT_EQ(d[t], expected) << "seed " << seed << " " << s << "->" << t;
      }
    }
  }
}

TEST(ConnectedComponents, DisjointTriangles)
{
  const auto p = connected_components(testing_support::disjoint_cliques(2, 3));
  ASSERT_EQ(p.count(), 2u);
  EXPECT_EQ(p.sizes, (std::vector<std::size_t>{3, 3}));
  EXPECT_EQ(p.largest, (std::vector<NodeIndex>{0, 1, 2}));
}

TEST(ConnectedComponents, LargestTieBrokenBySmallestId)
{
  // Ids sort "a" < "b" < ...; the component holding "a" sits at higher indices.
  const GraphSnapshot g(0, {"x", "y", "a", "b"}, {{0, 1}, {2, 3}});
  const auto p = connected_components(g);
  EXPECT_EQ(p.largest, (std::vector<NodeIndex>{2, 3}));
}

TEST(ConnectedComponents, MatchesUnionFind)
{
  for (std::uint32_t seed = 0; seed < 100; ++seed)
  {
    const std::size_t n = 1 + seed % 40;
    const auto edges = oracle::random_edges(n, 0.04, seed + 1000);
    const auto p = connected_components(graph(n, edges));
    const auto roots = oracle::union_find_roots(n, edges);
    std::set<std::size_t> distinct(roots.begin(), roots.end());
    ASSERT_EQ(p.count(), distinct.size());
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        ASSERT_EQ(p.component_of[i] == p.component_of[j], roots[i] == roots[j]);
  }
}

TEST(GraphProperties, DegreeSumAndDistanceBound)
{
  for (std::uint32_t seed = 0; seed < 50; ++seed)
  {
    const std::size_t n = 1 + seed % 30;
    const auto g = graph(n, oracle::random_edges(n, 0.15, seed + 77));
    std::size_t sum = 0;
    for (NodeIndex i = 0; i < n; ++i)
    {
      sum += g.degree(i);
      for (int d : shortest_path_lengths(g, i))
        EXPECT_LE(d, static_cast<int>(n) - 1);
    }
    EXPECT_EQ(sum, 2 * g.edge_count());
    for (const auto& [a, b] : g.edge_pairs())
      EXPECT_TRUE(g.has_edge(b, a));
  }
}

TEST(GraphProperties, TriangleInequality)
{
  for (std::uint32_t seed = 0; seed < 30; ++seed)
  {
    const std::size_t n = 4 + seed % 17; // n <= 20
    const auto g = graph(n, oracle::random_edges(n, 0.2, seed + 500));
    std::vector<std::vector<int>> d;
    for (NodeIndex i = 0; i < n; ++i)
      d.push_back(shortest_path_lengths(g, i));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k)
          if (d[i][j] != kUnreachable && d[j][k] != kUnreachable)
          {
            ASSERT_LE(d[i][k], d[i][j] + d[j][k]);
          }
  }
}

TEST(EdgeList, SortedExportAndReadBack)
{
  const GraphSnapshot g(0, {"b", "a", "c"}, {{0, 2}, {1, 0}});
  std::ostringstream out;
  write_edge_list(out, g);
  EXPECT_EQ(out.str(), "a b\nb c\n");
  std::istringstream in(out.str());
  const auto back = read_edge_list(in);
  EXPECT_EQ(back.ids(), (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_EQ(back.edge_count(), 2u);
  EXPECT_TRUE(back.has_edge(0, 1));
}
