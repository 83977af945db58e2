#include "gridnet/communities.hpp"

#include "fixtures.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <set>
#include <sstream>

using namespace gridnet;
using testing_support::complete;
using testing_support::disjoint_cliques;
using testing_support::graph;

TEST(DetectCommunities, TwoTrianglesRecovered)
{
  const auto a = detect_communities(disjoint_cliques(2, 3), 42);
  EXPECT_EQ(a.community, (std::vector<std::size_t>{0, 0, 0, 1, 1, 1}));
  EXPECT_EQ(a.achieved_q, 0.5);
  EXPECT_EQ(a.seed, 42u);
}

TEST(DetectCommunities, CliqueStaysWhole)
{
  const auto a = detect_communities(complete(5), 1);
  EXPECT_EQ(a.community_count(), 1u);
  EXPECT_EQ(a.achieved_q, 0.0);
}

TEST(DetectCommunities, EmptyGraphRejected)
{
  EXPECT_THROW(detect_communities(graph(4, {}), 1), DomainError);
  EXPECT_THROW(detect_communities(GraphSnapshot{}, 1), DomainError);
}

TEST(DetectCommunities, AchievedQMatchesModularity)
{
  for (std::uint32_t seed = 0; seed < 40; ++seed)
  {
    const std::size_t n = 4 + seed % 40;
    auto edges = oracle::random_edges(n, 0.15, seed);
    if (edges.empty())
      edges.emplace_back(0, 1);
    const auto g = graph(n, edges);
    const auto a = detect_communities(g, seed, 1 + seed % 3);
    EXPECT_EQ(a.achieved_q, modularity(g, a));
    EXPECT_EQ(a.community.size(), n);
    EXPECT_GE(a.achieved_q, 0.0);
  }
}

TEST(DetectCommunities, Deterministic)
{
  const auto g = graph(30, oracle::random_edges(30, 0.12, 9));
  for (std::size_t restarts : {1u, 4u})
  {
    const auto a = detect_communities(g, 123, restarts);
    const auto b = detect_communities(g, 123, restarts);
    EXPECT_EQ(a.community, b.community);
    EXPECT_EQ(a.achieved_q, b.achieved_q);
  }
}

TEST(DetectCommunities, RestartsNeverWorse)
{
  for (std::uint32_t seed = 0; seed < 20; ++seed)
  {
    const auto g = graph(25, oracle::random_edges(25, 0.15, seed + 70));
    if (g.edge_count() == 0)
      continue;
    EXPECT_GE(detect_communities(g, seed, 5).achieved_q, detect_communities(g, seed, 1).achieved_q);
  }
}

TEST(DetectCommunities, EqualCliquesRecovered)
{
  for (std::size_t count = 2; count <= 4; ++count)
    for (std::size_t size = 3; size <= 5; ++size)
    {
      const auto g = disjoint_cliques(count, size);
      const auto a = detect_communities(g, 42);
      ASSERT_EQ(a.community_count(), count) << count << "x" << size;
      for (NodeIndex i = 0; i < g.node_count(); ++i)
        EXPECT_EQ(a.community[i], i / size);
    }
}

TEST(DetectCommunities, NeverAboveExhaustiveMaximum)
{
  for (std::uint32_t seed = 0; seed < 120; ++seed)
  {
    const std::size_t n = 2 + seed % 7; // n <= 8
    auto edges = oracle::random_edges(n, 0.45, seed + 11);
    if (edges.empty())
      edges.emplace_back(0, 1);
    const auto g = graph(n, edges);
    const double best = oracle::best_modularity(oracle::adjacency(n, edges));
    EXPECT_LE(detect_communities(g, seed).achieved_q, best + 1e-12);
  }
}

TEST(ExhaustivePartition, SmallCases)
{
  const auto two = exhaustive_best_partition(disjoint_cliques(2, 3));
  EXPECT_EQ(two.achieved_q, 0.5);
  EXPECT_EQ(two.community, (std::vector<std::size_t>{0, 0, 0, 1, 1, 1}));

  // K2: single community 0 beats the split at -0.5.
  const auto k2 = exhaustive_best_partition(complete(2));
  EXPECT_EQ(k2.achieved_q, 0.0);
  EXPECT_EQ(k2.community_count(), 1u);
  EXPECT_EQ(modularity(complete(2), std::vector<std::size_t>{0, 1}), -0.5);

  const auto k3 = exhaustive_best_partition(complete(3));
  EXPECT_EQ(k3.community_count(), 1u);
}

TEST(ExhaustivePartition, MatchesRecursiveOracle)
{
  for (std::uint32_t seed = 0; seed < 40; ++seed)
  {
    const std::size_t n = 2 + seed % 7;
    auto edges = oracle::random_edges(n, 0.4, seed + 900);
    if (edges.empty())
      edges.emplace_back(0, 1);
    const auto a = exhaustive_best_partition(graph(n, edges));
    EXPECT_NEAR(a.achieved_q, oracle::best_modularity(oracle::adjacency(n, edges)), 1e-12);
  }
}

TEST(ExhaustivePartition, GuardAboveTwelveNodes)
{
  EXPECT_THROW(exhaustive_best_partition(testing_support::path(13)), DomainError);
  EXPECT_NO_THROW(exhaustive_best_partition(testing_support::path(12)));
}

TEST(Assignment, CsvExport)
{
  const GraphSnapshot g(0, {"a", "b", "c", "d"}, {{0, 1}, {2, 3}});
  const auto a = detect_communities(g, 42);
  std::ostringstream out;
  write_assignment_csv(out, g, a);
  EXPECT_EQ(out.str(), "node_id,community_id\na,0\nb,0\nc,1\nd,1\n");
}
