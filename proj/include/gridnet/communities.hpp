#pragma once

#include "gridnet/error.hpp"
#include "gridnet/graph.hpp"
#include "gridnet/metrics.hpp"
#include "gridnet/random.hpp"

#include <cstdint>
#include <map>
#include <numeric>
#include <ostream>
#include <string>
#include <vector>

namespace gridnet {

struct CommunityAssignment
{
  std::vector<std::size_t> community; // per node index, ids 0..k-1 by first appearance
  double achieved_q = 0.0;
  std::string method;
  std::uint64_t seed = 0;

  std::size_t community_count() const
  {
    std::size_t k = 0;
    for (auto c : community)
      k = std::max(k, c + 1);
    return k;
  }
};

inline double modularity(const GraphSnapshot& g, const CommunityAssignment& a)
{
  return modularity(g, std::span<const std::size_t>(a.community));
}

namespace detail {

inline std::vector<std::size_t> canonical_labels(std::span<const std::size_t> raw)
{
  std::map<std::size_t, std::size_t> relabel;
  std::vector<std::size_t> out;
  out.reserve(raw.size());
  for (auto c : raw)
  {
    auto [it, inserted] = relabel.emplace(c, relabel.size());
    out.push_back(it->second);
  }
  return out;
}

/// One greedy agglomeration pass. `rank[c]` orders communities for
/// tie-breaking; a merge keeps the lower-ranked community.
///
/// With m2 = 2E, merging communities i and j changes Q by
///   2 (e_ij m2 - d_i d_j) / m2^2
/// where e_ij counts edges between them and d the degree sums. Only the
/// integer numerator is compared, so ties are detected exactly.
inline std::vector<std::size_t> greedy_merge(const GraphSnapshot& g,
                                             const std::vector<std::size_t>& rank)
{
  const std::size_t n = g.node_count();
  const auto m2 = static_cast<std::int64_t>(2 * g.edge_count());

  std::vector<std::int64_t> deg(n);
  std::vector<std::map<std::size_t, std::int64_t>> links(n);
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  for (NodeIndex i = 0; i < n; ++i)
  {
    deg[i] = static_cast<std::int64_t>(g.degree(i));
    for (NodeIndex j : g.neighbors(i))
      links[i][j] = 1;
  }

  while (true)
  {
    std::int64_t best_gain = 0;
    std::size_t best_keep = n;
    std::size_t best_drop = n;
    for (std::size_t c = 0; c < n; ++c)
    {
      for (const auto& [d, between] : links[c])
      {
        if (rank[c] > rank[d])
          continue;
        const std::int64_t gain = between * m2 - deg[c] * deg[d];
        if (gain <= 0)
          continue;
        const bool better =
          gain > best_gain ||
          (gain == best_gain && std::pair{rank[c], rank[d]} < std::pair{rank[best_keep], rank[best_drop]});
        if (better)
        {
          best_gain = gain;
          best_keep = c;
          best_drop = d;
        }
      }
    }
    if (best_keep == n)
      break;

    const std::size_t keep = best_keep;
    const std::size_t drop = best_drop;
    deg[keep] += deg[drop];
    deg[drop] = 0;
    for (const auto& [e, between] : links[drop])
    {
      links[e].erase(drop);
      if (e == keep)
        continue;
      links[keep][e] += between;
      links[e][keep] += between;
    }
    links[drop].clear();
    parent[drop] = keep;
  }

  std::vector<std::size_t> label(n);
  for (std::size_t i = 0; i < n; ++i)
  {
    std::size_t r = i;
    while (parent[r] != r)
      r = parent[r];
    label[i] = r;
  }
  return label;
}

} // namespace detail

/// Greedy agglomerative modularity maximisation: start from singletons and
/// repeatedly merge the pair with the largest positive gain. Ties go to the
/// lowest community id. Restart 0 uses node order; restarts beyond the first
/// use seeded random orderings, and the best Q found is kept.
inline CommunityAssignment detect_communities(const GraphSnapshot& g, std::uint64_t seed,
                                              std::size_t restarts = 1)
{
  if (g.edge_count() == 0)
    throw DomainError("detect_communities: graph has no edges");
  if (restarts == 0)
    restarts = 1;

  Rng rng(seed);
  std::vector<std::size_t> rank(g.node_count());
  std::iota(rank.begin(), rank.end(), std::size_t{0});

  CommunityAssignment best;
  best.method = "greedy-agglomerative";
  best.seed = seed;
  for (std::size_t r = 0; r < restarts; ++r)
  {
    if (r > 0)
      rng.shuffle(rank);
    auto labels = detail::canonical_labels(detail::greedy_merge(g, rank));
    const double q = modularity(g, std::span<const std::size_t>(labels));
    if (r == 0 || q > best.achieved_q)
    {
      best.community = std::move(labels);
      best.achieved_q = q;
    }
  }
  return best;
}

inline constexpr std::size_t kExhaustiveMaxNodes = 12;

/// Best partition by enumerating every set partition (restricted growth
/// strings). The first maximum in enumeration order wins, so the single
/// community is preferred on ties.
inline CommunityAssignment exhaustive_best_partition(const GraphSnapshot& g)
{
  const std::size_t n = g.node_count();
  if (n > kExhaustiveMaxNodes)
    throw DomainError("exhaustive_best_partition: refused for N = " + std::to_string(n) +
                      " (limit " + std::to_string(kExhaustiveMaxNodes) + ")");
  if (g.edge_count() == 0)
    throw DomainError("exhaustive_best_partition: graph has no edges");

  const auto m2 = static_cast<std::int64_t>(2 * g.edge_count());
  const auto edges = g.edge_pairs();
  std::vector<std::int64_t> deg(n);
  for (NodeIndex i = 0; i < n; ++i)
    deg[i] = static_cast<std::int64_t>(g.degree(i));

  std::vector<std::size_t> rgs(n, 0);
  std::vector<std::size_t> prefix_max(n, 0); // max label among rgs[0..i]
  std::vector<std::int64_t> internal(n), degsum(n);

  auto score = [&]() {
    std::size_t k = prefix_max[n - 1] + 1;
    std::fill_n(internal.begin(), k, 0);
    std::fill_n(degsum.begin(), k, 0);
    for (std::size_t i = 0; i < n; ++i)
      degsum[rgs[i]] += deg[i];
    for (const auto& [a, b] : edges)
      if (rgs[a] == rgs[b])
        ++internal[rgs[a]];
    std::int64_t num = 0;
    for (std::size_t c = 0; c < k; ++c)
      num += 2 * internal[c] * m2 - degsum[c] * degsum[c];
    return num;
  };

  std::vector<std::size_t> best_rgs = rgs;
  std::int64_t best_num = score();
  while (true)
  {
    // Next restricted growth string: bump the rightmost position that can grow.
    std::size_t i = n - 1;
    while (i > 0 && rgs[i] > prefix_max[i - 1])
      --i;
    if (i == 0)
      break;
    ++rgs[i];
    prefix_max[i] = std::max(prefix_max[i - 1], rgs[i]);
    for (std::size_t j = i + 1; j < n; ++j)
    {
      rgs[j] = 0;
      prefix_max[j] = prefix_max[i];
    }
    const auto num = score();
    if (num > best_num)
    {
      best_num = num;
      best_rgs = rgs;
    }
  }

  CommunityAssignment a;
  a.community = best_rgs;
  a.achieved_q = modularity(g, std::span<const std::size_t>(a.community));
  a.method = "exhaustive";
  return a;
}

/// node_id,community_id rows in node index order.
inline void write_assignment_csv(std::ostream& out, const GraphSnapshot& g,
                                 const CommunityAssignment& a)
{
  out << "node_id,community_id\n";
  for (NodeIndex i = 0; i < g.node_count(); ++i)
    out << csv::escape(g.id(i)) << ',' << a.community.at(i) << '\n';
}

} // namespace gridnet
