#pragma once

#include "gridnet/error.hpp"
#include "gridnet/graph.hpp"
#include "gridnet/random.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace gridnet {

enum class GeneratorKind
{
  erdos_renyi,
  watts_strogatz,
  barabasi_albert
};

inline std::string_view to_string(GeneratorKind k)
{
  switch (k)
  {
  case GeneratorKind::erdos_renyi: return "erdos_renyi";
  case GeneratorKind::watts_strogatz: return "watts_strogatz";
  case GeneratorKind::barabasi_albert: return "barabasi_albert";
  }
  return "erdos_renyi";
}

inline std::optional<GeneratorKind> parse_generator_kind(std::string_view s)
{
  if (s == "erdos_renyi" || s == "er")
    return GeneratorKind::erdos_renyi;
  if (s == "watts_strogatz" || s == "ws")
    return GeneratorKind::watts_strogatz;
  if (s == "barabasi_albert" || s == "ba")
    return GeneratorKind::barabasi_albert;
  return std::nullopt;
}

struct GeneratorSpec
{
  GeneratorKind kind = GeneratorKind::erdos_renyi;
  std::size_t n = 0;
  double p = 0.0;      // erdos_renyi, watts_strogatz
  std::size_t k = 0;   // watts_strogatz ring degree
  std::size_t m = 0;   // barabasi_albert attachments
  std::uint64_t seed = 42;

  void validate() const
  {
    if (n < 3)
      throw DomainError("generator: n must be at least 3");
    switch (kind)
    {
    case GeneratorKind::erdos_renyi:
      if (!(p >= 0.0 && p <= 1.0))
        throw DomainError("generator: p must lie in [0, 1]");
      break;
    case GeneratorKind::watts_strogatz:
      if (!(p >= 0.0 && p <= 1.0))
        throw DomainError("generator: p must lie in [0, 1]");
      if (k == 0 || k % 2 != 0 || k >= n)
        throw DomainError("generator: k must be even, positive and below n");
      break;
    case GeneratorKind::barabasi_albert:
      if (m < 1 || m >= n)
        throw DomainError("generator: m must satisfy 1 <= m < n");
      break;
    }
  }
};

using EdgeList = std::vector<std::pair<NodeIndex, NodeIndex>>;

inline GraphSnapshot erdos_renyi(std::size_t n, double p, std::uint64_t seed)
{
  GeneratorSpec{GeneratorKind::erdos_renyi, n, p, 0, 0, seed}.validate();
  Rng rng(seed);
  EdgeList edges;
  for (NodeIndex i = 0; i < n; ++i)
    for (NodeIndex j = i + 1; j < n; ++j)
      if (rng.bernoulli(p))
        edges.emplace_back(i, j);
  return GraphSnapshot::from_index_edges(n, edges);
}

struct WattsStrogatzGraph
{
  GraphSnapshot graph;
  std::size_t skipped_rewires = 0; // edges left in place for lack of a target
};

/// Ring lattice (each node tied to its k/2 clockwise neighbours), then each
/// lattice edge (i, i+j) is rewired with probability p to (i, w), w drawn
/// uniformly among nodes that are neither i nor already adjacent to i.
/// Edges are visited lap by lap (j = 1..k/2, then i = 0..n-1).
inline WattsStrogatzGraph watts_strogatz_detailed(std::size_t n, std::size_t k, double p,
                                                  std::uint64_t seed)
{
  GeneratorSpec{GeneratorKind::watts_strogatz, n, p, k, 0, seed}.validate();
  Rng rng(seed);
  std::vector<std::set<NodeIndex>> adj(n);
  for (NodeIndex i = 0; i < n; ++i)
    for (std::size_t j = 1; j <= k / 2; ++j)
    {
      const auto t = static_cast<NodeIndex>((i + j) % n);
      adj[i].insert(t);
      adj[t].insert(i);
    }

  constexpr int kMaxTries = 64;
  std::size_t skipped = 0;
  for (std::size_t j = 1; j <= k / 2; ++j)
  {
    for (NodeIndex i = 0; i < n; ++i)
    {
      const auto t = static_cast<NodeIndex>((i + j) % n);
      if (!rng.bernoulli(p))
        continue;
      // The lattice edge may already have been rewired away from t's side.
      if (!adj[i].count(t))
        continue;
      if (adj[i].size() + 1 >= n)
      {
        ++skipped;
        continue;
      }
      std::optional<NodeIndex> target;
      for (int attempt = 0; attempt < kMaxTries && !target; ++attempt)
      {
        const auto w = static_cast<NodeIndex>(rng.below(n));
        if (w != i && !adj[i].count(w))
          target = w;
      }
      if (!target)
      {
        ++skipped;
        continue;
      }
      adj[i].erase(t);
      adj[t].erase(i);
      adj[i].insert(*target);
      adj[*target].insert(i);
    }
  }

  EdgeList edges;
  for (NodeIndex i = 0; i < n; ++i)
    for (NodeIndex t : adj[i])
      if (i < t)
        edges.emplace_back(i, t);
  return {GraphSnapshot::from_index_edges(n, edges), skipped};
}

inline GraphSnapshot watts_strogatz(std::size_t n, std::size_t k, double p, std::uint64_t seed)
{
  return watts_strogatz_detailed(n, k, p, seed).graph;
}

/// Preferential attachment from a complete seed graph on m+1 nodes. Each new
/// node draws m distinct targets with probability proportional to degree.
inline GraphSnapshot barabasi_albert(std::size_t n, std::size_t m, std::uint64_t seed)
{
  GeneratorSpec{GeneratorKind::barabasi_albert, n, 0.0, 0, m, seed}.validate();
  Rng rng(seed);
  EdgeList edges;
  // Every edge endpoint appears once, so a uniform pick is degree-proportional.
  std::vector<NodeIndex> endpoints;
  endpoints.reserve(2 * (m * (m + 1) / 2 + m * (n - m - 1)));
  for (NodeIndex i = 0; i <= m; ++i)
    for (NodeIndex j = i + 1; j <= m; ++j)
    {
      edges.emplace_back(i, j);
      endpoints.push_back(i);
      endpoints.push_back(j);
    }

  std::vector<NodeIndex> chosen;
  for (auto v = static_cast<NodeIndex>(m + 1); v < n; ++v)
  {
    chosen.clear();
    while (chosen.size() < m)
    {
      const NodeIndex t = endpoints[rng.below(endpoints.size())];
      if (std::find(chosen.begin(), chosen.end(), t) == chosen.end())
        chosen.push_back(t);
    }
    for (NodeIndex t : chosen)
    {
      edges.emplace_back(t, v);
      endpoints.push_back(t);
      endpoints.push_back(v);
    }
  }
  return GraphSnapshot::from_index_edges(n, edges);
}

inline GraphSnapshot generate(const GeneratorSpec& spec)
{
  switch (spec.kind)
  {
  case GeneratorKind::erdos_renyi: return erdos_renyi(spec.n, spec.p, spec.seed);
  case GeneratorKind::watts_strogatz: return watts_strogatz(spec.n, spec.k, spec.p, spec.seed);
  case GeneratorKind::barabasi_albert: return barabasi_albert(spec.n, spec.m, spec.seed);
  }
  throw DomainError("generator: unknown kind");
}

} // namespace gridnet
