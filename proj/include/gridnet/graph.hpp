#pragma once

#include "gridnet/error.hpp"
#include "gridnet/grid_log.hpp"

#include <algorithm>
#include <cstdint>
#include <istream>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace gridnet {

using NodeIndex = std::uint32_t;

/// Marks a node that BFS could not reach. Never a valid hop count.
inline constexpr int kUnreachable = -1;

/// Immutable simple undirected graph for one year, stored as sorted
/// adjacency lists (CSR). Node indices are contiguous; ids map 1:1.
class GraphSnapshot
{
public:
  GraphSnapshot() = default;

  /// Builds from index pairs. Rejects self-loops, parallel edges and
  /// out-of-range indices. Node order follows `ids`.
  GraphSnapshot(Year year, std::vector<std::string> ids,
                const std::vector<std::pair<NodeIndex, NodeIndex>>& edges)
    : year_(year)
    , ids_(std::move(ids))
  {
    const std::size_t n = ids_.size();
    std::vector<std::vector<NodeIndex>> adj(n);
    for (const auto& [a, b] : edges)
    {
      if (a >= n || b >= n)
        throw std::out_of_range("GraphSnapshot: edge endpoint out of range");
      if (a == b)
        throw std::invalid_argument("GraphSnapshot: self-loop on " + ids_[a]);
      adj[a].push_back(b);
      adj[b].push_back(a);
    }
    offsets_.assign(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i)
    {
      auto& row = adj[i];
      std::sort(row.begin(), row.end());
      if (std::adjacent_find(row.begin(), row.end()) != row.end())
        throw std::invalid_argument("GraphSnapshot: parallel edge at " + ids_[i]);
      offsets_[i + 1] = offsets_[i] + row.size();
      targets_.insert(targets_.end(), row.begin(), row.end());
    }
    for (std::size_t i = 0; i < n; ++i)
      index_.emplace(ids_[i], static_cast<NodeIndex>(i));
    if (index_.size() != n)
      throw std::invalid_argument("GraphSnapshot: duplicate node id");
  }

  /// Graph on nodes "0".."n-1" in index order.
  static GraphSnapshot from_index_edges(std::size_t n,
                                        const std::vector<std::pair<NodeIndex, NodeIndex>>& edges,
                                        Year year = 0)
  {
    std::vector<std::string> ids(n);
    for (std::size_t i = 0; i < n; ++i)
      ids[i] = std::to_string(i);
    return GraphSnapshot(year, std::move(ids), edges);
  }

  Year year() const noexcept { return year_; }
  std::size_t node_count() const noexcept { return ids_.size(); }
  std::size_t edge_count() const noexcept { return targets_.size() / 2; }

  std::size_t degree(NodeIndex i) const { return offsets_[i + 1] - offsets_[i]; }

  std::span<const NodeIndex> neighbors(NodeIndex i) const
  {
    return {targets_.data() + offsets_[i], targets_.data() + offsets_[i + 1]};
  }

  bool has_edge(NodeIndex i, NodeIndex j) const
  {
    const auto row = neighbors(i);
    return std::binary_search(row.begin(), row.end(), j);
  }

  const std::string& id(NodeIndex i) const { return ids_.at(i); }
  const std::vector<std::string>& ids() const noexcept { return ids_; }

  std::optional<NodeIndex> index_of(const std::string& id) const
  {
    const auto it = index_.find(id);
    if (it == index_.end())
      return std::nullopt;
    return it->second;
  }

  /// Each undirected edge once, as (i, j) with i < j, in index order.
  std::vector<std::pair<NodeIndex, NodeIndex>> edge_pairs() const
  {
    std::vector<std::pair<NodeIndex, NodeIndex>> out;
    out.reserve(edge_count());
    for (NodeIndex i = 0; i < node_count(); ++i)
      for (NodeIndex j : neighbors(i))
        if (i < j)
          out.emplace_back(i, j);
    return out;
  }

  bool operator==(const GraphSnapshot& o) const
  {
    return year_ == o.year_ && ids_ == o.ids_ && offsets_ == o.offsets_ && targets_ == o.targets_;
  }

private:
  Year year_ = 0;
  std::vector<std::string> ids_;
  std::vector<std::size_t> offsets_{0};
  std::vector<NodeIndex> targets_;
  std::map<std::string, NodeIndex> index_;
};

/// Snapshot of the elements in service in `year`, nodes indexed by sorted id.
inline GraphSnapshot build_snapshot(const TemporalGridLog& log, Year year)
{
  const auto active = active_elements(log, year);
  std::map<std::string, NodeIndex> index;
  for (std::size_t i = 0; i < active.nodes.size(); ++i)
    index.emplace(active.nodes[i], static_cast<NodeIndex>(i));

  std::vector<std::pair<NodeIndex, NodeIndex>> edges;
  edges.reserve(active.edges.size());
  for (const auto& e : log.edges())
  {
    if (!log.edge_active_in(e, year))
      continue;
    edges.emplace_back(index.at(e.node_a), index.at(e.node_b));
  }
  return GraphSnapshot(year, active.nodes, edges);
}

/// BFS hop counts from `source`; kUnreachable for other components.
inline std::vector<int> shortest_path_lengths(const GraphSnapshot& g, NodeIndex source)
{
  if (source >= g.node_count())
    throw std::out_of_range("shortest_path_lengths: invalid source index " +
                            std::to_string(source));
  std::vector<int> dist(g.node_count(), kUnreachable);
  std::vector<NodeIndex> queue;
  queue.reserve(g.node_count());
  dist[source] = 0;
  queue.push_back(source);
  for (std::size_t head = 0; head < queue.size(); ++head)
  {
    const NodeIndex u = queue[head];
    for (NodeIndex v : g.neighbors(u))
    {
      if (dist[v] == kUnreachable)
      {
        dist[v] = dist[u] + 1;
        queue.push_back(v);
      }
    }
  }
  return dist;
}

struct ComponentPartition
{
  std::vector<std::size_t> component_of; // per node
  std::vector<std::size_t> sizes;        // per component
  std::vector<NodeIndex> largest;        // sorted node indices; empty for N = 0

  std::size_t count() const noexcept { return sizes.size(); }
};

/// Components numbered in order of their smallest node index. The largest
/// component wins ties by smallest contained node id.
inline ComponentPartition connected_components(const GraphSnapshot& g)
{
  constexpr auto kUnset = static_cast<std::size_t>(-1);
  ComponentPartition p;
  p.component_of.assign(g.node_count(), kUnset);
  std::vector<NodeIndex> stack;
  for (NodeIndex s = 0; s < g.node_count(); ++s)
  {
    if (p.component_of[s] != kUnset)
      continue;
    const std::size_t c = p.sizes.size();
    p.sizes.push_back(0);
    p.component_of[s] = c;
    stack.push_back(s);
    while (!stack.empty())
    {
      const NodeIndex u = stack.back();
      stack.pop_back();
      ++p.sizes[c];
      for (NodeIndex v : g.neighbors(u))
      {
        if (p.component_of[v] == kUnset)
        {
          p.component_of[v] = c;
          stack.push_back(v);
        }
      }
    }
  }
  if (p.sizes.empty())
    return p;

  // Smallest id per component for tie-breaking.
  std::vector<const std::string*> min_id(p.sizes.size(), nullptr);
  for (NodeIndex i = 0; i < g.node_count(); ++i)
  {
    auto& m = min_id[p.component_of[i]];
    if (!m || g.id(i) < *m)
      m = &g.id(i);
  }
  std::size_t best = 0;
  for (std::size_t c = 1; c < p.sizes.size(); ++c)
  {
    if (p.sizes[c] > p.sizes[best] || (p.sizes[c] == p.sizes[best] && *min_id[c] < *min_id[best]))
      best = c;
  }
  for (NodeIndex i = 0; i < g.node_count(); ++i)
    if (p.component_of[i] == best)
      p.largest.push_back(i);
  return p;
}

/// Induced subgraph on `nodes` (kept in the given order).
inline GraphSnapshot induced_subgraph(const GraphSnapshot& g, std::span<const NodeIndex> nodes)
{
  std::vector<std::int64_t> remap(g.node_count(), -1);
  std::vector<std::string> ids;
  ids.reserve(nodes.size());
  for (std::size_t k = 0; k < nodes.size(); ++k)
  {
    remap[nodes[k]] = static_cast<std::int64_t>(k);
    ids.push_back(g.id(nodes[k]));
  }
  std::vector<std::pair<NodeIndex, NodeIndex>> edges;
  for (const auto& [a, b] : g.edge_pairs())
    if (remap[a] >= 0 && remap[b] >= 0)
      edges.emplace_back(static_cast<NodeIndex>(remap[a]), static_cast<NodeIndex>(remap[b]));
  return GraphSnapshot(g.year(), std::move(ids), edges);
}

/// Debug edge list: one "id_a id_b" per line (id_a < id_b), lines sorted.
inline void write_edge_list(std::ostream& out, const GraphSnapshot& g)
{
  std::vector<std::pair<std::string, std::string>> lines;
  lines.reserve(g.edge_count());
  for (const auto& [a, b] : g.edge_pairs())
  {
    auto p = std::minmax(g.id(a), g.id(b));
    lines.emplace_back(p.first, p.second);
  }
  std::sort(lines.begin(), lines.end());
  for (const auto& [a, b] : lines)
    out << a << ' ' << b << '\n';
}

/// Reads the edge-list format back. Nodes are indexed by sorted id;
/// isolated nodes are not representable.
inline GraphSnapshot read_edge_list(std::istream& in, Year year = 0)
{
  std::vector<std::pair<std::string, std::string>> raw;
  std::map<std::string, NodeIndex> index;
  std::string a, b;
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line))
  {
    ++row;
    if (csv::trim(line).empty())
      continue;
    std::istringstream ls(line);
    if (!(ls >> a >> b))
      throw ParseError("edge list: expected two ids", row);
    raw.emplace_back(a, b);
    index.emplace(a, 0);
    index.emplace(b, 0);
  }
  std::vector<std::string> ids;
  for (auto& [id, idx] : index)
  {
    idx = static_cast<NodeIndex>(ids.size());
    ids.push_back(id);
  }
  std::vector<std::pair<NodeIndex, NodeIndex>> edges;
  edges.reserve(raw.size());
  for (const auto& [x, y] : raw)
    edges.emplace_back(index.at(x), index.at(y));
  return GraphSnapshot(year, std::move(ids), edges);
}

} // namespace gridnet
