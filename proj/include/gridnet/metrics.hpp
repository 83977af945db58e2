#pragma once

#include "gridnet/csv.hpp"
#include "gridnet/error.hpp"
#include "gridnet/graph.hpp"

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace gridnet {

/// Euler-Mascheroni constant to four decimals, as used in the random-graph
/// path length estimate.
inline constexpr double kEulerGammaTruncated = 0.5772;

struct NodeLocalStats
{
  std::size_t degree = 0;
  std::size_t neighbor_edge_count = 0; // edges among the node's neighbours
  double local_clustering = 0.0;       // 0 when degree < 2
};

struct DegreeStats
{
  std::vector<std::size_t> degrees;
  double avg_degree = 0.0;
  std::vector<std::size_t> histogram; // histogram[k] = nodes with degree k
};

inline DegreeStats degree_stats(const GraphSnapshot& g)
{
  if (g.node_count() == 0)
    throw DomainError("degree_stats: no nodes");
  DegreeStats s;
  s.degrees.reserve(g.node_count());
  std::size_t max_k = 0;
  for (NodeIndex i = 0; i < g.node_count(); ++i)
  {
    s.degrees.push_back(g.degree(i));
    max_k = std::max(max_k, g.degree(i));
  }
  s.histogram.assign(max_k + 1, 0);
  for (auto k : s.degrees)
    ++s.histogram[k];
  s.avg_degree = 2.0 * static_cast<double>(g.edge_count()) / static_cast<double>(g.node_count());
  return s;
}

struct PathStats
{
  double avg_path_length = 0.0;
  int diameter = 0;
  std::size_t component_size = 0;
};

/// Mean hop distance over ordered pairs and the eccentricity maximum, both
/// restricted to the largest connected component.
inline PathStats largest_component_path_stats(const GraphSnapshot& g)
{
  const auto parts = connected_components(g);
  const std::size_t n = parts.largest.size();
  if (n < 2)
    throw DomainError("path length undefined: largest component has fewer than 2 nodes");

  std::uint64_t total = 0;
  int max_d = 0;
  for (NodeIndex s : parts.largest)
  {
    const auto dist = shortest_path_lengths(g, s);
    for (NodeIndex t : parts.largest)
    {
      total += static_cast<std::uint64_t>(dist[t]);
      max_d = std::max(max_d, dist[t]);
    }
  }
  PathStats ps;
  ps.avg_path_length = static_cast<double>(total) / (static_cast<double>(n) * static_cast<double>(n - 1));
  ps.diameter = max_d;
  ps.component_size = n;
  return ps;
}

inline double average_path_length(const GraphSnapshot& g)
{
  return largest_component_path_stats(g).avg_path_length;
}

inline int diameter(const GraphSnapshot& g)
{
  return largest_component_path_stats(g).diameter;
}

struct ClusteringResult
{
  double coefficient = 0.0;
  std::vector<NodeLocalStats> nodes;
};

/// Mean local clustering over all nodes; degree < 2 contributes 0.
inline ClusteringResult clustering_coefficient(const GraphSnapshot& g)
{
  if (g.node_count() == 0)
    throw DomainError("clustering_coefficient: no nodes");
  ClusteringResult r;
  r.nodes.resize(g.node_count());
  double sum = 0.0;
  for (NodeIndex i = 0; i < g.node_count(); ++i)
  {
    auto& st = r.nodes[i];
    const auto nb = g.neighbors(i);
    st.degree = nb.size();
    for (std::size_t a = 0; a < nb.size(); ++a)
    {
      // Sorted-list intersection of N(nb[a]) with the neighbours after it.
      const auto other = g.neighbors(nb[a]);
      auto p = nb.begin() + static_cast<std::ptrdiff_t>(a) + 1;
      auto q = std::lower_bound(other.begin(), other.end(), nb[a]);
      while (p != nb.end() && q != other.end())
      {
        if (*p < *q)
          ++p;
        else if (*q < *p)
          ++q;
        else
        {
          ++st.neighbor_edge_count;
          ++p;
          ++q;
        }
      }
    }
    if (st.degree >= 2)
    {
      st.local_clustering = 2.0 * static_cast<double>(st.neighbor_edge_count) /
                            (static_cast<double>(st.degree) * static_cast<double>(st.degree - 1));
    }
    sum += st.local_clustering;
  }
  r.coefficient = sum / static_cast<double>(g.node_count());
  return r;
}

struct RandomBaselines
{
  double path_length = 0.0; // L_r
  double clustering = 0.0;  // C_r
};

/// Expected path length and clustering of a same-size random graph.
inline RandomBaselines random_baselines(double n, double avg_degree)
{
  if (!(n >= 2.0))
    throw DomainError("random baseline undefined: N < 2");
  if (!(avg_degree > 1.0))
    throw DomainError("random baseline undefined: <k> <= 1");
  RandomBaselines rb;
  rb.path_length = (std::log(n) - kEulerGammaTruncated) / std::log(avg_degree) + 0.5;
  rb.clustering = avg_degree / n;
  return rb;
}

struct SmallWorld
{
  double sigma = 0.0;
  bool is_small_world = false;
};

inline SmallWorld small_world_sigma(double c, double c_rand, double l, double l_rand)
{
  if (!(c_rand > 0.0) || !(l_rand > 0.0) || !(l > 0.0))
    throw DomainError("small_world_sigma: C_r, L_r and L must be positive");
  if (!(c >= 0.0))
    throw DomainError("small_world_sigma: C must be non-negative");
  SmallWorld sw;
  sw.sigma = (c / c_rand) / (l / l_rand);
  sw.is_small_world = sw.sigma > 1.0;
  return sw;
}

/// Newman modularity of a labelling. Evaluated per community with exact
/// integer numerators, so a single community gives exactly 0.
inline double modularity(const GraphSnapshot& g, std::span<const std::size_t> labels)
{
  if (labels.size() != g.node_count())
    throw DomainError("modularity: assignment does not cover every node");
  if (g.edge_count() == 0)
    throw DomainError("modularity: graph has no edges");

  struct Tally
  {
    std::int64_t internal_edges = 0;
    std::int64_t degree_sum = 0;
  };
  std::map<std::size_t, Tally> per;
  for (NodeIndex i = 0; i < g.node_count(); ++i)
    per[labels[i]].degree_sum += static_cast<std::int64_t>(g.degree(i));
  for (const auto& [a, b] : g.edge_pairs())
    if (labels[a] == labels[b])
      ++per[labels[a]].internal_edges;

  const auto m2 = static_cast<std::int64_t>(2 * g.edge_count());
  std::int64_t numerator = 0;
  for (const auto& [c, t] : per)
    numerator += 2 * t.internal_edges * m2 - t.degree_sum * t.degree_sum;
  return static_cast<double>(numerator) / (static_cast<double>(m2) * static_cast<double>(m2));
}

/// One year's metric row. Absent optionals mean "undefined for this graph".
struct MetricsRecord
{
  Year year = 0;
  std::size_t nodes = 0;
  std::size_t edges = 0;
  std::optional<double> avg_degree;
  std::optional<int> diameter;
  std::optional<double> path_length;        // L
  std::optional<double> clustering;         // C
  std::optional<double> random_path_length; // L_r
  std::optional<double> random_clustering;  // C_r
  std::optional<double> sigma;
  std::optional<double> modularity;         // Q
  std::size_t component_count = 0;
  std::size_t largest_component_size = 0;
};

inline constexpr std::string_view kMetricsHeader =
  "year,N,E,avg_degree,diameter,L,C,L_r,C_r,sigma,Q,components,lcc_size";

inline constexpr std::string_view kAbsent = "NA";

inline std::string to_csv_row(const MetricsRecord& r)
{
  auto f = [](const std::optional<double>& v) {
    return v ? csv::format_g6(*v) : std::string(kAbsent);
  };
  std::string row;
  row += std::to_string(r.year) + ',';
  row += std::to_string(r.nodes) + ',';
  row += std::to_string(r.edges) + ',';
  row += f(r.avg_degree) + ',';
  row += (r.diameter ? std::to_string(*r.diameter) : std::string(kAbsent)) + ',';
  row += f(r.path_length) + ',';
  row += f(r.clustering) + ',';
  row += f(r.random_path_length) + ',';
  row += f(r.random_clustering) + ',';
  row += f(r.sigma) + ',';
  row += f(r.modularity) + ',';
  row += std::to_string(r.component_count) + ',';
  row += std::to_string(r.largest_component_size);
  return row;
}

/// Everything except Q, which needs a partition (see evolution).
inline MetricsRecord structural_metrics(const GraphSnapshot& g)
{
  MetricsRecord r;
  r.year = g.year();
  r.nodes = g.node_count();
  r.edges = g.edge_count();
  const auto parts = connected_components(g);
  r.component_count = parts.count();
  r.largest_component_size = parts.largest.size();
  if (r.nodes == 0)
    return r;

  r.avg_degree = degree_stats(g).avg_degree;
  r.clustering = clustering_coefficient(g).coefficient;
  if (r.largest_component_size >= 2)
  {
    const auto ps = largest_component_path_stats(g);
    r.path_length = ps.avg_path_length;
    r.diameter = ps.diameter;
  }
  if (r.nodes >= 2 && *r.avg_degree > 1.0)
  {
    const auto rb = random_baselines(static_cast<double>(r.nodes), *r.avg_degree);
    r.random_path_length = rb.path_length;
    r.random_clustering = rb.clustering;
    if (r.path_length && rb.path_length > 0.0)
      r.sigma = small_world_sigma(*r.clustering, rb.clustering, *r.path_length, rb.path_length).sigma;
  }
  return r;
}

} // namespace gridnet
