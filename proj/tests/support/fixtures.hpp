#pragma once

#include "gridnet/graph.hpp"
#include "gridnet/grid_log.hpp"

#include <fstream>
#include <sstream>
#include <string>

namespace testing_support {

inline std::string source_path(const std::string& rel)
{
  return std::string(GRIDNET_SOURCE_DIR) + "/" + rel;
}

inline gridnet::TemporalGridLog fixture_log()
{
  return gridnet::parse_log_files(source_path("data/fixture/nodes.csv"),
                                  source_path("data/fixture/edges.csv"));
}

inline gridnet::TemporalGridLog log_from_text(const std::string& nodes, const std::string& edges)
{
  std::istringstream n(nodes), e(edges);
  return gridnet::parse_log(n, e);
}

inline std::string read_file(const std::string& path)
{
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

inline gridnet::GraphSnapshot graph(std::size_t n,
                                    const std::vector<std::pair<gridnet::NodeIndex, gridnet::NodeIndex>>& e)
{
  return gridnet::GraphSnapshot::from_index_edges(n, e);
}

inline gridnet::GraphSnapshot complete(std::size_t n)
{
  std::vector<std::pair<gridnet::NodeIndex, gridnet::NodeIndex>> e;
  for (gridnet::NodeIndex i = 0; i < n; ++i)
    for (gridnet::NodeIndex j = i + 1; j < n; ++j)
      e.emplace_back(i, j);
  return graph(n, e);
}

inline gridnet::GraphSnapshot path(std::size_t n)
{
  std::vector<std::pair<gridnet::NodeIndex, gridnet::NodeIndex>> e;
  for (gridnet::NodeIndex i = 0; i + 1 < n; ++i)
    e.emplace_back(i, i + 1);
  return graph(n, e);
}

/// `count` disjoint cliques of `size` nodes, clique c on nodes c*size..
inline gridnet::GraphSnapshot disjoint_cliques(std::size_t count, std::size_t size)
{
  std::vector<std::pair<gridnet::NodeIndex, gridnet::NodeIndex>> e;
  for (std::size_t c = 0; c < count; ++c)
    for (std::size_t i = 0; i < size; ++i)
      for (std::size_t j = i + 1; j < size; ++j)
        e.emplace_back(static_cast<gridnet::NodeIndex>(c * size + i),
                       static_cast<gridnet::NodeIndex>(c * size + j));
  return graph(count * size, e);
}

} // namespace testing_support
