#pragma once

#include "gridnet/csv.hpp"
#include "gridnet/error.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace gridnet {

using Year = int;

/// Half-open service interval [commissioned, decommissioned).
struct Lifetime
{
  Year commissioned = 0;
  std::optional<Year> decommissioned;

  bool active_in(Year y) const noexcept
  {
    return commissioned <= y && (!decommissioned || y < *decommissioned);
  }

  bool overlaps(const Lifetime& o) const noexcept
  {
    const bool this_before_o_ends = !o.decommissioned || commissioned < *o.decommissioned;
    const bool o_before_this_ends = !decommissioned || o.commissioned < *decommissioned;
    return this_before_o_ends && o_before_this_ends;
  }

  bool operator==(const Lifetime&) const = default;
};

enum class NodeKind
{
  plant,
  substation,
  transformer
};

inline std::string_view to_string(NodeKind k)
{
  switch (k)
  {
  case NodeKind::plant: return "plant";
  case NodeKind::substation: return "substation";
  case NodeKind::transformer: return "transformer";
  }
  return "substation";
}

inline std::optional<NodeKind> parse_node_kind(std::string_view s)
{
  s = csv::trim(s);
  if (s == "plant")
    return NodeKind::plant;
  if (s == "substation")
    return NodeKind::substation;
  if (s == "transformer")
    return NodeKind::transformer;
  return std::nullopt;
}

struct NodeRecord
{
  std::string id;
  std::string name;
  NodeKind kind = NodeKind::substation;
  Lifetime life;
  bool domestic = true;

  bool operator==(const NodeRecord&) const = default;
};

struct EdgeRecord
{
  std::string id;
  std::string node_a;
  std::string node_b;
  int voltage_kv = 0;
  Lifetime life;
  bool domestic = true;

  bool operator==(const EdgeRecord&) const = default;
};

/// Parallel circuits collapsed into one edge at ingest.
struct CircuitMerge
{
  std::string kept_id;
  std::vector<std::string> absorbed_ids;
};

struct ActiveElements
{
  std::vector<std::string> nodes; // sorted
  std::vector<std::string> edges; // sorted
};

/// Values indexed by consecutive years.
struct YearSeries
{
  std::vector<Year> years;
  std::vector<double> values;
};

/// Validated commission/decommission log. Immutable once built.
class TemporalGridLog
{
public:
  TemporalGridLog() = default;

  /// Validates the records and merges parallel circuits.
  /// `node_rows`/`edge_rows` give source row numbers for diagnostics; when
  /// empty, the 1-based record position is reported instead.
  static TemporalGridLog from_records(std::vector<NodeRecord> nodes,
                                      std::vector<EdgeRecord> edges,
                                      const std::vector<std::size_t>& node_rows = {},
                                      const std::vector<std::size_t>& edge_rows = {});

  const std::vector<NodeRecord>& nodes() const noexcept { return nodes_; }
  const std::vector<EdgeRecord>& edges() const noexcept { return edges_; }
  const std::vector<CircuitMerge>& merges() const noexcept { return merges_; }

  const NodeRecord* find_node(const std::string& id) const
  {
    const auto it = node_index_.find(id);
    return it == node_index_.end() ? nullptr : &nodes_[it->second];
  }

  /// [earliest commission, latest commission or decommission]; nullopt when empty.
  std::optional<std::pair<Year, Year>> year_range() const noexcept { return year_range_; }

  /// An edge counts only when it and both of its endpoints are in service.
  bool edge_active_in(const EdgeRecord& e, Year y) const
  {
    if (!e.life.active_in(y))
      return false;
    const NodeRecord* a = find_node(e.node_a);
    const NodeRecord* b = find_node(e.node_b);
    return a && b && a->life.active_in(y) && b->life.active_in(y);
  }

  bool operator==(const TemporalGridLog& o) const
  {
    return nodes_ == o.nodes_ && edges_ == o.edges_;
  }

private:
  std::vector<NodeRecord> nodes_;
  std::vector<EdgeRecord> edges_;
  std::vector<CircuitMerge> merges_;
  std::map<std::string, std::size_t> node_index_;
  std::optional<std::pair<Year, Year>> year_range_;
};

namespace detail {

inline std::size_t row_of(const std::vector<std::size_t>& rows, std::size_t i)
{
  return i < rows.size() ? rows[i] : i + 1;
}

inline std::string year_text(const Lifetime& l)
{
  return std::to_string(l.commissioned) + "-" +
         (l.decommissioned ? std::to_string(*l.decommissioned) : std::string());
}

} // namespace detail

inline TemporalGridLog TemporalGridLog::from_records(std::vector<NodeRecord> nodes,
                                                     std::vector<EdgeRecord> edges,
                                                     const std::vector<std::size_t>& node_rows,
                                                     const std::vector<std::size_t>& edge_rows)
{
  TemporalGridLog log;

  for (std::size_t i = 0; i < nodes.size(); ++i)
  {
    const auto& n = nodes[i];
    const auto row = detail::row_of(node_rows, i);
    if (n.id.empty())
      throw ParseError("node with empty id", row);
    if (n.life.decommissioned && *n.life.decommissioned < n.life.commissioned)
      throw ParseError("node '" + n.id + "' decommissioned before commissioned", row);
    if (!log.node_index_.emplace(n.id, i).second)
      throw ParseError("duplicate node id '" + n.id + "'", row);
  }

  std::set<std::string> edge_ids;
  for (std::size_t i = 0; i < edges.size(); ++i)
  {
    const auto& e = edges[i];
    const auto row = detail::row_of(edge_rows, i);
    if (e.id.empty())
      throw ParseError("edge with empty id", row);
    if (!edge_ids.insert(e.id).second)
      throw ParseError("duplicate edge id '" + e.id + "'", row);
    for (const auto* end : {&e.node_a, &e.node_b})
    {
      if (!log.node_index_.count(*end))
        throw ParseError("edge '" + e.id + "' references unknown node '" + *end + "'", row);
    }
    if (e.node_a == e.node_b)
      throw ParseError("edge '" + e.id + "' is a self-loop on '" + e.node_a + "'", row);
    if (e.voltage_kv <= 0)
      throw ParseError("edge '" + e.id + "' has non-positive voltage", row);
    if (e.life.decommissioned && *e.life.decommissioned < e.life.commissioned)
      throw ParseError("edge '" + e.id + "' decommissioned before commissioned", row);

    for (const auto* end : {&e.node_a, &e.node_b})
    {
      const auto& node_life = nodes[log.node_index_.at(*end)].life;
      const bool starts_late_enough = e.life.commissioned >= node_life.commissioned;
      const bool ends_early_enough =
        !node_life.decommissioned ||
        (e.life.decommissioned && *e.life.decommissioned <= *node_life.decommissioned);
      if (!starts_late_enough || !ends_early_enough)
        throw ParseError("edge '" + e.id + "' lifetime " + detail::year_text(e.life) +
                           " exceeds lifetime " + detail::year_text(node_life) + " of node '" +
                           *end + "'",
                         row);
    }
  }

  // Parallel circuits: same unordered endpoint pair with overlapping service.
  std::map<std::pair<std::string, std::string>, std::vector<std::size_t>> by_pair;
  for (std::size_t i = 0; i < edges.size(); ++i)
  {
    auto key = std::minmax(edges[i].node_a, edges[i].node_b);
    by_pair[{key.first, key.second}].push_back(i);
  }

  std::vector<EdgeRecord> merged;
  for (auto& [pair, idx] : by_pair)
  {
    std::sort(idx.begin(), idx.end(), [&](std::size_t l, std::size_t r) {
      const auto& a = edges[l];
      const auto& b = edges[r];
      return std::tie(a.life.commissioned, a.id) < std::tie(b.life.commissioned, b.id);
    });

    std::size_t k = 0;
    while (k < idx.size())
    {
      EdgeRecord kept = edges[idx[k]];
      CircuitMerge note{kept.id, {}};
      std::size_t j = k + 1;
      while (j < idx.size() && kept.life.overlaps(edges[idx[j]].life))
      {
        const auto& other = edges[idx[j]].life;
        if (!other.decommissioned)
          kept.life.decommissioned.reset();
        else if (kept.life.decommissioned)
          kept.life.decommissioned = std::max(*kept.life.decommissioned, *other.decommissioned);
        note.absorbed_ids.push_back(edges[idx[j]].id);
        ++j;
      }
      if (!note.absorbed_ids.empty())
        log.merges_.push_back(std::move(note));
      merged.push_back(std::move(kept));
      k = j;
    }
  }

  std::sort(nodes.begin(), nodes.end(),
            [](const NodeRecord& a, const NodeRecord& b) { return a.id < b.id; });
  std::sort(merged.begin(), merged.end(),
            [](const EdgeRecord& a, const EdgeRecord& b) { return a.id < b.id; });
  std::sort(log.merges_.begin(), log.merges_.end(),
            [](const CircuitMerge& a, const CircuitMerge& b) { return a.kept_id < b.kept_id; });

  log.node_index_.clear();
  for (std::size_t i = 0; i < nodes.size(); ++i)
    log.node_index_.emplace(nodes[i].id, i);

  std::optional<std::pair<Year, Year>> range;
  auto extend = [&](const Lifetime& l) {
    const Year hi = l.decommissioned ? std::max(l.commissioned, *l.decommissioned) : l.commissioned;
    if (!range)
      range = {l.commissioned, hi};
    else
      range = std::pair{std::min(range->first, l.commissioned), std::max(range->second, hi)};
  };
  for (const auto& n : nodes)
    extend(n.life);
  for (const auto& e : merged)
    extend(e.life);

  log.nodes_ = std::move(nodes);
  log.edges_ = std::move(merged);
  log.year_range_ = range;
  return log;
}

inline constexpr std::string_view kNodesHeader = "id,name,kind,commissioned,decommissioned,domestic";
inline constexpr std::string_view kEdgesHeader =
  "id,node_a,node_b,voltage_kv,commissioned,decommissioned,domestic";

namespace detail {

template <typename Fn>
void for_each_data_row(std::istream& in, std::string_view header, std::string_view what, Fn&& fn)
{
  std::string line;
  if (!std::getline(in, line))
    throw ParseError(std::string(what) + ": missing header");
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0)
    line.erase(0, 3);
  if (!line.empty() && line.back() == '\r')
    line.pop_back();
  if (line != header)
    throw ParseError(std::string(what) + ": expected header '" + std::string(header) + "'", 1);

  std::size_t row = 1;
  while (std::getline(in, line))
  {
    ++row;
    if (csv::trim(line).empty() || csv::trim(line) == "\r")
      continue;
    auto fields = csv::split_line(line);
    if (!fields)
      throw ParseError(std::string(what) + ": unterminated quote", row);
    fn(*fields, row);
  }
}

inline Lifetime parse_lifetime(const std::vector<std::string>& f, std::size_t c, std::size_t d,
                               std::string_view what, std::size_t row)
{
  Lifetime life;
  const auto comm = csv::parse_int(f[c]);
  if (!comm)
    throw ParseError(std::string(what) + ": bad commissioned year '" + f[c] + "'", row);
  life.commissioned = static_cast<Year>(*comm);
  if (!csv::trim(f[d]).empty())
  {
    const auto dec = csv::parse_int(f[d]);
    if (!dec)
      throw ParseError(std::string(what) + ": bad decommissioned year '" + f[d] + "'", row);
    life.decommissioned = static_cast<Year>(*dec);
  }
  return life;
}

} // namespace detail

/// Reads nodes.csv / edges.csv content into a validated log.
inline TemporalGridLog parse_log(std::istream& nodes_src, std::istream& edges_src)
{
  std::vector<NodeRecord> nodes;
  std::vector<std::size_t> node_rows;
  detail::for_each_data_row(nodes_src, kNodesHeader, "nodes", [&](const auto& f, std::size_t row) {
    if (f.size() != 6)
      throw ParseError("nodes: expected 6 fields, got " + std::to_string(f.size()), row);
    NodeRecord n;
    n.id = std::string(csv::trim(f[0]));
    n.name = f[1];
    const auto kind = parse_node_kind(f[2]);
    if (!kind)
      throw ParseError("nodes: unknown kind '" + f[2] + "'", row);
    n.kind = *kind;
    n.life = detail::parse_lifetime(f, 3, 4, "nodes", row);
    const auto dom = csv::parse_bool(f[5]);
    if (!dom)
      throw ParseError("nodes: domestic must be true or false, got '" + f[5] + "'", row);
    n.domestic = *dom;
    nodes.push_back(std::move(n));
    node_rows.push_back(row);
  });

  std::vector<EdgeRecord> edges;
  std::vector<std::size_t> edge_rows;
  detail::for_each_data_row(edges_src, kEdgesHeader, "edges", [&](const auto& f, std::size_t row) {
    if (f.size() != 7)
      throw ParseError("edges: expected 7 fields, got " + std::to_string(f.size()), row);
    EdgeRecord e;
    e.id = std::string(csv::trim(f[0]));
    e.node_a = std::string(csv::trim(f[1]));
    e.node_b = std::string(csv::trim(f[2]));
    const auto kv = csv::parse_int(f[3]);
    if (!kv || *kv <= 0)
      throw ParseError("edges: voltage_kv must be a positive integer, got '" + f[3] + "'", row);
    e.voltage_kv = static_cast<int>(*kv);
    e.life = detail::parse_lifetime(f, 4, 5, "edges", row);
    const auto dom = csv::parse_bool(f[6]);
    if (!dom)
      throw ParseError("edges: domestic must be true or false, got '" + f[6] + "'", row);
    e.domestic = *dom;
    edges.push_back(std::move(e));
    edge_rows.push_back(row);
  });

  return TemporalGridLog::from_records(std::move(nodes), std::move(edges), node_rows, edge_rows);
}

inline TemporalGridLog parse_log_files(const std::filesystem::path& nodes_path,
                                       const std::filesystem::path& edges_path)
{
  std::ifstream nodes(nodes_path);
  if (!nodes)
    throw Error("cannot open " + nodes_path.string());
  std::ifstream edges(edges_path);
  if (!edges)
    throw Error("cannot open " + edges_path.string());
  return parse_log(nodes, edges);
}

/// Canonical form: sorted by id, merged circuits already collapsed.
inline void write_nodes_csv(std::ostream& out, const TemporalGridLog& log)
{
  out << kNodesHeader << '\n';
  for (const auto& n : log.nodes())
  {
    out << csv::escape(n.id) << ',' << csv::escape(n.name) << ',' << to_string(n.kind) << ','
        << n.life.commissioned << ','
        << (n.life.decommissioned ? std::to_string(*n.life.decommissioned) : "") << ','
        << (n.domestic ? "true" : "false") << '\n';
  }
}

inline void write_edges_csv(std::ostream& out, const TemporalGridLog& log)
{
  out << kEdgesHeader << '\n';
  for (const auto& e : log.edges())
  {
    out << csv::escape(e.id) << ',' << csv::escape(e.node_a) << ',' << csv::escape(e.node_b) << ','
        << e.voltage_kv << ',' << e.life.commissioned << ','
        << (e.life.decommissioned ? std::to_string(*e.life.decommissioned) : "") << ','
        << (e.domestic ? "true" : "false") << '\n';
  }
}

inline ActiveElements active_elements(const TemporalGridLog& log, Year year)
{
  ActiveElements out;
  for (const auto& n : log.nodes())
    if (n.life.active_in(year))
      out.nodes.push_back(n.id);
  for (const auto& e : log.edges())
    if (log.edge_active_in(e, year))
      out.edges.push_back(e.id);
  return out;
}

/// Per-year count of active edges at the given voltages.
inline YearSeries line_count_series(const TemporalGridLog& log, const std::set<int>& voltages,
                                    bool domestic_only, Year from, Year to)
{
  if (voltages.empty())
    throw DomainError("line_count_series: empty voltage set");
  if (to < from)
    throw DomainError("line_count_series: empty year range");

  YearSeries s;
  for (Year y = from; y <= to; ++y)
  {
    std::size_t count = 0;
    for (const auto& e : log.edges())
    {
      if (!voltages.count(e.voltage_kv) || (domestic_only && !e.domestic))
        continue;
      if (log.edge_active_in(e, y))
        ++count;
    }
    s.years.push_back(y);
    s.values.push_back(static_cast<double>(count));
  }
  return s;
}

} // namespace gridnet
