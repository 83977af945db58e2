#pragma once

#include "gridnet/communities.hpp"
#include "gridnet/error.hpp"
#include "gridnet/graph.hpp"
#include "gridnet/grid_log.hpp"
#include "gridnet/metrics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace gridnet {

inline constexpr std::uint64_t kDefaultSeed = 42;

/// Full metric row for one snapshot, Q from greedy community detection.
inline MetricsRecord analyze_snapshot(const GraphSnapshot& g, std::uint64_t seed = kDefaultSeed)
{
  MetricsRecord r = structural_metrics(g);
  if (g.edge_count() > 0)
    r.modularity = detect_communities(g, seed).achieved_q;
  return r;
}

inline MetricsRecord analyze_year(const TemporalGridLog& log, Year year,
                                  std::uint64_t seed = kDefaultSeed)
{
  return analyze_snapshot(build_snapshot(log, year), seed);
}

enum class Metric
{
  nodes,
  edges,
  avg_degree,
  diameter,
  path_length,
  clustering,
  random_path_length,
  random_clustering,
  sigma,
  modularity,
  components,
  lcc_size
};

/// Accepts the time-series CSV column names.
inline std::optional<Metric> parse_metric(std::string_view s)
{
  struct Entry
  {
    std::string_view name;
    Metric metric;
  };
  static constexpr Entry kNames[] = {
    {"N", Metric::nodes},          {"E", Metric::edges},
    {"avg_degree", Metric::avg_degree}, {"diameter", Metric::diameter},
    {"L", Metric::path_length},    {"C", Metric::clustering},
    {"L_r", Metric::random_path_length}, {"C_r", Metric::random_clustering},
    {"sigma", Metric::sigma},      {"Q", Metric::modularity},
    {"components", Metric::components}, {"lcc_size", Metric::lcc_size},
  };
  for (const auto& e : kNames)
    if (e.name == s)
      return e.metric;
  return std::nullopt;
}

inline std::optional<double> metric_value(const MetricsRecord& r, Metric m)
{
  switch (m)
  {
  case Metric::nodes: return static_cast<double>(r.nodes);
  case Metric::edges: return static_cast<double>(r.edges);
  case Metric::avg_degree: return r.avg_degree;
  case Metric::diameter:
    return r.diameter ? std::optional<double>(*r.diameter) : std::nullopt;
  case Metric::path_length: return r.path_length;
  case Metric::clustering: return r.clustering;
  case Metric::random_path_length: return r.random_path_length;
  case Metric::random_clustering: return r.random_clustering;
  case Metric::sigma: return r.sigma;
  case Metric::modularity: return r.modularity;
  case Metric::components: return static_cast<double>(r.component_count);
  case Metric::lcc_size: return static_cast<double>(r.largest_component_size);
  }
  return std::nullopt;
}

struct MetricTimeSeries
{
  std::vector<Year> years;
  std::vector<MetricsRecord> records;

  std::vector<std::optional<double>> values(Metric m) const
  {
    std::vector<std::optional<double>> out;
    out.reserve(records.size());
    for (const auto& r : records)
      out.push_back(metric_value(r, m));
    return out;
  }
};

/// One record per year in [from, to]. Years are independent and may be
/// spread over `workers` threads; output order is by year regardless.
inline MetricTimeSeries compute_timeseries(const TemporalGridLog& log, Year from, Year to,
                                           std::uint64_t seed = kDefaultSeed,
                                           std::size_t workers = 1)
{
  if (to < from)
    throw DomainError("compute_timeseries: empty year range");
  const auto count = static_cast<std::size_t>(to - from) + 1;
  MetricTimeSeries ts;
  ts.records.resize(count);
  for (std::size_t i = 0; i < count; ++i)
    ts.years.push_back(from + static_cast<Year>(i));

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < count; i = next++)
      ts.records[i] = analyze_year(log, ts.years[i], seed);
  };
  workers = std::clamp<std::size_t>(workers, 1, count);
  if (workers == 1)
    work();
  else
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back(work);
  }
  return ts;
}

/// Sample Pearson correlation coefficient.
inline double pearson(std::span<const double> a, std::span<const double> b)
{
  if (a.size() != b.size())
    throw DomainError("pearson: series lengths differ (" + std::to_string(a.size()) + " vs " +
                      std::to_string(b.size()) + ")");
  if (a.size() < 2)
    throw DomainError("pearson: need at least 2 points");
  const double n = static_cast<double>(a.size());
  double ma = 0, mb = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
  {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
  {
    const double da = a[i] - ma;
    const double db = b[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa == 0 || sbb == 0)
    throw DomainError("pearson: undefined correlation (constant series)");
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

/// Divides by the series maximum (presentation scaling).
inline std::vector<double> normalize_to_max(std::span<const double> s)
{
  if (s.empty())
    throw DomainError("normalize_to_max: empty series");
  const double mx = *std::max_element(s.begin(), s.end());
  if (!(mx > 0))
    throw DomainError("normalize_to_max: series maximum must be positive");
  std::vector<double> out(s.begin(), s.end());
  for (auto& v : out)
    v /= mx;
  return out;
}

struct SigmaCrossing
{
  Year year = 0;
  bool upward = true; // true: sigma rose above 1 in this year
};

struct SmallWorldTransition
{
  std::optional<Year> first_year; // nullopt: never
  std::vector<SigmaCrossing> crossings;
};

/// Scans sigma year by year against the threshold 1. The state before the
/// first defined year counts as "not small-world"; undefined years are skipped.
inline SmallWorldTransition small_world_transition(std::span<const Year> years,
                                                   std::span<const std::optional<double>> sigma)
{
  if (years.size() != sigma.size())
    throw DomainError("small_world_transition: misaligned series");
  SmallWorldTransition t;
  bool above = false;
  for (std::size_t i = 0; i < years.size(); ++i)
  {
    if (!sigma[i])
      continue;
    const bool now = *sigma[i] > 1.0;
    if (now != above)
    {
      t.crossings.push_back({years[i], now});
      if (now && !t.first_year)
        t.first_year = years[i];
      above = now;
    }
  }
  return t;
}

inline SmallWorldTransition small_world_transition(const MetricTimeSeries& ts)
{
  const auto sigma = ts.values(Metric::sigma);
  return small_world_transition(ts.years, sigma);
}

struct CorrelationReport
{
  double r = 0.0;
  std::vector<Year> used_years;
  std::vector<Year> dropped_years; // metric undefined in these years
};

/// Correlates a metric with an aligned series, dropping years where the
/// metric is undefined.
inline CorrelationReport correlate(const MetricTimeSeries& ts, Metric metric,
                                   const YearSeries& other)
{
  if (ts.years != other.years)
    throw DomainError("correlate: year ranges differ");
  CorrelationReport rep;
  std::vector<double> a, b;
  const auto vals = ts.values(metric);
  for (std::size_t i = 0; i < vals.size(); ++i)
  {
    if (!vals[i] || !std::isfinite(*vals[i]))
    {
      rep.dropped_years.push_back(ts.years[i]);
      continue;
    }
    rep.used_years.push_back(ts.years[i]);
    a.push_back(*vals[i]);
    b.push_back(other.values[i]);
  }
  rep.r = pearson(a, b);
  return rep;
}

} // namespace gridnet
