#pragma once

#include "gridnet/communities.hpp"
#include "gridnet/degree_fit.hpp"
#include "gridnet/evolution.hpp"
#include "gridnet/generators.hpp"
#include "gridnet/graph.hpp"
#include "gridnet/grid_log.hpp"
#include "gridnet/json_io.hpp"
#include "gridnet/metrics.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

namespace gridnet::cli {

struct RunConfig
{
  std::string nodes_path;
  std::string edges_path;
  std::string graph_path; // edge-list input instead of a log
  std::optional<Year> year;
  std::optional<Year> from;
  std::optional<Year> to;
  std::vector<int> voltages{220, 400};
  bool domestic_only = false;
  std::string metric = "sigma";
  std::string model = "both";
  std::string generator = "ba";
  std::size_t n = 0;
  std::size_t k = 4;
  std::size_t m = 2;
  double p = 0.1;
  std::uint64_t seed = kDefaultSeed;
  std::size_t restarts = 1;
  std::size_t workers = 1;
  std::string format = "csv";
  std::string out_path;
  std::string edge_list_out;
  std::string ccdf_out;
};

/// Writes via a sibling temp file and rename, so readers never see a
/// partial file.
inline void write_atomically(const std::string& path, const std::string& content)
{
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f)
      throw Error("cannot write " + tmp.string());
    f << content;
    f.flush();
    if (!f)
      throw Error("write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec)
  {
    fs::remove(tmp);
    throw Error("cannot rename into " + path + ": " + ec.message());
  }
}

namespace detail {

inline void emit(const RunConfig& cfg, std::ostream& out, const std::string& content)
{
  if (cfg.out_path.empty())
    out << content;
  else
    write_atomically(cfg.out_path, content);
}

inline TemporalGridLog load_log(const RunConfig& cfg)
{
  if (cfg.nodes_path.empty() || cfg.edges_path.empty())
    throw Error("--nodes and --edges are required");
  for (const auto& p : {cfg.nodes_path, cfg.edges_path})
    if (!std::filesystem::exists(p))
      throw Error("input file not found: " + p);
  return parse_log_files(cfg.nodes_path, cfg.edges_path);
}

inline std::pair<Year, Year> year_span(const RunConfig& cfg, const TemporalGridLog& log)
{
  const auto range = log.year_range();
  if ((!cfg.from || !cfg.to) && !range)
    throw Error("log is empty; pass --from and --to");
  const Year from = cfg.from ? *cfg.from : range->first;
  const Year to = cfg.to ? *cfg.to : range->second;
  if (to < from)
    throw Error("invalid year range " + std::to_string(from) + ".." + std::to_string(to));
  return {from, to};
}

/// Graph from --graph, or from the log at --year.
inline GraphSnapshot load_graph(const RunConfig& cfg)
{
  if (!cfg.graph_path.empty())
  {
    std::ifstream in(cfg.graph_path);
    if (!in)
      throw Error("input file not found: " + cfg.graph_path);
    return read_edge_list(in);
  }
  if (!cfg.year)
    throw Error("--year is required unless --graph is given");
  return build_snapshot(load_log(cfg), *cfg.year);
}

inline std::string timeseries_csv(const MetricTimeSeries& ts)
{
  std::string s(kMetricsHeader);
  s += '\n';
  for (const auto& r : ts.records)
    s += to_csv_row(r) + '\n';
  return s;
}

inline std::string fit_csv_row(const FitResult& f)
{
  return std::string(to_string(f.model)) + ',' + csv::format_g17(f.prefactor) + ',' +
         csv::format_g17(f.shape) + ',' + csv::format_g17(f.sse) + ',' +
         csv::format_g17(f.r_squared) + '\n';
}

inline int cmd_snapshot(const RunConfig& cfg, std::ostream& out)
{
  if (!cfg.year)
    throw Error("--year is required");
  const auto log = load_log(cfg);
  const auto g = build_snapshot(log, *cfg.year);
  if (!cfg.edge_list_out.empty())
  {
    std::ostringstream el;
    write_edge_list(el, g);
    write_atomically(cfg.edge_list_out, el.str());
  }
  const auto rec = analyze_snapshot(g, cfg.seed);
  if (cfg.format == "json")
    emit(cfg, out, to_json(rec).dump(2) + "\n");
  else
    emit(cfg, out, std::string(kMetricsHeader) + "\n" + to_csv_row(rec) + "\n");
  return 0;
}

inline int cmd_timeseries(const RunConfig& cfg, std::ostream& out)
{
  const auto log = load_log(cfg);
  const auto [from, to] = year_span(cfg, log);
  const auto ts = compute_timeseries(log, from, to, cfg.seed, cfg.workers);
  if (cfg.format == "json")
  {
    auto j = nlohmann::json::array();
    for (const auto& r : ts.records)
      j.push_back(to_json(r));
    emit(cfg, out, j.dump(2) + "\n");
  }
  else
    emit(cfg, out, timeseries_csv(ts));
  return 0;
}

inline int cmd_fit(const RunConfig& cfg, std::ostream& out)
{
  const auto g = load_graph(cfg);
  const auto ccdf = build_ccdf(degree_stats(g).histogram);
  if (!cfg.ccdf_out.empty())
  {
    std::ostringstream c;
    write_ccdf_csv(c, ccdf);
    write_atomically(cfg.ccdf_out, c.str());
  }

  const std::string header = "model,a,gamma_or_kappa,sse,r_squared\n";
  if (cfg.model == "both")
  {
    const auto cmp = compare_fits(ccdf);
    if (cfg.format == "json")
      emit(cfg, out, to_json(cmp).dump(2) + "\n");
    else
      emit(cfg, out, header + fit_csv_row(cmp.power_law) + fit_csv_row(cmp.exponential));
    return 0;
  }
  const auto model = parse_fit_model(cfg.model);
  if (!model)
    throw Error("unknown model '" + cfg.model + "' (power_law, exponential, both)");
  const auto fit = fit_model(ccdf, *model);
  if (cfg.format == "json")
    emit(cfg, out, to_json(fit).dump(2) + "\n");
  else
    emit(cfg, out, header + fit_csv_row(fit));
  return 0;
}

inline int cmd_correlate(const RunConfig& cfg, std::ostream& out)
{
  const auto metric = parse_metric(cfg.metric);
  if (!metric)
    throw Error("unknown metric '" + cfg.metric + "'");
  const auto log = load_log(cfg);
  const auto [from, to] = year_span(cfg, log);
  const std::set<int> voltages(cfg.voltages.begin(), cfg.voltages.end());
  const auto lines = line_count_series(log, voltages, cfg.domestic_only, from, to);
  const auto ts = compute_timeseries(log, from, to, cfg.seed, cfg.workers);
  const auto rep = correlate(ts, *metric, lines);

  std::string volt_text;
  for (int v : voltages)
    volt_text += (volt_text.empty() ? "" : ",") + std::to_string(v);

  if (cfg.format == "json")
  {
    nlohmann::json j{{"metric", cfg.metric},
                     {"voltages", std::vector<int>(voltages.begin(), voltages.end())},
                     {"domestic_only", cfg.domestic_only},
                     {"from", from},
                     {"to", to},
                     {"used_years", rep.used_years.size()},
                     {"dropped_years", rep.dropped_years.size()},
                     {"r", rep.r}};
    emit(cfg, out, j.dump(2) + "\n");
    return 0;
  }
  std::string s;
  s += "metric=" + cfg.metric + "\n";
  s += "voltages=" + volt_text + "\n";
  s += std::string("domestic_only=") + (cfg.domestic_only ? "true" : "false") + "\n";
  s += "from=" + std::to_string(from) + "\n";
  s += "to=" + std::to_string(to) + "\n";
  s += "used_years=" + std::to_string(rep.used_years.size()) + "\n";
  s += "dropped_years=" + std::to_string(rep.dropped_years.size()) + "\n";
  s += "r=" + csv::format_g17(rep.r) + "\n";
  emit(cfg, out, s);
  return 0;
}

inline int cmd_generate(const RunConfig& cfg, std::ostream& out)
{
  const auto kind = parse_generator_kind(cfg.generator);
  if (!kind)
    throw Error("unknown generator '" + cfg.generator + "' (er, ws, ba)");
  GeneratorSpec spec;
  spec.kind = *kind;
  spec.n = cfg.n;
  spec.p = cfg.p;
  spec.k = cfg.k;
  spec.m = cfg.m;
  spec.seed = cfg.seed;
  std::ostringstream s;
  write_edge_list(s, generate(spec));
  emit(cfg, out, s.str());
  return 0;
}

inline int cmd_communities(const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
  const auto g = load_graph(cfg);
  const auto a = detect_communities(g, cfg.seed, cfg.restarts);
  if (cfg.format == "json")
  {
    nlohmann::json rows = nlohmann::json::array();
    for (NodeIndex i = 0; i < g.node_count(); ++i)
      rows.push_back({{"node_id", g.id(i)}, {"community_id", a.community[i]}});
    nlohmann::json j{{"method", a.method},
                     {"seed", a.seed},
                     {"achieved_q", a.achieved_q},
                     {"communities", a.community_count()},
                     {"assignment", rows}};
    emit(cfg, out, j.dump(2) + "\n");
    return 0;
  }
  std::ostringstream s;
  write_assignment_csv(s, g, a);
  emit(cfg, out, s.str());
  err << "achieved_q=" << csv::format_g17(a.achieved_q) << " communities=" << a.community_count()
      << '\n';
  return 0;
}

} // namespace detail

/// Parses `args` (without the program name) and runs the command.
/// Returns the process exit status; diagnostics go to `err` as one line.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
  RunConfig cfg;
  CLI::App app{"Temporal complex-network analytics for infrastructure grids", "gridnet"};
  app.require_subcommand(1);

  auto add_log = [&](CLI::App* sc) {
    sc->add_option("--nodes", cfg.nodes_path, "nodes.csv");
    sc->add_option("--edges", cfg.edges_path, "edges.csv");
  };
  auto add_common = [&](CLI::App* sc) {
    sc->add_option("--seed", cfg.seed, "random seed")->capture_default_str();
    sc->add_option("--format", cfg.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
    sc->add_option("--out", cfg.out_path, "output file (default: stdout)");
  };
  auto add_range = [&](CLI::App* sc) {
    sc->add_option("--from", cfg.from, "first year");
    sc->add_option("--to", cfg.to, "last year");
    sc->add_option("--workers", cfg.workers, "threads for per-year work")->capture_default_str();
  };

  auto* snap = app.add_subcommand("snapshot", "metrics for one year");
  add_log(snap);
  add_common(snap);
  snap->add_option("--year", cfg.year, "snapshot year")->required();
  snap->add_option("--edge-list", cfg.edge_list_out, "also export the snapshot edge list");

  auto* series = app.add_subcommand("timeseries", "metrics for every year of a range");
  add_log(series);
  add_common(series);
  add_range(series);

  auto* fit = app.add_subcommand("fit", "fit power-law / exponential models to the degree CCDF");
  add_log(fit);
  add_common(fit);
  fit->add_option("--year", cfg.year, "snapshot year");
  fit->add_option("--graph", cfg.graph_path, "edge-list input instead of a log");
  fit->add_option("--model", cfg.model, "power_law, exponential or both")
    ->check(CLI::IsMember({"power_law", "exponential", "both"}))
    ->capture_default_str();
  fit->add_option("--ccdf-out", cfg.ccdf_out, "export the CCDF as k,p CSV");

  auto* corr = app.add_subcommand("correlate", "Pearson r between a metric and line counts");
  add_log(corr);
  add_common(corr);
  add_range(corr);
  corr->add_option("--metric", cfg.metric, "time-series column")->capture_default_str();
  corr->add_option("--voltages", cfg.voltages, "voltage levels in kV")->delimiter(',');
  corr->add_flag("--domestic-only", cfg.domestic_only, "count domestic lines only");

  auto* gen = app.add_subcommand("generate", "seeded reference graph as an edge list");
  add_common(gen);
  gen->add_option("--kind", cfg.generator, "er, ws or ba")->capture_default_str();
  gen->add_option("--n", cfg.n, "node count")->required();
  gen->add_option("--k", cfg.k, "ring degree (ws)")->capture_default_str();
  gen->add_option("--m", cfg.m, "attachments per node (ba)")->capture_default_str();
  gen->add_option("--p", cfg.p, "edge / rewiring probability (er, ws)")->capture_default_str();

  auto* comm = app.add_subcommand("communities", "greedy modularity communities");
  add_log(comm);
  add_common(comm);
  comm->add_option("--year", cfg.year, "snapshot year");
  comm->add_option("--graph", cfg.graph_path, "edge-list input instead of a log");
  comm->add_option("--restarts", cfg.restarts, "greedy restarts")->capture_default_str();

  std::vector<std::string> argv_store;
  argv_store.reserve(args.size() + 1);
  argv_store.push_back("gridnet");
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store)
    argv.push_back(a.c_str());

  try
  {
    app.parse(static_cast<int>(argv.size()), argv.data());
  }
  catch (const CLI::CallForHelp&)
  {
    out << app.help();
    return 0;
  }
  catch (const CLI::CallForAllHelp&)
  {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  }
  catch (const CLI::ParseError& e)
  {
    err << "gridnet: error: " << e.what() << '\n';
    return 2;
  }

  try
  {
    if (snap->parsed())
      return detail::cmd_snapshot(cfg, out);
    if (series->parsed())
      return detail::cmd_timeseries(cfg, out);
    if (fit->parsed())
      return detail::cmd_fit(cfg, out);
    if (corr->parsed())
      return detail::cmd_correlate(cfg, out);
    if (gen->parsed())
      return detail::cmd_generate(cfg, out);
    if (comm->parsed())
      return detail::cmd_communities(cfg, out, err);
  }
  catch (const std::exception& e)
  {
    err << "gridnet: error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

} // namespace gridnet::cli
