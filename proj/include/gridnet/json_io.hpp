#pragma once

// Optional JSON layer over nlohmann/json. The rest of the library does not
// depend on it.

#include "gridnet/degree_fit.hpp"
#include "gridnet/error.hpp"
#include "gridnet/metrics.hpp"

#include <json.hpp>

#include <string>

namespace gridnet {

/// Flat record: model, a, gamma_or_kappa, sse, r_squared, iterations.
inline nlohmann::json to_json(const FitResult& f)
{
  return nlohmann::json{
    {"model", std::string(to_string(f.model))},
    {"a", f.prefactor},
    {"gamma_or_kappa", f.shape},
    {"sse", f.sse},
    {"r_squared", f.r_squared},
    {"iterations", f.iterations},
  };
}

inline FitResult fit_result_from_json(const nlohmann::json& j)
{
  try
  {
    FitResult f;
    const auto model = parse_fit_model(j.at("model").get<std::string>());
    if (!model)
      throw ParseError("fit result: unknown model '" + j.at("model").get<std::string>() + "'");
    f.model = *model;
    f.prefactor = j.at("a").get<double>();
    f.shape = j.at("gamma_or_kappa").get<double>();
    f.sse = j.at("sse").get<double>();
    f.r_squared = j.at("r_squared").get<double>();
    f.iterations = j.value("iterations", 0);
    return f;
  }
  catch (const nlohmann::json::exception& e)
  {
    throw ParseError(std::string("fit result: ") + e.what());
  }
}

inline nlohmann::json to_json(const FitComparison& c)
{
  nlohmann::json tail = nlohmann::json::array();
  for (const auto& t : c.tail)
    tail.push_back({{"k", t.k},
                    {"observed", t.observed},
                    {"power_law_residual", t.power_law_residual},
                    {"exponential_residual", t.exponential_residual}});
  return nlohmann::json{
    {"power_law", to_json(c.power_law)},
    {"exponential", to_json(c.exponential)},
    {"preferred", c.preferred ? std::string(to_string(*c.preferred)) : std::string("tie")},
    {"tail", tail},
  };
}

/// Absent metrics become null.
inline nlohmann::json to_json(const MetricsRecord& r)
{
  auto opt = [](const auto& v) -> nlohmann::json {
    if (v)
      return *v;
    return nullptr;
  };
  return nlohmann::json{
    {"year", r.year},
    {"N", r.nodes},
    {"E", r.edges},
    {"avg_degree", opt(r.avg_degree)},
    {"diameter", opt(r.diameter)},
    {"L", opt(r.path_length)},
    {"C", opt(r.clustering)},
    {"L_r", opt(r.random_path_length)},
    {"C_r", opt(r.random_clustering)},
    {"sigma", opt(r.sigma)},
    {"Q", opt(r.modularity)},
    {"components", r.component_count},
    {"lcc_size", r.largest_component_size},
  };
}

} // namespace gridnet
