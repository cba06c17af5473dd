#pragma once

#include <json.hpp>
#include <toml.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "graphsamp/error.hpp"
#include "graphsamp/graph.hpp"
#include "graphsamp/io.hpp"
#include "graphsamp/recovery.hpp"
#include "graphsamp/sampling.hpp"

namespace graphsamp {

struct GraphSpec {
  GraphKind kind = GraphKind::ring;
  int n = 512;
  GraphParams params;
  std::uint64_t seed = 1;
};

// Every trial synthesizes a fresh approximately bandlimited signal with
// bandwidth K for each tail decay in `betas`.
struct SignalSpec {
  int K = 10;
  std::vector<double> betas{1.0};
  int k_min = 10;  // floor of the bandwidth rule
};

struct ExperimentConfig {
  GraphSpec graph;
  SignalSpec signal;
  std::vector<double> sigma2s{1e-4};
  std::vector<Strategy> strategies{Strategy::uniform, Strategy::leverage};
  std::vector<int> m_grid;
  int trials = 200;
  Estimator estimator = Estimator::sample_proj;
  std::uint64_t master_seed = 1;
  std::filesystem::path output_dir;
};

// Throws ConfigError naming the offending field.
inline void validate(const ExperimentConfig& c) {
  if (c.graph.n < 2) throw ConfigError("graph.n", "must be at least 2");
  if (c.graph.kind == GraphKind::custom) throw ConfigError("graph.kind", "custom graphs cannot be generated");
  if (c.signal.K < 1 || c.signal.K > c.graph.n) throw ConfigError("signal.K", "must lie in [1, n]");
  if (c.signal.k_min < 1) throw ConfigError("signal.K_min", "must be at least 1");
  if (c.signal.betas.empty()) throw ConfigError("signal.beta", "must not be empty");
  for (double b : c.signal.betas)
    if (!(b >= 0.5)) throw ConfigError("signal.beta", "values must be at least 0.5");
  if (c.sigma2s.empty()) throw ConfigError("sampling.sigma2", "must not be empty");
  for (double s : c.sigma2s)
    if (!(s >= 0.0)) throw ConfigError("sampling.sigma2", "values must be nonnegative");
  if (c.strategies.empty()) throw ConfigError("sampling.strategies", "must not be empty");
  if (std::set<Strategy>(c.strategies.begin(), c.strategies.end()).size() != c.strategies.size())
    throw ConfigError("sampling.strategies", "contains duplicates");
  if (c.m_grid.empty()) throw ConfigError("sampling.m", "must not be empty");
  for (std::size_t i = 0; i < c.m_grid.size(); ++i) {
    if (c.m_grid[i] < 1) throw ConfigError("sampling.m", "values must be positive");
    if (i > 0 && c.m_grid[i] <= c.m_grid[i - 1]) throw ConfigError("sampling.m", "must be strictly increasing");
  }
  if (c.trials < 1) throw ConfigError("trials", "must be at least 1");
}

// `points` log-spaced integers from lo to hi, rounded to nearest.
inline std::vector<int> log_spaced_grid(double lo, double hi, int points) {
  if (!(lo >= 1.0) || !(hi > lo) || points < 2) throw ParameterError("log grid needs 1 <= lo < hi and >= 2 points");
  std::vector<int> grid;
  for (int i = 0; i < points; ++i) {
    const double t = static_cast<double>(i) / (points - 1);
    const int v = static_cast<int>(std::lround(std::exp(std::log(lo) + t * (std::log(hi) - std::log(lo)))));
    if (grid.empty() || v > grid.back()) grid.push_back(v);
  }
  return grid;
}

namespace detail {

inline std::string join_path(std::string_view parent, std::string_view key) {
  return parent.empty() ? std::string(key) : std::string(parent) + "." + std::string(key);
}

inline void reject_unknown(const toml::table& t, std::string_view path, std::initializer_list<std::string_view> known) {
  for (const auto& [key, value] : t) {
    if (std::find(known.begin(), known.end(), key.str()) == known.end())
      throw ConfigError(join_path(path, key.str()), "unknown key");
  }
}

template <typename T>
T required(const toml::table& t, std::string_view path, std::string_view key) {
  const auto* node = t.get(key);
  if (!node) throw ConfigError(join_path(path, key), "missing");
  auto v = node->value<T>();
  if (!v) throw ConfigError(join_path(path, key), "has the wrong type");
  return *v;
}

template <typename T>
std::optional<T> optional_value(const toml::table& t, std::string_view path, std::string_view key) {
  const auto* node = t.get(key);
  if (!node) return std::nullopt;
  auto v = node->value<T>();
  if (!v) throw ConfigError(join_path(path, key), "has the wrong type");
  return v;
}

// Accepts a scalar or an array of scalars.
template <typename T>
std::vector<T> list_value(const toml::table& t, std::string_view path, std::string_view key) {
  const auto* node = t.get(key);
  if (!node) throw ConfigError(join_path(path, key), "missing");
  std::vector<T> out;
  if (const auto* arr = node->as_array()) {
    for (std::size_t i = 0; i < arr->size(); ++i) {
      auto v = (*arr)[i].value<T>();
      if (!v) throw ConfigError(join_path(path, key) + "[" + std::to_string(i) + "]", "has the wrong type");
      out.push_back(*v);
    }
  } else if (auto v = node->value<T>()) {
    out.push_back(*v);
  } else {
    throw ConfigError(join_path(path, key), "has the wrong type");
  }
  return out;
}

inline const toml::table& subtable(const toml::table& root, std::string_view key) {
  const auto* node = root.get(key);
  if (!node) throw ConfigError(std::string(key), "missing table");
  const auto* t = node->as_table();
  if (!t) throw ConfigError(std::string(key), "must be a table");
  return *t;
}

template <typename Fn>
auto wrap_parameter_error(std::string path, Fn&& fn) {
  try {
    return fn();
  } catch (const ParameterError& e) {
    throw ConfigError(std::move(path), e.what());
  }
}

}  // namespace detail

// Parses the TOML experiment description. Unknown keys are errors.
inline ExperimentConfig parse_config_toml(std::string_view text) {
  toml::table root;
  try {
    root = toml::parse(text);
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << e.description() << " (line " << e.source().begin.line << ")";
    throw ConfigError("", msg.str());
  }
  using namespace detail;
  reject_unknown(root, "", {"master_seed", "trials", "estimator", "output_dir", "graph", "signal", "sampling"});

  ExperimentConfig c;
  if (auto v = optional_value<int64_t>(root, "", "master_seed")) c.master_seed = static_cast<std::uint64_t>(*v);
  if (auto v = optional_value<int64_t>(root, "", "trials")) c.trials = static_cast<int>(*v);
  if (auto v = optional_value<std::string>(root, "", "estimator"))
    c.estimator = wrap_parameter_error("estimator", [&] { return parse_estimator(*v); });
  if (auto v = optional_value<std::string>(root, "", "output_dir")) c.output_dir = *v;

  const auto& g = subtable(root, "graph");
  reject_unknown(g, "graph", {"kind", "n", "seed", "k", "p", "radius", "rewire", "attach"});
  const auto kind_tag = required<std::string>(g, "graph", "kind");
  c.graph.kind = wrap_parameter_error("graph.kind", [&] { return parse_graph_kind(kind_tag); });
  c.graph.n = static_cast<int>(required<int64_t>(g, "graph", "n"));
  if (auto v = optional_value<int64_t>(g, "graph", "seed")) c.graph.seed = static_cast<std::uint64_t>(*v);
  if (auto v = optional_value<int64_t>(g, "graph", "k")) c.graph.params.k = static_cast<int>(*v);
  if (auto v = optional_value<double>(g, "graph", "p")) c.graph.params.p = *v;
  if (auto v = optional_value<double>(g, "graph", "radius")) c.graph.params.radius = *v;
  if (auto v = optional_value<double>(g, "graph", "rewire")) c.graph.params.rewire = *v;
  if (auto v = optional_value<int64_t>(g, "graph", "attach")) c.graph.params.attach = static_cast<int>(*v);
  c.graph.params = resolve_params(c.graph.kind, c.graph.params);

  if (root.contains("signal")) {
    const auto& s = subtable(root, "signal");
    reject_unknown(s, "signal", {"K", "beta", "K_min"});
    if (auto v = optional_value<int64_t>(s, "signal", "K")) c.signal.K = static_cast<int>(*v);
    if (s.contains("beta")) c.signal.betas = list_value<double>(s, "signal", "beta");
    if (auto v = optional_value<int64_t>(s, "signal", "K_min")) c.signal.k_min = static_cast<int>(*v);
  }

  const auto& smp = subtable(root, "sampling");
  reject_unknown(smp, "sampling", {"strategies", "sigma2", "m", "m_grid"});
  c.strategies.clear();
  for (const auto& tag : list_value<std::string>(smp, "sampling", "strategies"))
    c.strategies.push_back(wrap_parameter_error("sampling.strategies", [&] { return parse_strategy(tag); }));
  if (smp.contains("sigma2")) c.sigma2s = list_value<double>(smp, "sampling", "sigma2");
  if (smp.contains("m") && smp.contains("m_grid")) throw ConfigError("sampling", "give either m or m_grid, not both");
  if (smp.contains("m")) {
    for (auto v : list_value<int64_t>(smp, "sampling", "m")) c.m_grid.push_back(static_cast<int>(v));
  } else {
    if (!smp.contains("m_grid")) throw ConfigError("sampling.m", "missing: give m or m_grid");
    const auto* grid_node = smp.get("m_grid")->as_table();
    if (!grid_node) throw ConfigError("sampling.m_grid", "must be a table {min, max, points}");
    const auto& grid = *grid_node;
    reject_unknown(grid, "sampling.m_grid", {"min", "max", "points"});
    const auto lo = required<double>(grid, "sampling.m_grid", "min");
    const auto hi = required<double>(grid, "sampling.m_grid", "max");
    const auto points = required<int64_t>(grid, "sampling.m_grid", "points");
    c.m_grid = wrap_parameter_error("sampling.m_grid", [&] { return log_spaced_grid(lo, hi, static_cast<int>(points)); });
  }
  validate(c);
  return c;
}

inline ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_toml(buf.str());
}

inline nlohmann::json config_to_json(const ExperimentConfig& c) {
  nlohmann::json strategies = nlohmann::json::array();
  for (auto s : c.strategies) strategies.push_back(std::string(to_string(s)));
  return {{"graph",
           {{"kind", std::string(to_string(c.graph.kind))},
            {"n", c.graph.n},
            {"seed", c.graph.seed},
            {"params", io::params_to_json(c.graph.params)}}},
          {"signal", {{"K", c.signal.K}, {"beta", c.signal.betas}, {"K_min", c.signal.k_min}}},
          {"sampling", {{"strategies", strategies}, {"sigma2", c.sigma2s}, {"m", c.m_grid}}},
          {"trials", c.trials},
          {"estimator", std::string(to_string(c.estimator))},
          {"master_seed", c.master_seed}};
}

}  // namespace graphsamp
