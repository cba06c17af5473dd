#pragma once

#include <Eigen/Dense>
#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "graphsamp/error.hpp"
#include "graphsamp/graph.hpp"
#include "graphsamp/sampling.hpp"
#include "graphsamp/signal.hpp"

namespace graphsamp::io {

using nlohmann::json;

inline json params_to_json(const GraphParams& p) {
  json out = json::object();
  if (p.k) out["k"] = *p.k;
  if (p.p) out["p"] = *p.p;
  if (p.radius) out["radius"] = *p.radius;
  if (p.rewire) out["rewire"] = *p.rewire;
  if (p.attach) out["attach"] = *p.attach;
  return out;
}

inline GraphParams params_from_json(const json& j) {
  GraphParams p;
  if (j.contains("k")) p.k = j.at("k").get<int>();
  if (j.contains("p")) p.p = j.at("p").get<double>();
  if (j.contains("radius")) p.radius = j.at("radius").get<double>();
  if (j.contains("rewire")) p.rewire = j.at("rewire").get<double>();
  if (j.contains("attach")) p.attach = j.at("attach").get<int>();
  return p;
}

// {"n", "kind", "params", "seed", "edges": [[i, j, w], ...]} with i < j.
inline json graph_to_json(const Graph& g) {
  json edges = json::array();
  const auto& w = g.weights();
  for (int i = 0; i < g.size(); ++i)
    for (int j = i + 1; j < g.size(); ++j)
      if (w(i, j) != 0.0) edges.push_back(json::array({i, j, w(i, j)}));
  return json{{"n", g.size()},
              {"kind", std::string(to_string(g.kind()))},
              {"params", params_to_json(g.params())},
              {"seed", g.seed()},
              {"components", g.component_count()},
              {"edges", std::move(edges)}};
}

inline Graph graph_from_json(const json& j) {
  try {
    const int n = j.at("n").get<int>();
    if (n < 2) throw ParameterError("graph file: n must be at least 2");
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
    for (const auto& e : j.at("edges")) {
      const int a = e.at(0).get<int>(), b = e.at(1).get<int>();
      const double weight = e.size() > 2 ? e.at(2).get<double>() : 1.0;
      if (a < 0 || b < 0 || a >= n || b >= n || a == b) throw ParameterError("graph file: bad edge endpoints");
      w(a, b) = w(b, a) = weight;
    }
    const GraphKind kind = j.contains("kind") ? parse_graph_kind(j.at("kind").get<std::string>()) : GraphKind::custom;
    const GraphParams params = j.contains("params") ? params_from_json(j.at("params")) : GraphParams{};
    const std::uint64_t seed = j.value("seed", std::uint64_t{0});
    return Graph::from_weights(std::move(w), kind, params, seed);
  } catch (const json::exception& e) {
    throw IoError(std::string("graph file: ") + e.what());
  }
}

inline std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

inline Eigen::VectorXd to_eigen(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

inline json signal_to_json(const GraphSignal& x) { return json{{"n", x.size()}, {"values", to_std(x.values)}}; }

inline json spectral_to_json(const SpectralSignal& x) { return json{{"n", x.size()}, {"coeffs", to_std(x.coeffs)}}; }

inline GraphSignal signal_from_json(const json& j) {
  try {
    GraphSignal x{to_eigen(j.at("values").get<std::vector<double>>())};
    if (j.contains("n") && j.at("n").get<int>() != x.size()) throw IoError("signal file: n does not match values");
    return x;
  } catch (const json::exception& e) {
    throw IoError(std::string("signal file: ") + e.what());
  }
}

inline SpectralSignal spectral_from_json(const json& j) {
  try {
    return SpectralSignal{to_eigen(j.at("coeffs").get<std::vector<double>>())};
  } catch (const json::exception& e) {
    throw IoError(std::string("spectral signal file: ") + e.what());
  }
}

// Scores are a bare JSON array of probabilities.
inline json scores_to_json(const SamplingScores& s) { return json(to_std(s.pi)); }

inline SamplingScores scores_from_json(const json& j, Strategy strategy = Strategy::uniform) {
  try {
    const json& arr = j.is_object() ? j.at("pi") : j;
    SamplingScores s;
    s.pi = to_eigen(arr.get<std::vector<double>>());
    s.strategy = strategy;
    if ((s.pi.array() < 0.0).any() || std::abs(s.pi.sum() - 1.0) > 1e-10)
      throw IoError("scores file: probabilities must be nonnegative and sum to 1");
    return s;
  } catch (const json::exception& e) {
    throw IoError(std::string("scores file: ") + e.what());
  }
}

inline json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

inline void write_json(const std::filesystem::path& path, const json& j) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace graphsamp::io
