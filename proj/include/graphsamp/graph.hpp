#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <algorithm>
#include <vector>

#include "graphsamp/error.hpp"
#include "graphsamp/rng.hpp"

namespace graphsamp {

enum class GraphKind { ring, erdos_renyi, geometric, small_world, power_law, custom };

inline std::string_view to_string(GraphKind kind) {
  switch (kind) {
    case GraphKind::ring: return "ring";
    case GraphKind::erdos_renyi: return "er";
    case GraphKind::geometric: return "rgg";
    case GraphKind::small_world: return "ws";
    case GraphKind::power_law: return "ba";
    case GraphKind::custom: return "custom";
  }
  return "custom";
}

inline GraphKind parse_graph_kind(std::string_view tag) {
  for (auto kind : {GraphKind::ring, GraphKind::erdos_renyi, GraphKind::geometric,
                    GraphKind::small_world, GraphKind::power_law, GraphKind::custom}) {
    if (tag == to_string(kind)) return kind;
  }
  throw ParameterError("unknown graph kind '" + std::string(tag) + "'");
}

// Generator parameters. Only the fields relevant to a kind are read; unset
// fields take the per-kind defaults of default_params().
struct GraphParams {
  std::optional<int> k;          // ring / small-world neighbour count (even)
  std::optional<double> p;       // Erdos-Renyi edge probability
  std::optional<double> radius;  // random geometric threshold in the unit square
  std::optional<double> rewire;  // Watts-Strogatz per-edge rewiring probability
  std::optional<int> attach;     // Barabasi-Albert edges per new node

  friend bool operator==(const GraphParams&, const GraphParams&) = default;
};

inline GraphParams default_params(GraphKind kind) {
  GraphParams out;
  switch (kind) {
    case GraphKind::ring: out.k = 4; break;
    case GraphKind::erdos_renyi: out.p = 0.01; break;
    case GraphKind::geometric: out.radius = 0.03; break;
    case GraphKind::small_world: out.k = 2; out.rewire = 1e-4; break;
    case GraphKind::power_law: out.attach = 1; break;
    case GraphKind::custom: break;
  }
  return out;
}

// Fills unset fields of `params` from the defaults of `kind` and drops the
// fields the kind does not use.
inline GraphParams resolve_params(GraphKind kind, const GraphParams& params) {
  GraphParams out = default_params(kind);
  if (out.k && params.k) out.k = params.k;
  if (out.p && params.p) out.p = params.p;
  if (out.radius && params.radius) out.radius = params.radius;
  if (out.rewire && params.rewire) out.rewire = params.rewire;
  if (out.attach && params.attach) out.attach = params.attach;
  return out;
}

namespace detail {

inline int count_components(const Eigen::MatrixXd& w) {
  const auto n = static_cast<int>(w.rows());
  std::vector<char> seen(n, 0);
  std::vector<int> stack;
  int components = 0;
  for (int root = 0; root < n; ++root) {
    if (seen[root]) continue;
    ++components;
    seen[root] = 1;
    stack.push_back(root);
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (int v = 0; v < n; ++v) {
        if (!seen[v] && w(u, v) != 0.0) {
          seen[v] = 1;
          stack.push_back(v);
        }
      }
    }
  }
  return components;
}

}  // namespace detail

// Undirected weighted graph on n >= 2 nodes stored as a dense symmetric
// adjacency with zero diagonal. Immutable once built.
class Graph {
 public:
  static Graph from_weights(Eigen::MatrixXd weights, GraphKind kind = GraphKind::custom,
                            GraphParams params = {}, std::uint64_t seed = 0) {
    if (weights.rows() != weights.cols()) throw ParameterError("adjacency must be square");
    if (weights.rows() < 2) throw ParameterError("graph needs at least 2 nodes");
    const auto n = weights.rows();
    for (Eigen::Index i = 0; i < n; ++i) {
      if (weights(i, i) != 0.0) throw ParameterError("adjacency diagonal must be zero");
      for (Eigen::Index j = i + 1; j < n; ++j) {
        const double a = weights(i, j);
        if (!std::isfinite(a) || a < 0.0) throw ParameterError("edge weights must be finite and nonnegative");
        if (a != weights(j, i)) throw SymmetryError("adjacency is not symmetric");
      }
    }
    Graph g;
    g.components_ = detail::count_components(weights);
    g.weights_ = std::move(weights);
    g.kind_ = kind;
    g.params_ = params;
    g.seed_ = seed;
    return g;
  }

  int size() const noexcept { return static_cast<int>(weights_.rows()); }
  const Eigen::MatrixXd& weights() const noexcept { return weights_; }
  GraphKind kind() const noexcept { return kind_; }
  const GraphParams& params() const noexcept { return params_; }
  std::uint64_t seed() const noexcept { return seed_; }
  int component_count() const noexcept { return components_; }

  std::size_t edge_count() const {
    std::size_t count = 0;
    for (int i = 0; i < size(); ++i)
      for (int j = i + 1; j < size(); ++j) count += weights_(i, j) != 0.0;
    return count;
  }

 private:
  Graph() = default;

  Eigen::MatrixXd weights_;
  GraphKind kind_ = GraphKind::custom;
  GraphParams params_;
  std::uint64_t seed_ = 0;
  int components_ = 0;
};

namespace detail {

inline void check_lattice(int n, int k) {
  if (k < 2 || k % 2 != 0) throw ParameterError("k must be a positive even integer");
  if (k >= n) throw ParameterError("n too small for k: need k < n");
}

inline void add_edge(Eigen::MatrixXd& w, int i, int j) {
  w(i, j) = 1.0;
  w(j, i) = 1.0;
}

inline Eigen::MatrixXd ring_lattice(int n, int k) {
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int d = 1; d <= k / 2; ++d) add_edge(w, i, (i + d) % n);
  return w;
}

inline Eigen::MatrixXd erdos_renyi(int n, double p, Rng& rng) {
  if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("p must lie in [0, 1]");
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  std::bernoulli_distribution coin(p);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (coin(rng)) add_edge(w, i, j);
  return w;
}

// Unit square, open boundary, strict distance threshold.
inline Eigen::MatrixXd random_geometric(int n, double radius, Rng& rng) {
  if (!(radius > 0.0)) throw ParameterError("radius must be positive");
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> xs(n), ys(n);
  for (int i = 0; i < n; ++i) {
    xs[i] = unit(rng);
    ys[i] = unit(rng);
  }
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  const double r2 = radius * radius;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double dx = xs[i] - xs[j], dy = ys[i] - ys[j];
      if (dx * dx + dy * dy < r2) add_edge(w, i, j);
    }
  }
  return w;
}

// Watts-Strogatz: ring lattice, then every lattice edge (u, u+d) is rewired
// with probability `rewire` to (u, w) for a uniformly chosen non-neighbour w.
inline Eigen::MatrixXd watts_strogatz(int n, int k, double rewire, Rng& rng) {
  if (!(rewire >= 0.0 && rewire <= 1.0)) throw ParameterError("rewire must lie in [0, 1]");
  Eigen::MatrixXd w = ring_lattice(n, k);
  Eigen::VectorXd degree = w.rowwise().sum();
  std::bernoulli_distribution coin(rewire);
  std::uniform_int_distribution<int> pick(0, n - 1);
  for (int d = 1; d <= k / 2; ++d) {
    for (int u = 0; u < n; ++u) {
      if (!coin(rng)) continue;
      if (degree(u) >= n - 1) continue;
      int target = pick(rng);
      while (target == u || w(u, target) != 0.0) target = pick(rng);
      const int old = (u + d) % n;
      w(u, old) = w(old, u) = 0.0;
      degree(old) -= 1.0;
      degree(target) += 1.0;
      add_edge(w, u, target);
    }
  }
  return w;
}

// Barabasi-Albert: start from one edge between nodes 0 and 1; each new node
// links to min(attach, existing) distinct nodes chosen proportionally to degree.
inline Eigen::MatrixXd barabasi_albert(int n, int attach, Rng& rng) {
  if (attach < 1) throw ParameterError("attach must be at least 1");
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  add_edge(w, 0, 1);
  std::vector<int> endpoints{0, 1};  // node i appears deg(i) times
  std::vector<int> targets;
  for (int v = 2; v < n; ++v) {
    const auto wanted = static_cast<std::size_t>(std::min(attach, v));
    targets.clear();
    std::uniform_int_distribution<std::size_t> pick(0, endpoints.size() - 1);
    while (targets.size() < wanted) {
      const int t = endpoints[pick(rng)];
      if (std::find(targets.begin(), targets.end(), t) == targets.end()) targets.push_back(t);
    }
    for (int t : targets) {
      add_edge(w, v, t);
      endpoints.push_back(t);
      endpoints.push_back(v);
    }
  }
  return w;
}

}  // namespace detail

// Builds an unweighted graph of the requested family. Output is a pure
// function of (kind, n, params, seed). Connectivity is not forced; see
// Graph::component_count().
inline Graph generate_graph(GraphKind kind, int n, const GraphParams& params, std::uint64_t seed) {
  if (n < 2) throw ParameterError("n must be at least 2");
  const GraphParams p = resolve_params(kind, params);
  Rng rng(seed);
  Eigen::MatrixXd w;
  switch (kind) {
    case GraphKind::ring:
      detail::check_lattice(n, *p.k);
      w = detail::ring_lattice(n, *p.k);
      break;
    case GraphKind::erdos_renyi:
      w = detail::erdos_renyi(n, *p.p, rng);
      break;
    case GraphKind::geometric:
      w = detail::random_geometric(n, *p.radius, rng);
      break;
    case GraphKind::small_world:
      detail::check_lattice(n, *p.k);
      w = detail::watts_strogatz(n, *p.k, *p.rewire, rng);
      break;
    case GraphKind::power_law:
      w = detail::barabasi_albert(n, *p.attach, rng);
      break;
    case GraphKind::custom:
      throw ParameterError("custom graphs are built with Graph::from_weights");
  }
  return Graph::from_weights(std::move(w), kind, p, seed);
}

inline Eigen::VectorXd degree_vector(const Graph& g) { return g.weights().rowwise().sum(); }

}  // namespace graphsamp
