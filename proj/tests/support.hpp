#pragma once

#include <graphsamp.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <filesystem>
#include <random>
#include <string>

namespace testing_support {

inline graphsamp::Graph path_graph(int n) {
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i + 1 < n; ++i) w(i, i + 1) = w(i + 1, i) = 1.0;
  return graphsamp::Graph::from_weights(w);
}

// One small instance of every generated family.
inline std::vector<graphsamp::Graph> family_graphs(int n, std::uint64_t seed = 11) {
  using graphsamp::GraphKind;
  std::vector<graphsamp::Graph> out;
  graphsamp::GraphParams er;
  er.p = 0.1;
  graphsamp::GraphParams rgg;
  rgg.radius = 0.2;
  graphsamp::GraphParams ws;
  ws.rewire = 0.1;
  out.push_back(graphsamp::generate_graph(GraphKind::ring, n, {}, seed));
  out.push_back(graphsamp::generate_graph(GraphKind::erdos_renyi, n, er, seed));
  out.push_back(graphsamp::generate_graph(GraphKind::geometric, n, rgg, seed));
  out.push_back(graphsamp::generate_graph(GraphKind::small_world, n, ws, seed));
  out.push_back(graphsamp::generate_graph(GraphKind::power_law, n, {}, seed));
  return out;
}

inline Eigen::VectorXd gaussian_vector(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = g(rng);
  return v;
}

// x = V_K c for Gaussian c.
inline graphsamp::GraphSignal random_bandlimited(const graphsamp::SpectralBasis& basis, int K, std::mt19937_64& rng) {
  return graphsamp::GraphSignal{basis.band(K) * gaussian_vector(K, rng)};
}

class TempDir {
 public:
  explicit TempDir(const std::string& name) : path_(std::filesystem::temp_directory_path() / ("graphsamp_" + name)) {
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace testing_support
