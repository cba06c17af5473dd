#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "graphsamp/error.hpp"
#include "graphsamp/graph.hpp"
#include "graphsamp/rng.hpp"
#include "graphsamp/signal.hpp"
#include "graphsamp/spectral.hpp"

namespace graphsamp {

enum class Strategy { uniform, leverage, sqrt_leverage, degree, optimal };

inline std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::uniform: return "uniform";
    case Strategy::leverage: return "leverage";
    case Strategy::sqrt_leverage: return "sqrt_leverage";
    case Strategy::degree: return "degree";
    case Strategy::optimal: return "optimal";
  }
  return "uniform";
}

inline Strategy parse_strategy(std::string_view tag) {
  for (auto s : {Strategy::uniform, Strategy::leverage, Strategy::sqrt_leverage, Strategy::degree,
                 Strategy::optimal}) {
    if (tag == to_string(s)) return s;
  }
  throw ParameterError("unknown sampling strategy '" + std::string(tag) + "'");
}

// True for strategies whose scores are built from the band of the basis.
inline bool uses_band(Strategy s) {
  return s == Strategy::leverage || s == Strategy::sqrt_leverage || s == Strategy::optimal;
}

struct SamplingScores {
  Eigen::VectorXd pi;
  Strategy strategy = Strategy::uniform;
  int kappa = 0;                 // band used, 0 when not applicable
  std::optional<double> sigma2;  // noise level, optimal scores only

  int size() const noexcept { return static_cast<int>(pi.size()); }
};

// Optional inputs to make_scores. `graph` is needed for degree scores,
// `signal` and `sigma2` for optimal scores. A positive `floor` clamps every
// probability to at least that value before renormalizing (off by default).
struct ScoreInputs {
  const Graph* graph = nullptr;
  const GraphSignal* signal = nullptr;
  std::optional<double> sigma2;
  double floor = 0.0;
};

namespace detail {

inline Eigen::VectorXd normalize_scores(Eigen::VectorXd raw) {
  if (!raw.allFinite() || (raw.array() < 0.0).any()) throw NumericError("scores must be finite and nonnegative");
  const double total = raw.sum();
  if (!(total > 0.0)) throw DegenerateError("all sampling scores are zero");
  return raw / total;
}

}  // namespace detail

inline SamplingScores make_scores(Strategy strategy, const SpectralBasis& basis, int kappa,
                                  const ScoreInputs& in = {}) {
  const int n = basis.size();
  SamplingScores out;
  out.strategy = strategy;
  Eigen::VectorXd raw;
  switch (strategy) {
    case Strategy::uniform:
      raw = Eigen::VectorXd::Ones(n);
      break;
    case Strategy::leverage:
      raw = leverage_scores(basis, kappa);
      break;
    case Strategy::sqrt_leverage:
      raw = leverage_scores(basis, kappa).cwiseSqrt();
      break;
    case Strategy::degree:
      if (in.graph == nullptr) throw ParameterError("degree scores need the graph");
      if (in.graph->size() != n) throw ParameterError("graph size does not match the basis");
      raw = degree_vector(*in.graph);
      break;
    case Strategy::optimal: {
      if (in.signal == nullptr || !in.sigma2) throw ParameterError("optimal scores need the signal and sigma2");
      if (in.signal->size() != n) throw ParameterError("signal length does not match the basis");
      if (*in.sigma2 < 0.0) throw ParameterError("sigma2 must be nonnegative");
      const Eigen::ArrayXd energy = in.signal->values.array().square() + *in.sigma2;
      raw = (leverage_scores(basis, kappa).array() * energy).sqrt().matrix();
      out.sigma2 = in.sigma2;
      break;
    }
  }
  if (uses_band(strategy)) out.kappa = kappa;
  out.pi = detail::normalize_scores(std::move(raw));
  if (in.floor > 0.0) {
    if (in.floor * n >= 1.0) throw ParameterError("score floor must be below 1/n");
    out.pi = detail::normalize_scores(out.pi.cwiseMax(in.floor));
  }
  return out;
}

// Ordered draw with repeats: observations(j) = x(indices[j]) + noise_j.
struct SampleDraw {
  std::vector<int> indices;
  Eigen::VectorXd observations;
  double sigma2 = 0.0;
  std::uint64_t seed = 0;

  int size() const noexcept { return static_cast<int>(indices.size()); }
};

// Independent streams for node selection and for noise, so a caller can
// reuse the noise across strategies while drawing indices separately.
struct DrawSeeds {
  std::uint64_t index = 0;
  std::uint64_t noise = 0;

  static DrawSeeds from(std::uint64_t seed) { return {mix_seed(seed, 0), mix_seed(seed, 1)}; }
};

inline SampleDraw draw_samples(const GraphSignal& x, const SamplingScores& scores, int m, double sigma2,
                               DrawSeeds seeds) {
  if (m < 1) throw ParameterError("m must be at least 1");
  if (!(sigma2 >= 0.0)) throw ParameterError("sigma2 must be nonnegative");
  if (x.size() != scores.size()) throw ParameterError("signal length does not match the scores");

  SampleDraw out;
  out.sigma2 = sigma2;
  out.indices.resize(m);
  out.observations.resize(m);

  Rng index_rng(seeds.index);
  std::discrete_distribution<int> pick(scores.pi.data(), scores.pi.data() + scores.pi.size());
  for (int j = 0; j < m; ++j) out.indices[j] = pick(index_rng);

  Rng noise_rng(seeds.noise);
  std::normal_distribution<double> noise(0.0, std::sqrt(sigma2));
  for (int j = 0; j < m; ++j) {
    out.observations(j) = x.values(out.indices[j]);
    if (sigma2 > 0.0) out.observations(j) += noise(noise_rng);
  }
  return out;
}

inline SampleDraw draw_samples(const GraphSignal& x, const SamplingScores& scores, int m, double sigma2,
                               std::uint64_t seed) {
  SampleDraw out = draw_samples(x, scores, m, sigma2, DrawSeeds::from(seed));
  out.seed = seed;
  return out;
}

}  // namespace graphsamp
