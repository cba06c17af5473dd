#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <random>

#include "graphsamp/error.hpp"
#include "graphsamp/rng.hpp"
#include "graphsamp/spectral.hpp"

namespace graphsamp {

// Vertex-domain signal x.
struct GraphSignal {
  Eigen::VectorXd values;

  int size() const noexcept { return static_cast<int>(values.size()); }
};

// Frequency-domain signal, coefficients ordered like the basis eigenvalues.
struct SpectralSignal {
  Eigen::VectorXd coeffs;

  int size() const noexcept { return static_cast<int>(coeffs.size()); }
};

// Smoothness-class parameters: bandwidth K, tail decay beta, tail budget mu,
// global smoothness budget eta.
struct ClassParams {
  int K = 1;
  double beta = 1.0;
  double mu = 0.0;
  double eta = 0.0;
};

inline SpectralSignal gft(const SpectralBasis& basis, const GraphSignal& x) {
  if (x.size() != basis.size()) throw ParameterError("signal length does not match the basis");
  return SpectralSignal{basis.vectors.transpose() * x.values};
}

inline GraphSignal igft(const SpectralBasis& basis, const SpectralSignal& xhat) {
  if (xhat.size() != basis.size()) throw ParameterError("coefficient length does not match the basis");
  return GraphSignal{basis.vectors * xhat.coeffs};
}

// ||x - A x||^2 / ||x||^2: the smallest eta for which x is globally smooth.
inline double smoothness_quadratic(const NormalizedShift& shift, const GraphSignal& x) {
  if (x.size() != shift.size()) throw ParameterError("signal length does not match the shift");
  const double energy = x.values.squaredNorm();
  if (energy == 0.0) throw DegenerateError("smoothness of the zero signal is undefined");
  return (x.values - shift.matrix * x.values).squaredNorm() / energy;
}

namespace detail {

// sum_{k >= K} (1 + k^{2 beta}) c_k^2, with K allowed to equal the length.
inline double weighted_tail(const Eigen::VectorXd& coeffs, int K, double beta) {
  double sum = 0.0;
  for (Eigen::Index k = K; k < coeffs.size(); ++k)
    sum += (1.0 + std::pow(static_cast<double>(k), 2.0 * beta)) * coeffs(k) * coeffs(k);
  return sum;
}

}  // namespace detail

// Smallest mu with x in the approximately bandlimited class at (K, beta).
inline double blt_min_mu(const SpectralSignal& xhat, int K, double beta) {
  if (K < 0 || K > xhat.size() - 1) throw ParameterError("K must lie in [0, N-1]");
  if (!(beta >= 0.5)) throw ParameterError("beta must be at least 0.5");
  const double energy = xhat.coeffs.squaredNorm();
  if (energy == 0.0) throw DegenerateError("tail ratio of the zero signal is undefined");
  return detail::weighted_tail(xhat.coeffs, K, beta) / energy;
}

// Denominator used for the globally-smooth -> approximately-bandlimited
// threshold. kSquared is the value the embedding argument establishes;
// kStatement is the unsquared variant.
enum class MuDenominator { kSquared, kStatement };

struct ClassThresholds {
  double eta_from_blt = 0.0;  // BLT(K, beta, mu) is inside GS(eta) for eta >= this
  double mu_from_gs = 0.0;    // GS(eta) is inside BLT(K, beta, mu) for mu >= this
  double eta_from_bl = 0.0;   // BL(K) is inside GS(eta) for eta >= this
};

inline ClassThresholds class_thresholds(const ClassParams& params, const Eigen::VectorXd& eigenvalues,
                                        MuDenominator form = MuDenominator::kSquared) {
  const auto n = static_cast<int>(eigenvalues.size());
  if (params.K < 1 || params.K > n - 1) throw ParameterError("K must lie in [1, N-1]");
  if (!(params.beta >= 0.5)) throw ParameterError("beta must be at least 0.5");
  if (params.mu < 0.0 || params.eta < 0.0) throw ParameterError("mu and eta must be nonnegative");

  const double gap_head = 1.0 - eigenvalues(params.K - 1);
  const double gap_tail = 1.0 - eigenvalues(params.K);
  ClassThresholds out;
  out.eta_from_bl = gap_head * gap_head;
  const double tail = std::sqrt(4.0 * params.mu / (1.0 + std::pow(params.K, 2.0 * params.beta)));
  out.eta_from_blt = (gap_head + tail) * (gap_head + tail);
  if (std::abs(gap_tail) < 1e-14) throw DegenerateError("lambda_K = 1: globally smooth threshold is unbounded");
  const double denom = form == MuDenominator::kSquared ? gap_tail * gap_tail : gap_tail;
  out.mu_from_gs = (1.0 + std::pow(n - 1.0, 2.0 * params.beta)) * params.eta / denom;
  return out;
}

// Spectrum of the synthetic approximately bandlimited signal: head
// coefficients k < K drawn N(1, 0.5^2), tail coefficients K^{2b} / k^{2b},
// normalized to unit norm.
inline SpectralSignal synthesize_blt_spectrum(int n, int K, double beta, std::uint64_t seed) {
  if (K < 1 || K > n) throw ParameterError("K must lie in [1, N]");
  if (!(beta > 0.0)) throw ParameterError("beta must be positive");
  Rng rng(seed);
  std::normal_distribution<double> head(1.0, 0.5);
  Eigen::VectorXd c(n);
  for (int k = 0; k < K; ++k) c(k) = head(rng);
  const double kb = std::pow(static_cast<double>(K), 2.0 * beta);
  for (int k = K; k < n; ++k) c(k) = kb / std::pow(static_cast<double>(k), 2.0 * beta);
  const double norm = c.norm();
  if (norm == 0.0) throw DegenerateError("synthesized spectrum vanished");
  return SpectralSignal{c / norm};
}

inline GraphSignal synthesize_blt(const SpectralBasis& basis, int K, double beta, std::uint64_t seed) {
  return igft(basis, synthesize_blt_spectrum(basis.size(), K, beta, seed));
}

}  // namespace graphsamp
