#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "graphsamp/error.hpp"
#include "graphsamp/parallel.hpp"
#include "graphsamp/recovery.hpp"
#include "graphsamp/rng.hpp"
#include "graphsamp/sampling.hpp"
#include "graphsamp/signal.hpp"
#include "graphsamp/spectral.hpp"

namespace graphsamp {

// Closed-form risk of the sampled projection estimator.
struct RiskReport {
  double exact_mse = 0.0;
  double bias_sq = 0.0;      // energy outside the band
  double variance = 0.0;     // trace term minus ||xhat_band||^2 / m
  double upper_bound = 0.0;  // tail bound on the bias plus the trace term
  int m = 0;
  int kappa = 0;
  double sigma2 = 0.0;
  Strategy strategy = Strategy::uniform;
};

namespace detail {

// Rows of the band below this leverage carry no estimator weight, so a zero
// sampling probability there is harmless.
inline constexpr double kNegligibleLeverage = 1e-20;

inline void check_risk_inputs(const SpectralBasis& basis, const GraphSignal& x, int kappa, int m, double sigma2) {
  if (x.size() != basis.size()) throw ParameterError("signal length does not match the basis");
  if (kappa < 1 || kappa > basis.size()) throw ParameterError("kappa must lie in [1, n]");
  if (m < 1) throw ParameterError("m must be at least 1");
  if (!(sigma2 >= 0.0)) throw ParameterError("sigma2 must be nonnegative");
}

// mu_min(K) ||x||^2 / (1 + kappa^{2 beta}) written without dividing by ||x||.
inline double tail_bias_bound(const Eigen::VectorXd& xhat, int class_k, int kappa, double beta) {
  return weighted_tail(xhat, class_k, beta) / (1.0 + std::pow(static_cast<double>(kappa), 2.0 * beta));
}

inline int resolve_class_k(std::optional<int> class_k, int kappa) {
  const int k = class_k.value_or(kappa);
  if (k < 0 || k > kappa) throw ParameterError("class bandwidth K must lie in [0, kappa]");
  return k;
}

}  // namespace detail

// Tr(U_k W_C V_k) = sum_i ||v_{i,(k)}||^2 (x_i^2 + sigma^2) / (m pi_i).
inline double variance_trace(const SpectralBasis& basis, const GraphSignal& x, int kappa, const Eigen::VectorXd& pi,
                             int m, double sigma2) {
  detail::check_risk_inputs(basis, x, kappa, m, sigma2);
  if (pi.size() != basis.size()) throw ParameterError("scores do not match the basis");
  const Eigen::VectorXd lev = leverage_scores(basis, kappa);
  double trace = 0.0;
  for (Eigen::Index i = 0; i < lev.size(); ++i) {
    if (lev(i) <= detail::kNegligibleLeverage) continue;
    const double energy = x.values(i) * x.values(i) + sigma2;
    if (energy == 0.0) continue;
    if (!(pi(i) > 0.0))
      throw InfiniteVarianceError("node " + std::to_string(i) + " has zero probability but carries band energy");
    trace += lev(i) * energy / (m * pi(i));
  }
  return trace;
}

// Exact MSE and its bias/variance split. The upper bound uses the smallest
// tail budget mu at class bandwidth `class_k` (default: kappa).
inline RiskReport exact_mse(const SpectralBasis& basis, const GraphSignal& x, int kappa, const SamplingScores& scores,
                            int m, double sigma2, double beta = 1.0, std::optional<int> class_k = std::nullopt) {
  detail::check_risk_inputs(basis, x, kappa, m, sigma2);
  const int k = detail::resolve_class_k(class_k, kappa);
  const Eigen::VectorXd xhat = gft(basis, x).coeffs;
  const double trace = variance_trace(basis, x, kappa, scores.pi, m, sigma2);

  RiskReport r;
  r.m = m;
  r.kappa = kappa;
  r.sigma2 = sigma2;
  r.strategy = scores.strategy;
  r.bias_sq = xhat.tail(basis.size() - kappa).squaredNorm();
  r.variance = trace - xhat.head(kappa).squaredNorm() / m;
  r.exact_mse = r.bias_sq + r.variance;
  r.upper_bound = detail::tail_bias_bound(xhat, k, kappa, beta) + trace;
  return r;
}

enum class BoundKind { uniform, optimal };

// MSE bound for uniform scores, or for the signal-aware optimal scores.
inline double corollary_bounds(const SpectralBasis& basis, const GraphSignal& x, int kappa, int m, double sigma2,
                               BoundKind which, double beta = 1.0, std::optional<int> class_k = std::nullopt) {
  detail::check_risk_inputs(basis, x, kappa, m, sigma2);
  const int k = detail::resolve_class_k(class_k, kappa);
  const Eigen::VectorXd xhat = gft(basis, x).coeffs;
  const Eigen::ArrayXd lev = leverage_scores(basis, kappa).array();
  const Eigen::ArrayXd energy = x.values.array().square() + sigma2;
  const double bias = detail::tail_bias_bound(xhat, k, kappa, beta);
  if (which == BoundKind::uniform) return bias + static_cast<double>(basis.size()) / m * (lev * energy).sum();
  const double root_sum = (lev * energy).sqrt().sum();
  return bias + root_sum * root_sum / m;
}

// ---------------------------------------------------------------------------
// Minimax lower bounds

enum class Regime { uniform, designed };

inline std::string_view to_string(Regime r) { return r == Regime::uniform ? "uniform" : "designed"; }

struct BoundParams {
  double c1 = 1.0;
  double c = 0.5;
  std::vector<int> kappa0_grid;  // empty: every feasible kappa0 in [K, N/2]
};

struct LowerBound {
  int best_kappa0 = 0;
  double bound_value = 0.0;
  double norm_term = 0.0;  // S at best_kappa0
};

// Columns kappa0 .. 2 kappa0 - 1 of the basis.
inline auto second_band(const SpectralBasis& basis, int kappa0) { return basis.vectors.middleCols(kappa0, kappa0); }

// Up-to-constants lower bound on the normalized worst-case risk:
//   max_{kappa0} c1 mu / kappa0^{2b} * max(0, 1 - c mu ||x||^2 S m / (sigma^2 kappa0^{2b+2}))
// with S = ||V_(2,kappa0)||_F^2 / N (uniform) or the largest squared row norm
// of V_(2,kappa0) (designed; active sampling has the same bound).
inline LowerBound minimax_lower_bound(const SpectralBasis& basis, int K, double beta, double mu, double sigma2,
                                      int m, double norm_x, const BoundParams& params, Regime regime) {
  const int n = basis.size();
  if (K < 1) throw ParameterError("K must be at least 1");
  if (mu < 0.0 || sigma2 < 0.0 || m < 0 || norm_x < 0.0) throw ParameterError("negative bound parameter");
  if (!(params.c1 > 0.0) || !(params.c > 0.0 && params.c < 1.0)) throw ParameterError("need c1 > 0 and 0 < c < 1");

  std::vector<int> grid = params.kappa0_grid;
  if (grid.empty()) {
    for (int k0 = K; 2 * k0 <= n; ++k0) grid.push_back(k0);
  } else {
    for (int k0 : grid)
      if (k0 < K || 2 * k0 > n) throw ParameterError("kappa0 = " + std::to_string(k0) + " violates K <= kappa0, 2 kappa0 <= N");
  }
  if (grid.empty()) throw ParameterError("no feasible kappa0: need K <= kappa0 and 2 kappa0 <= N");

  LowerBound best;
  best.bound_value = -1.0;
  for (int k0 : grid) {
    const auto block = second_band(basis, k0);
    const double s = regime == Regime::uniform ? block.squaredNorm() / n : block.rowwise().squaredNorm().maxCoeff();
    const double lead = params.c1 * mu / std::pow(k0, 2.0 * beta);
    double factor = 1.0;
    if (m > 0) {
      if (sigma2 == 0.0) {
        factor = 0.0;
      } else {
        const double shrink = params.c * mu * norm_x * norm_x * s * m / (sigma2 * std::pow(k0, 2.0 * beta + 2.0));
        factor = std::max(0.0, 1.0 - shrink);
      }
    }
    const double value = lead * factor;
    if (value > best.bound_value) best = LowerBound{k0, value, s};
  }
  return best;
}

// ---------------------------------------------------------------------------
// Graph type diagnostics

enum class GraphType { type1_like, type2_like };

inline std::string_view to_string(GraphType t) { return t == GraphType::type1_like ? "type1-like" : "type2-like"; }

struct TypeDiagnostics {
  double max_abs_entry_scaled = 0.0;  // sqrt(N) max |V_ij|
  double frobenius_sq = 0.0;          // ||V_(2,kappa0)||_F^2, equals kappa0
  double max_row_sq = 0.0;            // ||V_(2,kappa0)||_{inf,2}^2
  double concentration_ratio = 0.0;   // N max_row_sq / frobenius_sq, >= 1
  GraphType verdict = GraphType::type1_like;
};

inline constexpr double kDefaultTypeThreshold = 10.0;

inline TypeDiagnostics type_diagnostics(const SpectralBasis& basis, int kappa0,
                                        double threshold = kDefaultTypeThreshold) {
  const int n = basis.size();
  if (kappa0 < 1 || 2 * kappa0 > n) throw ParameterError("kappa0 must satisfy 1 <= kappa0 and 2 kappa0 <= N");
  const auto block = second_band(basis, kappa0);
  TypeDiagnostics d;
  d.max_abs_entry_scaled = std::sqrt(static_cast<double>(n)) * basis.vectors.cwiseAbs().maxCoeff();
  d.frobenius_sq = block.squaredNorm();
  d.max_row_sq = block.rowwise().squaredNorm().maxCoeff();
  d.concentration_ratio = n * d.max_row_sq / d.frobenius_sq;
  d.verdict = d.concentration_ratio > threshold ? GraphType::type2_like : GraphType::type1_like;
  return d;
}

// ---------------------------------------------------------------------------
// Monte-Carlo risk

struct MonteCarloResult {
  double mean = 0.0;
  double std_error = 0.0;
  int trials = 0;
  int rank_deficient_trials = 0;
};

// Squared error of one trial seeded by mix_seed(master_seed, trial).
inline std::pair<double, bool> monte_carlo_trial(Estimator estimator, const SpectralBasis& basis, const GraphSignal& x,
                                                 int kappa, const SamplingScores& scores, int m, double sigma2,
                                                 std::uint64_t master_seed, std::uint64_t trial) {
  const SampleDraw draw = draw_samples(x, scores, m, sigma2, mix_seed(master_seed, trial));
  const Estimate est = recover(estimator, basis, kappa, draw, scores);
  return {(est.values - x.values).squaredNorm(), est.rank_deficient};
}

inline MonteCarloResult summarize_errors(const std::vector<double>& errors) {
  MonteCarloResult r;
  r.trials = static_cast<int>(errors.size());
  double sum = 0.0;
  for (double e : errors) sum += e;
  r.mean = sum / r.trials;
  double ss = 0.0;
  for (double e : errors) ss += (e - r.mean) * (e - r.mean);
  r.std_error = r.trials > 1 ? std::sqrt(ss / (r.trials - 1) / r.trials) : 0.0;
  return r;
}

inline MonteCarloResult monte_carlo_mse(Estimator estimator, const SpectralBasis& basis, const GraphSignal& x,
                                        int kappa, const SamplingScores& scores, int m, double sigma2, int trials,
                                        std::uint64_t master_seed) {
  if (trials < 2) throw ParameterError("need at least 2 trials");
  std::vector<double> errors(trials);
  std::vector<char> deficient(trials, 0);
  parallel_for(static_cast<std::size_t>(trials), [&](std::size_t t) {
    auto [err, def] = monte_carlo_trial(estimator, basis, x, kappa, scores, m, sigma2, master_seed, t);
    errors[t] = err;
    deficient[t] = def;
  });
  MonteCarloResult r = summarize_errors(errors);
  for (char d : deficient) r.rank_deficient_trials += d;
  return r;
}

// ---------------------------------------------------------------------------
// Convergence rates

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

// Least-squares line through (log m, log mse).
inline SlopeFit convergence_slope_fit(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 3) throw ParameterError("slope fit needs at least 3 points");
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!(points[i].second > 0.0)) throw ParameterError("mse values must be positive");
    if (!(points[i].first > 0.0)) throw ParameterError("m values must be positive");
    if (i > 0 && !(points[i].first > points[i - 1].first)) throw ParameterError("m values must be strictly increasing");
  }
  const auto n = static_cast<double>(points.size());
  double sx = 0, sy = 0;
  for (auto [m, e] : points) {
    sx += std::log(m);
    sy += std::log(e);
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (auto [m, e] : points) {
    const double dx = std::log(m) - mx, dy = std::log(e) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  SlopeFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  const double ss_res = syy - fit.slope * sxy;
  fit.r2 = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  return fit;
}

// Optimal exponent -2 beta / (2 beta + gamma); gamma = 1 for designed sampling
// and for uniform sampling on Type-1 graphs.
inline double rate_exponent(double beta, double gamma = 1.0) { return -2.0 * beta / (2.0 * beta + gamma); }

// gamma = log N / log kappa for uniform sampling on Type-2 graphs; undefined
// for kappa <= 1.
inline std::optional<double> type2_gamma(int n, int kappa) {
  if (kappa <= 1) return std::nullopt;
  return std::log(static_cast<double>(n)) / std::log(static_cast<double>(kappa));
}

}  // namespace graphsamp
