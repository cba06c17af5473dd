#include <gtest/gtest.h>

#include "support.hpp"

using namespace graphsamp;

namespace {

SamplingScores fixed(Eigen::VectorXd pi) {
  SamplingScores s;
  s.pi = std::move(pi);
  return s;
}

SpectralBasis basis_of(GraphKind kind, int n, std::uint64_t seed = 1) {
  GraphParams p;
  if (kind == GraphKind::erdos_renyi) p.p = 0.05;
  if (kind == GraphKind::geometric) p.radius = 0.12;
  if (kind == GraphKind::small_world) p.rewire = 0.1;
  return analyze_graph(generate_graph(kind, n, p, seed)).basis;
}

}  // namespace

TEST(ExactMse, DecompositionAndUpperBound) {
  std::mt19937_64 rng(1);
  for (const Graph& g : testing_support::family_graphs(60)) {
    const auto basis = analyze_graph(g).basis;
    for (int t = 0; t < 5; ++t) {
      const GraphSignal x = synthesize_blt(basis, 6, 1.0, rng());
      for (auto s : {Strategy::uniform, Strategy::leverage, Strategy::sqrt_leverage}) {
        const auto scores = make_scores(s, basis, 8);
        const auto r = exact_mse(basis, x, 8, scores, 40, 0.01, 1.0, 6);
        EXPECT_NEAR(r.exact_mse, r.bias_sq + r.variance, 1e-10);
        EXPECT_LE(r.exact_mse, r.upper_bound + 1e-10);
        EXPECT_GE(r.variance, -1e-12);
      }
    }
  }
}

TEST(ExactMse, FullBandHasNoBias) {
  const auto basis = basis_of(GraphKind::power_law, 30);
  std::mt19937_64 rng(2);
  const GraphSignal x{testing_support::gaussian_vector(30, rng)};
  EXPECT_EQ(exact_mse(basis, x, 30, make_scores(Strategy::uniform, basis, 30), 10, 0.0).bias_sq, 0.0);
}

TEST(ExactMse, NoiseOnly) {
  const auto basis = basis_of(GraphKind::ring, 40);
  const GraphSignal zero{Eigen::VectorXd::Zero(40)};
  const auto r = exact_mse(basis, zero, 7, make_scores(Strategy::uniform, basis, 7), 25, 0.2);
  // sum_i lev_i sigma^2 / (m / n) = sigma^2 n kappa / m
  EXPECT_NEAR(r.exact_mse, 0.2 * 40 * 7 / 25.0, 1e-12);
  const auto mc = monte_carlo_mse(Estimator::sample_proj, basis, zero, 7, make_scores(Strategy::uniform, basis, 7), 25,
                                  0.2, 4000, 5);
  EXPECT_LE(std::abs(mc.mean - r.exact_mse), 3.0 * mc.std_error);
}

TEST(ExactMse, ZeroProbabilityWithBandEnergy) {
  const auto basis = analyze_graph(testing_support::path_graph(4)).basis;
  const GraphSignal x{Eigen::Vector4d(1, 2, 3, 4)};
  EXPECT_THROW(exact_mse(basis, x, 2, fixed(Eigen::Vector4d(0.5, 0.5, 0, 0)), 3, 0.1), InfiniteVarianceError);
  EXPECT_THROW(exact_mse(basis, x, 0, fixed(Eigen::Vector4d::Constant(0.25)), 3, 0.1), ParameterError);
  EXPECT_THROW(exact_mse(basis, x, 2, fixed(Eigen::Vector4d::Constant(0.25)), 0, 0.1), ParameterError);
}

TEST(ExactMse, MonteCarloAgreement) {
  struct Case {
    GraphKind kind;
    Strategy strategy;
    Estimator estimator;
  };
  for (auto c : {Case{GraphKind::ring, Strategy::uniform, Estimator::sample_proj},
                 Case{GraphKind::power_law, Strategy::leverage, Estimator::sample_proj},
                 Case{GraphKind::small_world, Strategy::sqrt_leverage, Estimator::sample_proj}}) {
    const auto basis = basis_of(c.kind, 100, 3);
    const GraphSignal x = synthesize_blt(basis, 5, 1.0, 4);
    const auto scores = make_scores(c.strategy, basis, 8);
    const auto exact = exact_mse(basis, x, 8, scores, 60, 0.01).exact_mse;
    const auto mc = monte_carlo_mse(c.estimator, basis, x, 8, scores, 60, 0.01, 3000, 17);
    EXPECT_LE(std::abs(mc.mean - exact), 3.0 * mc.std_error) << to_string(c.kind);
  }
}

TEST(MonteCarlo, DeterministicAndScalesWithTrials) {
  const auto basis = basis_of(GraphKind::erdos_renyi, 80, 2);
  const GraphSignal x = synthesize_blt(basis, 5, 1.0, 9);
  const auto scores = make_scores(Strategy::leverage, basis, 6);
  const auto a = monte_carlo_mse(Estimator::sample_proj, basis, x, 6, scores, 40, 0.01, 2000, 3);
  const auto b = monte_carlo_mse(Estimator::sample_proj, basis, x, 6, scores, 40, 0.01, 2000, 3);
  EXPECT_EQ(a.mean, b.mean);
  EXPECT_EQ(a.std_error, b.std_error);
  const auto four = monte_carlo_mse(Estimator::sample_proj, basis, x, 6, scores, 40, 0.01, 8000, 3);
  // four times the trials halves the standard error
  EXPECT_NEAR(four.std_error / a.std_error, 0.5, 0.1);
  EXPECT_THROW(monte_carlo_mse(Estimator::sample_proj, basis, x, 6, scores, 40, 0.01, 1, 3), ParameterError);
}

TEST(MonteCarlo, PerfectRecoveryIsExact) {
  const auto basis = basis_of(GraphKind::geometric, 60, 4);
  std::mt19937_64 rng(3);
  const GraphSignal x = testing_support::random_bandlimited(basis, 5, rng);
  const auto nodes = full_rank_sample_set(basis, 5);
  Eigen::VectorXd pi = Eigen::VectorXd::Zero(60);
  for (int v : nodes) pi(v) = 0.2;
  const auto mc = monte_carlo_mse(Estimator::sampling_theory, basis, x, 5, fixed(pi), 200, 0.0, 50, 1);
  EXPECT_LE(mc.mean, 1e-16);
}

TEST(CorollaryBounds, UniformBoundDominatesExactRisk) {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 20; ++t) {
    const auto basis = basis_of(t % 2 ? GraphKind::power_law : GraphKind::erdos_renyi, 50, 10 + t);
    const GraphSignal x = synthesize_blt(basis, 4, 1.0, rng());
    const int kappa = 4 + t % 5;
    const double sigma2 = 0.001 * (t + 1);
    const double exact = exact_mse(basis, x, kappa, make_scores(Strategy::uniform, basis, kappa), 30, sigma2).exact_mse;
    EXPECT_GE(corollary_bounds(basis, x, kappa, 30, sigma2, BoundKind::uniform), exact);
  }
}

TEST(CorollaryBounds, OptimalBeatsUniformOnHubGraph) {
  const auto basis = basis_of(GraphKind::power_law, 512, 5);
  const GraphSignal x = synthesize_blt(basis, 10, 1.0, 6);
  EXPECT_LT(corollary_bounds(basis, x, 20, 500, 1e-4, BoundKind::optimal),
            corollary_bounds(basis, x, 20, 500, 1e-4, BoundKind::uniform));
}

TEST(CorollaryBounds, PureNoise) {
  const auto basis = basis_of(GraphKind::power_law, 40, 5);
  const GraphSignal zero{Eigen::VectorXd::Zero(40)};
  const Eigen::VectorXd row_norms = basis.band(6).rowwise().norm();
  EXPECT_NEAR(corollary_bounds(basis, zero, 6, 12, 0.5, BoundKind::optimal),
              0.5 / 12 * row_norms.sum() * row_norms.sum(), 1e-12);
  EXPECT_NEAR(corollary_bounds(basis, zero, 6, 12, 0.5, BoundKind::uniform), 0.5 * 40 * 6 / 12.0, 1e-12);
}

// Random points on the simplex near the optimal scores never lower the trace.
TEST(OptimalScores, MinimizeVarianceTrace) {
  std::mt19937_64 rng(12);
  std::exponential_distribution<double> expo;
  for (auto kind : {GraphKind::ring, GraphKind::power_law, GraphKind::small_world}) {
    const auto basis = basis_of(kind, 64, 2);
    const GraphSignal x = synthesize_blt(basis, 6, 1.0, rng());
    ScoreInputs in;
    in.signal = &x;
    in.sigma2 = 0.01;
    const auto opt = make_scores(Strategy::optimal, basis, 8, in);
    const double best = variance_trace(basis, x, 8, opt.pi, 50, 0.01);
    for (int t = 0; t < 100; ++t) {
      Eigen::VectorXd dir(64);
      for (int i = 0; i < 64; ++i) dir(i) = expo(rng);
      const double mix = std::pow(10.0, -1.0 - 3.0 * t / 100.0);
      const Eigen::VectorXd pi = (1.0 - mix) * opt.pi + mix * dir / dir.sum();
      EXPECT_LE(best, variance_trace(basis, x, 8, pi, 50, 0.01));
    }
  }
}

TEST(LowerBound, NoSamples) {
  const auto basis = basis_of(GraphKind::ring, 64);
  const auto lb = minimax_lower_bound(basis, 4, 1.0, 2.0, 0.1, 0, 1.0, {}, Regime::uniform);
  EXPECT_EQ(lb.best_kappa0, 4);
  EXPECT_NEAR(lb.bound_value, 2.0 / 16.0, 1e-15);
}

TEST(LowerBound, DesignedIsTighterOnHubGraphs) {
  const auto basis = basis_of(GraphKind::power_law, 512, 5);
  BoundParams bp;
  bp.kappa0_grid = {10, 20, 40};
  for (int m : {100, 1000, 5000}) {
    const auto u = minimax_lower_bound(basis, 10, 1.0, 50.0, 1e-2, m, 1.0, bp, Regime::uniform);
    const auto d = minimax_lower_bound(basis, 10, 1.0, 50.0, 1e-2, m, 1.0, bp, Regime::designed);
    EXPECT_LE(d.bound_value, u.bound_value) << "m=" << m;
    EXPECT_GE(d.norm_term * 512, 0.0);
  }
  for (int k0 : {10, 20, 40}) {
    const auto block = basis.vectors.middleCols(k0, k0);
    EXPECT_GE(512 * block.rowwise().squaredNorm().maxCoeff(), block.squaredNorm());
  }
}

TEST(LowerBound, RingRegimesAgree) {
  const auto basis = basis_of(GraphKind::ring, 512);
  BoundParams bp;
  bp.kappa0_grid = {10, 20, 40};
  const auto u = minimax_lower_bound(basis, 10, 1.0, 50.0, 1e-2, 200, 1.0, bp, Regime::uniform);
  const auto d = minimax_lower_bound(basis, 10, 1.0, 50.0, 1e-2, 200, 1.0, bp, Regime::designed);
  const double ratio = u.bound_value / d.bound_value;
  EXPECT_GE(ratio, 0.8);
  EXPECT_LE(ratio, 1.25);
}

TEST(LowerBound, FactorIsClamped) {
  const auto basis = basis_of(GraphKind::ring, 64);
  const auto lb = minimax_lower_bound(basis, 4, 1.0, 10.0, 1e-9, 100000, 1.0, {}, Regime::designed);
  EXPECT_EQ(lb.bound_value, 0.0);
}

TEST(LowerBound, Errors) {
  const auto basis = basis_of(GraphKind::ring, 16);
  BoundParams bp;
  bp.kappa0_grid = {9};
  EXPECT_THROW(minimax_lower_bound(basis, 4, 1.0, 1.0, 0.1, 5, 1.0, bp, Regime::uniform), ParameterError);
  EXPECT_THROW(minimax_lower_bound(basis, 9, 1.0, 1.0, 0.1, 5, 1.0, {}, Regime::uniform), ParameterError);
  bp.kappa0_grid = {};
  bp.c = 1.5;
  EXPECT_THROW(minimax_lower_bound(basis, 4, 1.0, 1.0, 0.1, 5, 1.0, bp, Regime::uniform), ParameterError);
}

TEST(TypeDiagnostics, RingIsTypeOne) {
  const auto d = type_diagnostics(basis_of(GraphKind::ring, 1024), 20);
  EXPECT_LT(d.concentration_ratio, 3.0);
  EXPECT_EQ(d.verdict, GraphType::type1_like);
  EXPECT_NEAR(d.frobenius_sq, 20.0, 1e-8);
}

TEST(TypeDiagnostics, IdentityBasisIsTypeTwo) {
  SpectralBasis basis;
  basis.vectors = Eigen::MatrixXd::Identity(100, 100);
  basis.eigenvalues = Eigen::VectorXd::LinSpaced(100, 1.0, -1.0);
  const auto d = type_diagnostics(basis, 5);
  EXPECT_NEAR(d.concentration_ratio, 100.0 / 5.0, 1e-12);
  EXPECT_EQ(d.verdict, GraphType::type2_like);
  EXPECT_NEAR(d.max_abs_entry_scaled, 10.0, 1e-12);
  EXPECT_EQ(type_diagnostics(basis, 5, 25.0).verdict, GraphType::type1_like);
}

TEST(TypeDiagnostics, FrobeniusIsKappa0) {
  for (const Graph& g : testing_support::family_graphs(80)) {
    const auto d = type_diagnostics(analyze_graph(g).basis, 12);
    EXPECT_NEAR(d.frobenius_sq, 12.0, 1e-8);
    EXPECT_GE(d.concentration_ratio, 1.0 - 1e-12);
  }
  EXPECT_THROW(type_diagnostics(basis_of(GraphKind::ring, 20), 11), ParameterError);
}

TEST(SlopeFit, ExactPowerLaw) {
  std::vector<std::pair<double, double>> pts;
  for (double m : {100.0, 200.0, 400.0, 800.0, 1600.0}) pts.emplace_back(m, 3.0 * std::pow(m, -2.0 / 3.0));
  const auto fit = convergence_slope_fit(pts);
  EXPECT_NEAR(fit.slope, -2.0 / 3.0, 1e-10);
  EXPECT_NEAR(std::exp(fit.intercept), 3.0, 1e-9);
  EXPECT_NEAR(fit.r2, 1.0, 1e-12);
}

TEST(SlopeFit, ConstantAndErrors) {
  EXPECT_NEAR(convergence_slope_fit({{1, 2}, {2, 2}, {4, 2}}).slope, 0.0, 1e-15);
  EXPECT_THROW(convergence_slope_fit({{1, 2}, {2, 2}}), ParameterError);
  EXPECT_THROW(convergence_slope_fit({{1, 2}, {2, 0}, {3, 1}}), ParameterError);
  EXPECT_THROW(convergence_slope_fit({{1, 2}, {1, 1}, {3, 1}}), ParameterError);
}

TEST(Rates, Exponents) {
  EXPECT_NEAR(rate_exponent(1.0), -2.0 / 3.0, 1e-15);
  EXPECT_NEAR(rate_exponent(0.5), -0.5, 1e-15);
  EXPECT_NEAR(*type2_gamma(10000, 100), 2.0, 1e-12);
  EXPECT_FALSE(type2_gamma(100, 1).has_value());
}
