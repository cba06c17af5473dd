#include <gtest/gtest.h>

#include "support.hpp"

using namespace graphsamp;

namespace {

double skewness(const Eigen::VectorXd& v) {
  const double mean = v.mean();
  const Eigen::ArrayXd d = v.array() - mean;
  const double var = d.square().mean();
  return d.cube().mean() / std::pow(var, 1.5);
}

SamplingScores fixed(Eigen::VectorXd pi) {
  SamplingScores s;
  s.pi = std::move(pi);
  return s;
}

}  // namespace

TEST(Scores, UniformOnFourNodes) {
  const auto basis = analyze_graph(testing_support::path_graph(4)).basis;
  const auto s = make_scores(Strategy::uniform, basis, 2);
  for (int i = 0; i < 4; ++i) EXPECT_DOUBLE_EQ(s.pi(i), 0.25);
  EXPECT_EQ(s.kappa, 0);
}

TEST(Scores, EveryStrategyIsADistribution) {
  std::mt19937_64 rng(2);
  for (const Graph& g : testing_support::family_graphs(80)) {
    const auto basis = analyze_graph(g).basis;
    const GraphSignal x{testing_support::gaussian_vector(80, rng)};
    ScoreInputs in;
    in.graph = &g;
    in.signal = &x;
    in.sigma2 = 0.01;
    for (auto s : {Strategy::uniform, Strategy::leverage, Strategy::sqrt_leverage, Strategy::degree,
                   Strategy::optimal}) {
      const auto scores = make_scores(s, basis, 9, in);
      EXPECT_NEAR(scores.pi.sum(), 1.0, 1e-10) << to_string(s);
      EXPECT_GE(scores.pi.minCoeff(), 0.0) << to_string(s);
      EXPECT_EQ(scores.strategy, s);
    }
  }
}

TEST(Scores, ProportionalToTheirDefinitions) {
  const Graph g = generate_graph(GraphKind::power_law, 50, {}, 9);
  const auto basis = analyze_graph(g).basis;
  std::mt19937_64 rng(1);
  const GraphSignal x{testing_support::gaussian_vector(50, rng)};
  ScoreInputs in;
  in.graph = &g;
  in.signal = &x;
  in.sigma2 = 0.3;
  const int kappa = 7;
  Eigen::VectorXd lev(50);
  for (int i = 0; i < 50; ++i) {
    double s = 0.0;
    for (int k = 0; k < kappa; ++k) s += basis.vectors(i, k) * basis.vectors(i, k);
    lev(i) = s;
  }
  auto check = [&](Strategy s, const Eigen::VectorXd& raw) {
    const auto pi = make_scores(s, basis, kappa, in).pi;
    EXPECT_LE((pi - raw / raw.sum()).cwiseAbs().maxCoeff(), 1e-14) << to_string(s);
  };
  check(Strategy::leverage, lev);
  check(Strategy::sqrt_leverage, lev.cwiseSqrt());
  Eigen::VectorXd deg = g.weights().rowwise().sum();
  check(Strategy::degree, deg);
  check(Strategy::optimal, (lev.array() * (x.values.array().square() + 0.3)).sqrt().matrix());
}

TEST(Scores, RingLeverageIsFlat) {
  const auto basis = analyze_graph(generate_graph(GraphKind::ring, 1024, {}, 0)).basis;
  const auto pi = make_scores(Strategy::leverage, basis, 20).pi;
  EXPECT_LE(pi.maxCoeff() / pi.minCoeff(), 1.5);
  EXPECT_NEAR(pi.mean(), 1.0 / 1024, 1e-12);
  EXPECT_LE((pi.array() * 1024 - 1.0).abs().maxCoeff(), 0.5);
}

TEST(Scores, HubGraphsHaveSkewedLeverage) {
  GraphParams ws;
  ws.rewire = 0.1;
  for (const Graph& g : {generate_graph(GraphKind::power_law, 1024, {}, 1),
                         generate_graph(GraphKind::small_world, 1024, ws, 1)}) {
    const auto basis = analyze_graph(g).basis;
    EXPECT_GT(skewness(make_scores(Strategy::leverage, basis, 20).pi), 1.0) << to_string(g.kind());
  }
}

TEST(Scores, OptimalApproachesSqrtLeverageAtHighNoise) {
  const auto basis = analyze_graph(generate_graph(GraphKind::power_law, 200, {}, 3)).basis;
  std::mt19937_64 rng(4);
  GraphSignal x{testing_support::gaussian_vector(200, rng)};
  x.values.normalize();
  ScoreInputs in;
  in.signal = &x;
  in.sigma2 = 1e12;
  const auto opt = make_scores(Strategy::optimal, basis, 10, in).pi;
  const auto root = make_scores(Strategy::sqrt_leverage, basis, 10).pi;
  const Eigen::ArrayXd ratio = opt.array() / root.array();
  EXPECT_LE(ratio.maxCoeff() - ratio.minCoeff(), 1e-6);
}

TEST(Scores, Errors) {
  const Graph empty = Graph::from_weights(Eigen::MatrixXd::Zero(4, 4));
  const auto basis = analyze_graph(testing_support::path_graph(4)).basis;
  ScoreInputs in;
  in.graph = &empty;
  EXPECT_THROW(make_scores(Strategy::degree, basis, 2, in), DegenerateError);
  EXPECT_THROW(make_scores(Strategy::degree, basis, 2), ParameterError);
  EXPECT_THROW(make_scores(Strategy::optimal, basis, 2), ParameterError);
  EXPECT_THROW(make_scores(Strategy::leverage, basis, 0), ParameterError);
  EXPECT_THROW(parse_strategy("random"), ParameterError);
}

TEST(Scores, FloorIsOffByDefault) {
  const auto basis = analyze_graph(generate_graph(GraphKind::power_law, 100, {}, 5)).basis;
  const auto raw = make_scores(Strategy::leverage, basis, 5);
  ScoreInputs in;
  in.floor = 1e-3;
  const auto floored = make_scores(Strategy::leverage, basis, 5, in);
  EXPECT_LT(raw.pi.minCoeff(), 1e-3);
  EXPECT_GE(floored.pi.minCoeff(), 1e-3 / (1.0 + 100 * 1e-3));
  EXPECT_NEAR(floored.pi.sum(), 1.0, 1e-12);
  in.floor = 0.02;
  EXPECT_THROW(make_scores(Strategy::leverage, basis, 5, in), ParameterError);
}

TEST(Draw, PointMassNoiseless) {
  Eigen::VectorXd pi = Eigen::VectorXd::Zero(5);
  pi(3) = 1.0;
  const GraphSignal x{Eigen::VectorXd::LinSpaced(5, 0.0, 4.0)};
  const auto d = draw_samples(x, fixed(pi), 50, 0.0, 1);
  for (int j = 0; j < 50; ++j) {
    EXPECT_EQ(d.indices[j], 3);
    EXPECT_EQ(d.observations(j), 3.0);
  }
}

TEST(Draw, FrequenciesMatchScores) {
  // chi-square goodness of fit, df = 9, critical value at 1e-3 is 27.877
  const GraphSignal x{Eigen::VectorXd::Zero(10)};
  Eigen::VectorXd skewed(10);
  skewed << 1, 2, 3, 4, 5, 6, 7, 8, 9, 10;
  for (const Eigen::VectorXd& pi : {Eigen::VectorXd(Eigen::VectorXd::Constant(10, 0.1)),
                                    Eigen::VectorXd(skewed / skewed.sum())}) {
    const int m = 100000;
    const auto d = draw_samples(x, fixed(pi), m, 0.0, 12345);
    Eigen::VectorXd counts = Eigen::VectorXd::Zero(10);
    for (int i : d.indices) counts(i) += 1.0;
    double chi2 = 0.0;
    for (int i = 0; i < 10; ++i) {
      const double expected = m * pi(i);
      chi2 += (counts(i) - expected) * (counts(i) - expected) / expected;
      EXPECT_LE(std::abs(counts(i) - expected), 3.0 * std::sqrt(m * pi(i) * (1 - pi(i))) + 1.0);
    }
    EXPECT_LT(chi2, 27.877);
  }
}

TEST(Draw, NoiseHasRequestedVariance) {
  const GraphSignal x{Eigen::VectorXd::Constant(4, 2.0)};
  const auto d = draw_samples(x, fixed(Eigen::VectorXd::Constant(4, 0.25)), 200000, 0.01, 3);
  const Eigen::ArrayXd e = d.observations.array() - 2.0;
  EXPECT_NEAR(e.mean(), 0.0, 4.0 * 0.1 / std::sqrt(200000.0));
  EXPECT_NEAR(e.square().mean(), 0.01, 0.01 * 4.0 * std::sqrt(2.0 / 200000));
}

TEST(Draw, DeterministicPerSeed) {
  const GraphSignal x{Eigen::VectorXd::LinSpaced(6, 1.0, 6.0)};
  const auto s = fixed(Eigen::VectorXd::Constant(6, 1.0 / 6));
  const auto a = draw_samples(x, s, 40, 0.01, 77);
  const auto b = draw_samples(x, s, 40, 0.01, 77);
  EXPECT_EQ(a.indices, b.indices);
  EXPECT_TRUE(a.observations == b.observations);
  EXPECT_EQ(a.seed, 77u);
  EXPECT_NE(a.indices, draw_samples(x, s, 40, 0.01, 78).indices);
}

TEST(Draw, SharedNoiseStream) {
  // same noise seed, different index seeds: noise sequence is identical
  const GraphSignal x{Eigen::VectorXd::Zero(8)};
  const auto s = fixed(Eigen::VectorXd::Constant(8, 0.125));
  const auto a = draw_samples(x, s, 30, 1.0, DrawSeeds{1, 42});
  const auto b = draw_samples(x, s, 30, 1.0, DrawSeeds{2, 42});
  EXPECT_NE(a.indices, b.indices);
  EXPECT_TRUE(a.observations == b.observations);
}

TEST(Draw, Preconditions) {
  const GraphSignal x{Eigen::VectorXd::Zero(4)};
  const auto s = fixed(Eigen::VectorXd::Constant(4, 0.25));
  EXPECT_THROW(draw_samples(x, s, 0, 0.0, 1), ParameterError);
  EXPECT_THROW(draw_samples(x, s, 5, -1.0, 1), ParameterError);
  EXPECT_THROW(draw_samples(GraphSignal{Eigen::VectorXd::Zero(3)}, s, 5, 0.0, 1), ParameterError);
}

TEST(ScoresIo, BareArray) {
  const auto basis = analyze_graph(testing_support::path_graph(6)).basis;
  const auto s = make_scores(Strategy::leverage, basis, 3);
  const auto j = io::scores_to_json(s);
  ASSERT_TRUE(j.is_array());
  EXPECT_TRUE(io::scores_from_json(nlohmann::json::parse(j.dump())).pi == s.pi);
  EXPECT_THROW(io::scores_from_json(nlohmann::json::array({0.5, 0.6})), IoError);
}
