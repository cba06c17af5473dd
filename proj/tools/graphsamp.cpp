// graphsamp command line: graph generation, signal synthesis, sampling,
// recovery, risk bounds and experiment sweeps.

#include <CLI11.hpp>
#include <graphsamp.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace gs = graphsamp;
using nlohmann::json;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

void emit(const json& j, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << j.dump(2) << '\n';
  } else {
    gs::io::write_json(out, j);
  }
}

gs::Graph load_graph(const std::string& path) { return gs::io::graph_from_json(gs::io::read_json(path)); }

gs::SpectralBasis load_basis(const std::string& path) { return gs::analyze_graph(load_graph(path)).basis; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sampling and recovery of smooth graph signals"};
  app.set_version_flag("--version", GRAPHSAMP_VERSION);
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a graph");
  std::string kind_tag, out;
  int n = 0;
  std::uint64_t seed = 1;
  std::optional<int> k, attach;
  std::optional<double> p, radius, rewire;
  gen->add_option("--kind", kind_tag, "ring|er|rgg|ws|ba")->required();
  gen->add_option("--n", n, "number of nodes")->required();
  gen->add_option("--k", k, "ring / small-world neighbours");
  gen->add_option("--p", p, "edge probability (er)");
  gen->add_option("--radius", radius, "connection radius (rgg)");
  gen->add_option("--rewire", rewire, "per-edge rewiring probability (ws)");
  gen->add_option("--attach", attach, "edges per new node (ba)");
  gen->add_option("--seed", seed);
  gen->add_option("--out", out, "output file, stdout when omitted");

  // synth
  auto* synth = app.add_subcommand("synth", "Synthesize an approximately bandlimited signal");
  std::string graph_path;
  int K = 10;
  double beta = 1.0;
  bool spectral = false;
  synth->add_option("--graph", graph_path)->required();
  synth->add_option("--K", K);
  synth->add_option("--beta", beta);
  synth->add_option("--seed", seed);
  synth->add_flag("--spectral", spectral, "write graph-frequency coefficients instead of node values");
  synth->add_option("--out", out);

  // scores
  auto* scores_cmd = app.add_subcommand("scores", "Compute sampling scores");
  std::string strategy_tag = "uniform", signal_path;
  int kappa = 10;
  std::optional<double> sigma2_opt;
  double floor = 0.0;
  scores_cmd->add_option("--strategy", strategy_tag, "uniform|leverage|sqrt_leverage|degree|optimal");
  scores_cmd->add_option("--kappa", kappa);
  scores_cmd->add_option("--graph", graph_path)->required();
  scores_cmd->add_option("--signal", signal_path, "signal file (optimal only)");
  scores_cmd->add_option("--sigma2", sigma2_opt, "noise variance (optimal only)");
  scores_cmd->add_option("--floor", floor, "minimum probability before renormalizing");
  scores_cmd->add_option("--out", out);

  // recover
  auto* rec = app.add_subcommand("recover", "Sample a signal and recover it");
  std::string estimator_tag = "sample_proj", scores_path;
  int m = 100;
  double sigma2 = 0.0;
  rec->add_option("--estimator", estimator_tag, "sample_proj|ls|st");
  rec->add_option("--kappa", kappa);
  rec->add_option("--graph", graph_path)->required();
  rec->add_option("--signal", signal_path)->required();
  rec->add_option("--scores", scores_path, "scores file, uniform when omitted");
  rec->add_option("--m", m);
  rec->add_option("--sigma2", sigma2);
  rec->add_option("--seed", seed);
  rec->add_option("--out", out);

  // bounds
  auto* bounds = app.add_subcommand("bounds", "Closed-form risk and lower bounds for one signal");
  double c1 = 1.0, c = 0.5;
  std::vector<int> kappa0_grid;
  bounds->add_option("--graph", graph_path)->required();
  bounds->add_option("--signal", signal_path)->required();
  bounds->add_option("--scores", scores_path, "scores for the exact risk, uniform when omitted");
  bounds->add_option("--kappa", kappa);
  bounds->add_option("--m", m);
  bounds->add_option("--sigma2", sigma2);
  bounds->add_option("--K", K, "class bandwidth");
  bounds->add_option("--beta", beta);
  bounds->add_option("--c1", c1);
  bounds->add_option("--c", c);
  bounds->add_option("--kappa0", kappa0_grid, "candidate kappa0 values, all feasible when omitted");
  bounds->add_option("--out", out);

  // classify
  auto* classify = app.add_subcommand("classify", "Type-1 / Type-2 diagnostics of a graph");
  int kappa0 = 10;
  double threshold = gs::kDefaultTypeThreshold;
  classify->add_option("--graph", graph_path)->required();
  classify->add_option("--kappa0", kappa0)->required();
  classify->add_option("--threshold", threshold);
  classify->add_option("--out", out);

  // run
  auto* run = app.add_subcommand("run", "Run an experiment sweep from a TOML config");
  std::string config_path, out_dir;
  bool no_resume = false;
  run->add_option("--config", config_path)->required();
  run->add_option("--out", out_dir, "output directory, overrides output_dir in the config");
  run->add_flag("--no-resume", no_resume, "ignore partial results from an interrupted run");

  // figure
  auto* figure = app.add_subcommand("figure", "Reproduce one of the simulation figures at reduced scale");
  std::string tag;
  int trials = 200;
  figure->add_option("--tag", tag, "fig7|fig8|fig9|fig10|fig11")->required();
  figure->add_option("--n", n, "graph size, at least 256")->required();
  figure->add_option("--out", out_dir)->required();
  figure->add_option("--trials", trials);
  figure->add_flag("--no-resume", no_resume);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*gen) {
      const auto kind = gs::parse_graph_kind(kind_tag);
      gs::GraphParams params;
      params.k = k;
      params.p = p;
      params.radius = radius;
      params.rewire = rewire;
      params.attach = attach;
      emit(gs::io::graph_to_json(gs::generate_graph(kind, n, params, seed)), out);
    } else if (*synth) {
      const auto basis = load_basis(graph_path);
      const auto xhat = gs::synthesize_blt_spectrum(basis.size(), K, beta, seed);
      emit(spectral ? gs::io::spectral_to_json(xhat) : gs::io::signal_to_json(gs::igft(basis, xhat)), out);
    } else if (*scores_cmd) {
      const gs::Graph g = load_graph(graph_path);
      const auto basis = gs::analyze_graph(g).basis;
      std::optional<gs::GraphSignal> x;
      if (!signal_path.empty()) x = gs::io::signal_from_json(gs::io::read_json(signal_path));
      gs::ScoreInputs in;
      in.graph = &g;
      in.signal = x ? &*x : nullptr;
      in.sigma2 = sigma2_opt;
      in.floor = floor;
      emit(gs::io::scores_to_json(gs::make_scores(gs::parse_strategy(strategy_tag), basis, kappa, in)), out);
    } else if (*rec) {
      const auto basis = load_basis(graph_path);
      const auto x = gs::io::signal_from_json(gs::io::read_json(signal_path));
      const auto scores = scores_path.empty() ? gs::make_scores(gs::Strategy::uniform, basis, kappa)
                                              : gs::io::scores_from_json(gs::io::read_json(scores_path));
      const auto draw = gs::draw_samples(x, scores, m, sigma2, seed);
      const auto est = gs::recover(gs::parse_estimator(estimator_tag), basis, kappa, draw, scores);
      emit(json{{"estimator", std::string(gs::to_string(est.estimator))},
                {"kappa", est.kappa},
                {"m", m},
                {"sigma2", sigma2},
                {"seed", seed},
                {"rank", est.rank},
                {"rank_deficient", est.rank_deficient},
                {"squared_error", (est.values - x.values).squaredNorm()},
                {"values", gs::io::to_std(est.values)}},
           out);
    } else if (*bounds) {
      const auto basis = load_basis(graph_path);
      const auto x = gs::io::signal_from_json(gs::io::read_json(signal_path));
      const auto scores = scores_path.empty() ? gs::make_scores(gs::Strategy::uniform, basis, kappa)
                                              : gs::io::scores_from_json(gs::io::read_json(scores_path));
      const int class_k = std::min(K, kappa);
      const auto risk = gs::exact_mse(basis, x, kappa, scores, m, sigma2, beta, class_k);
      const double mu = gs::blt_min_mu(gs::gft(basis, x), K, beta);
      gs::BoundParams bp{c1, c, kappa0_grid};
      json lower = json::object();
      for (auto regime : {gs::Regime::uniform, gs::Regime::designed}) {
        const auto lb = gs::minimax_lower_bound(basis, K, beta, mu, sigma2, m, x.values.norm(), bp, regime);
        lower[std::string(gs::to_string(regime))] = {
            {"best_kappa0", lb.best_kappa0}, {"bound_value", lb.bound_value}, {"norm_term", lb.norm_term}};
      }
      emit(json{{"kappa", kappa},
                {"m", m},
                {"sigma2", sigma2},
                {"exact_mse", risk.exact_mse},
                {"bias_sq", risk.bias_sq},
                {"variance", risk.variance},
                {"upper_bound", risk.upper_bound},
                {"uniform_bound",
                 gs::corollary_bounds(basis, x, kappa, m, sigma2, gs::BoundKind::uniform, beta, class_k)},
                {"optimal_bound",
                 gs::corollary_bounds(basis, x, kappa, m, sigma2, gs::BoundKind::optimal, beta, class_k)},
                {"mu", mu},
                {"lower_bound", lower},
                {"lower_bound_note",
                 "up to constants c1, c; uniform regime uses ||V_(2,kappa0)||_F^2 m / N, other placements "
                 "of N are possible"}},
           out);
    } else if (*classify) {
      const auto d = gs::type_diagnostics(load_basis(graph_path), kappa0, threshold);
      emit(json{{"kappa0", kappa0},
                {"max_abs_entry_scaled", d.max_abs_entry_scaled},
                {"frobenius_sq", d.frobenius_sq},
                {"max_row_sq", d.max_row_sq},
                {"concentration_ratio", d.concentration_ratio},
                {"threshold", threshold},
                {"verdict", std::string(gs::to_string(d.verdict))}},
           out);
    } else if (*run) {
      auto config = gs::load_config(config_path);
      if (!out_dir.empty()) config.output_dir = out_dir;
      if (config.output_dir.empty()) throw gs::ConfigError("output_dir", "give --out or output_dir");
      gs::RunOptions options;
      options.resume = !no_resume;
      const auto result = gs::run_experiment(config, options);
      gs::emit_results(result, config, config.output_dir);
      std::cerr << result.rows.size() << " cells written to " << config.output_dir.string() << '\n';
      return result.failed_cells > 0 ? kExitNumeric : 0;
    } else if (*figure) {
      gs::RunOptions options;
      options.resume = !no_resume;
      const auto result = gs::reproduce_figure(tag, n, out_dir, trials, options);
      std::cerr << result.rows.size() << " cells written to " << out_dir << '\n';
      return result.failed_cells > 0 ? kExitNumeric : 0;
    }
  } catch (const gs::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const gs::ParameterError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
