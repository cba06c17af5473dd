#pragma once

#include <json.hpp>

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <string>
#include <tuple>
#include <vector>

#include "graphsamp/analysis.hpp"
#include "graphsamp/config.hpp"
#include "graphsamp/error.hpp"
#include "graphsamp/graph.hpp"
#include "graphsamp/parallel.hpp"
#include "graphsamp/recovery.hpp"
#include "graphsamp/report.hpp"
#include "graphsamp/rng.hpp"
#include "graphsamp/sampling.hpp"
#include "graphsamp/signal.hpp"
#include "graphsamp/spectral.hpp"

#ifndef GRAPHSAMP_VERSION
#define GRAPHSAMP_VERSION "unknown"
#endif

namespace graphsamp {

inline constexpr const char* kPartialFile = "results.partial.jsonl";

struct RunOptions {
  bool resume = true;            // reuse finished cells from a matching partial file
  unsigned threads = thread_count();
  std::ostream* log = &std::cerr;  // warnings and progress, may be null
};

struct RunResult {
  std::vector<ResultRow> rows;
  int failed_cells = 0;
  std::string started_at;
  std::string finished_at;
};

namespace detail {

// Stream tags keep the three per-trial seeds apart.
enum : std::uint64_t { kSignalStream = 1, kNoiseStream = 2, kIndexStream = 3 };

inline std::uint64_t bits(double v) { return std::bit_cast<std::uint64_t>(v); }

inline std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct Cell {
  std::size_t beta_index;
  double beta;
  double sigma2;
  Strategy strategy;
  int m;
};

inline std::string cell_key(const Cell& c) {
  return format_double(c.beta) + "|" + format_double(c.sigma2) + "|" + std::string(to_string(c.strategy)) + "|" +
         std::to_string(c.m);
}

inline std::vector<Cell> enumerate_cells(const ExperimentConfig& c, const std::vector<double>& betas) {
  std::vector<double> sigma2s = c.sigma2s;
  std::sort(sigma2s.begin(), sigma2s.end());
  sigma2s.erase(std::unique(sigma2s.begin(), sigma2s.end()), sigma2s.end());
  std::vector<Strategy> strategies = c.strategies;
  std::sort(strategies.begin(), strategies.end());
  std::vector<Cell> cells;
  for (std::size_t b = 0; b < betas.size(); ++b)
    for (double s : sigma2s)
      for (Strategy st : strategies)
        for (int m : c.m_grid) cells.push_back({b, betas[b], s, st, m});
  return cells;
}

// Finished rows from an earlier run of the same config, keyed by cell.
inline std::map<std::string, ResultRow> load_partial(const std::filesystem::path& path, const std::string& fingerprint) {
  std::map<std::string, ResultRow> done;
  std::ifstream in(path);
  if (!in) return done;
  std::string line;
  if (!std::getline(in, line)) return done;
  try {
    if (nlohmann::json::parse(line).at("fingerprint").get<std::string>() != fingerprint) return {};
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const auto j = nlohmann::json::parse(line);  // a torn last line throws and is dropped
      done[j.at("key").get<std::string>()] = row_from_json(j.at("row"));
    }
  } catch (const nlohmann::json::exception&) {
  }
  return done;
}

}  // namespace detail

// Runs every (beta, sigma2, strategy, m) cell. Trial t of a cell uses a fresh
// signal seeded by (beta, t), a noise stream shared by all strategies of the
// same (beta, sigma2, m, t), and an index stream of its own.
inline RunResult run_experiment(const ExperimentConfig& config, const RunOptions& options = {}) {
  validate(config);
  RunResult result;
  result.started_at = detail::utc_now();
  std::ostream* log = options.log;

  std::vector<double> betas = config.signal.betas;
  std::sort(betas.begin(), betas.end());
  betas.erase(std::unique(betas.begin(), betas.end()), betas.end());
  if (log) {
    for (double b : betas)
      if (b < 1.0)
        *log << "warning: beta=" << b << " < 1, outside the range covered by the convergence guarantees\n";
    if (std::find(config.strategies.begin(), config.strategies.end(), Strategy::optimal) != config.strategies.end())
      *log << "note: the optimal strategy is an oracle run, its scores use the true signal\n";
  }

  const Graph graph = generate_graph(config.graph.kind, config.graph.n, config.graph.params, config.graph.seed);
  const SpectralBasis basis = analyze_graph(graph).basis;
  const int n = basis.size();
  const int trials = config.trials;

  // Signals for every (beta, trial), one dense product per beta.
  std::vector<Eigen::MatrixXd> signals(betas.size());
  for (std::size_t b = 0; b < betas.size(); ++b) {
    Eigen::MatrixXd coeffs(n, trials);
    for (int t = 0; t < trials; ++t) {
      const auto seed = mix_seed(config.master_seed, {detail::kSignalStream, detail::bits(betas[b]),
                                                      static_cast<std::uint64_t>(t)});
      coeffs.col(t) = synthesize_blt_spectrum(n, config.signal.K, betas[b], seed).coeffs;
    }
    signals[b].noalias() = basis.vectors * coeffs;
  }

  const auto cells = detail::enumerate_cells(config, betas);
  const std::string fingerprint = config_to_json(config).dump();
  std::map<std::string, ResultRow> done;
  std::ofstream partial;
  if (!config.output_dir.empty()) {
    std::filesystem::create_directories(config.output_dir);
    const auto path = config.output_dir / kPartialFile;
    if (options.resume) done = detail::load_partial(path, fingerprint);
    partial.open(path, std::ios::trunc);
    if (!partial) throw IoError("cannot write " + path.string());
    partial << nlohmann::json{{"fingerprint", fingerprint}}.dump() << '\n';
    for (const auto& [key, row] : done) partial << nlohmann::json{{"key", key}, {"row", row_to_json(row)}}.dump() << '\n';
    partial.flush();
  }

  std::vector<ResultRow> rows(cells.size());
  std::vector<char> have(cells.size(), 0);
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (auto it = done.find(detail::cell_key(cells[i])); it != done.end()) {
      rows[i] = it->second;
      have[i] = 1;
    }
  }

  // Non-signal scores depend only on (strategy, kappa).
  std::mutex scores_mutex, write_mutex;
  std::map<std::pair<Strategy, int>, SamplingScores> score_cache;
  auto fixed_scores = [&](Strategy s, int kappa) -> SamplingScores {
    std::lock_guard lock(scores_mutex);
    auto key = std::make_pair(s, uses_band(s) ? kappa : 0);
    auto it = score_cache.find(key);
    if (it == score_cache.end()) {
      ScoreInputs in;
      in.graph = &graph;
      it = score_cache.emplace(key, make_scores(s, basis, kappa, in)).first;
    }
    return it->second;
  };

  std::vector<std::size_t> todo;
  for (std::size_t i = 0; i < cells.size(); ++i)
    if (!have[i]) todo.push_back(i);

  parallel_for(
      todo.size(),
      [&](std::size_t k) {
        const std::size_t i = todo[k];
        const auto& cell = cells[i];
        ResultRow row;
        row.graph_kind = std::string(to_string(config.graph.kind));
        row.n = n;
        row.strategy = std::string(to_string(cell.strategy));
        row.beta = cell.beta;
        row.sigma2 = cell.sigma2;
        row.m = cell.m;
        row.trials = trials;
        row.seed = config.master_seed;
        try {
          row.kappa = bandwidth_rule(cell.m, cell.beta, config.signal.k_min, n);
          std::vector<double> errors(trials);
          SamplingScores scores;
          if (cell.strategy != Strategy::optimal) scores = fixed_scores(cell.strategy, row.kappa);
          for (int t = 0; t < trials; ++t) {
            const GraphSignal x{signals[cell.beta_index].col(t)};
            if (cell.strategy == Strategy::optimal) {
              ScoreInputs in;
              in.signal = &x;
              in.sigma2 = cell.sigma2;
              scores = make_scores(Strategy::optimal, basis, row.kappa, in);
            }
            const auto tt = static_cast<std::uint64_t>(t);
            const auto m = static_cast<std::uint64_t>(cell.m);
            DrawSeeds seeds;
            seeds.noise = mix_seed(config.master_seed, {detail::kNoiseStream, detail::bits(cell.beta),
                                                        detail::bits(cell.sigma2), m, tt});
            seeds.index = mix_seed(config.master_seed,
                                   {detail::kIndexStream, detail::bits(cell.beta), detail::bits(cell.sigma2), m,
                                    static_cast<std::uint64_t>(cell.strategy), tt});
            const SampleDraw draw = draw_samples(x, scores, cell.m, cell.sigma2, seeds);
            const Estimate est = recover(config.estimator, basis, row.kappa, draw, scores);
            errors[t] = (est.values - x.values).squaredNorm();
          }
          const MonteCarloResult mc = summarize_errors(errors);
          if (!std::isfinite(mc.mean) || !std::isfinite(mc.std_error)) throw NumericError("non-finite mse");
          row.mse_mean = mc.mean;
          row.mse_stderr = mc.std_error;
        } catch (const Error& e) {
          row.mse_mean = row.mse_stderr = std::numeric_limits<double>::quiet_NaN();
          row.status = e.what();
        }
        std::lock_guard lock(write_mutex);
        rows[i] = row;
        if (partial.is_open()) {
          partial << nlohmann::json{{"key", detail::cell_key(cell)}, {"row", row_to_json(row)}}.dump() << '\n';
          partial.flush();
        }
      },
      options.threads);

  for (const auto& r : rows) result.failed_cells += r.ok() ? 0 : 1;
  if (log && result.failed_cells > 0) *log << "warning: " << result.failed_cells << " cell(s) failed\n";
  result.rows = std::move(rows);
  result.finished_at = detail::utc_now();
  return result;
}

// Writes results.csv, manifest.json and mse_vs_m.svg into out_dir.
inline void emit_results(const RunResult& run, const ExperimentConfig& config, const std::filesystem::path& out_dir) {
  if (run.rows.empty()) throw ParameterError("no rows to emit");
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());

  auto write_text = [&](const std::string& name, const std::string& text) {
    std::ofstream out(out_dir / name, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + (out_dir / name).string());
    out << text;
    if (!out) throw IoError("write failed for " + (out_dir / name).string());
  };
  write_text("results.csv", results_to_csv(run.rows));
  write_text("mse_vs_m.svg", render_svg(run.rows));
  nlohmann::json manifest = {{"tool", "graphsamp"},
                             {"version", GRAPHSAMP_VERSION},
                             {"config", config_to_json(config)},
                             {"started_at", run.started_at},
                             {"finished_at", run.finished_at},
                             {"cells", run.rows.size()},
                             {"failed_cells", run.failed_cells},
                             {"files", {"results.csv", "mse_vs_m.svg"}}};
  write_text("manifest.json", manifest.dump(2) + "\n");
  std::filesystem::remove(out_dir / kPartialFile, ec);
}

// ---------------------------------------------------------------------------
// Figure presets

inline GraphKind figure_graph(std::string_view tag) {
  if (tag == "fig7") return GraphKind::ring;
  if (tag == "fig8") return GraphKind::erdos_renyi;
  if (tag == "fig9") return GraphKind::geometric;
  if (tag == "fig10") return GraphKind::small_world;
  if (tag == "fig11") return GraphKind::power_law;
  throw ConfigError("tag", "unknown figure tag '" + std::string(tag) + "' (expected fig7..fig11)");
}

// The full-size sweeps use n = 10000. Smaller n keeps the mean degree of ER
// and RGG graphs and the m grid ratio n/10 .. 2n. Small-world rewiring is
// raised to 0.1 so that hubs actually form at desk scale.
inline ExperimentConfig figure_config(std::string_view tag, int n, int trials = 200, std::uint64_t master_seed = 2024) {
  if (n < 256) throw ConfigError("n", "figure scale must be at least 256");
  ExperimentConfig c;
  c.graph.kind = figure_graph(tag);
  c.graph.n = n;
  c.graph.seed = 7;
  const double shrink = 10000.0 / n;
  GraphParams p;
  switch (c.graph.kind) {
    case GraphKind::ring: p.k = 4; break;
    case GraphKind::erdos_renyi: p.p = std::min(1.0, 0.01 * shrink); break;
    case GraphKind::geometric: p.radius = 0.03 * std::sqrt(shrink); break;
    case GraphKind::small_world:
      p.k = 2;
      p.rewire = 0.1;
      break;
    case GraphKind::power_law: p.attach = 1; break;
    case GraphKind::custom: break;
  }
  c.graph.params = resolve_params(c.graph.kind, p);
  c.signal.K = 10;
  c.signal.k_min = 10;
  c.signal.betas = {0.5, 1.0};
  c.sigma2s = {1e-4, 2e-2};
  c.strategies = {Strategy::uniform, Strategy::leverage, Strategy::sqrt_leverage, Strategy::degree};
  c.m_grid = log_spaced_grid(n / 10.0, 2.0 * n, 8);
  c.trials = trials;
  c.master_seed = master_seed;
  validate(c);
  return c;
}

inline RunResult reproduce_figure(std::string_view tag, int n, const std::filesystem::path& out_dir, int trials = 200,
                                  const RunOptions& options = {}) {
  ExperimentConfig c = figure_config(tag, n, trials);
  c.output_dir = out_dir;
  RunResult r = run_experiment(c, options);
  emit_results(r, c, out_dir);
  return r;
}

}  // namespace graphsamp
