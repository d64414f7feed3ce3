// drbench: train, sweep and plot the price-setting demand-response agent.
//
//   drbench run    [--config PATH] [--out DIR] [--seed N] [--alpha X] [--quiet]
//   drbench sweep  [--config PATH] [--out DIR] [--seed N] [--alpha X] [--quiet]
//   drbench plot   --csv FILE... --steps 2000,8000 [--config PATH] [--out FILE]
//   drbench oracle
//
// Exit codes: 0 success, 1 config error, 2 training abort, 3 I/O error.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "drbench/config.hpp"
#include "drbench/env.hpp"
#include "drbench/experiment.hpp"
#include "drbench/plot.hpp"
#include "support/oracles.hpp"

namespace {

using namespace drbench;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitAbort = 2;
constexpr int kExitIo = 3;

struct CommonOptions {
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<Real> alpha;
  bool quiet = false;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--config", opts.config_path, "Experiment config (JSON)");
  cmd->add_option("--out", opts.out_dir, "Output directory (overrides run.output_dir)");
  cmd->add_option("--seed", opts.seed, "Use only this seed");
  cmd->add_option("--alpha", opts.alpha, "Use only this SMiRL weight");
  cmd->add_flag("--quiet", opts.quiet, "Suppress progress output");
}

ExperimentConfig load_config(const CommonOptions& opts) {
  ExperimentConfig cfg = opts.config_path.empty() ? parse_config_text("")
                                                  : parse_config(opts.config_path);
  if (!opts.out_dir.empty()) cfg.output_dir = opts.out_dir;
  if (opts.seed) cfg.seeds = {*opts.seed};
  if (opts.alpha) {
    cfg.alphas = {*opts.alpha};
    cfg.train.smirl.alpha = *opts.alpha;
  }
  validate(cfg);
  return cfg;
}

std::string show(const std::optional<Real>& v) {
  return v ? format_real(*v) : std::string("none");
}

int cmd_run(const CommonOptions& opts) {
  const ExperimentConfig cfg = load_config(opts);
  const std::uint64_t seed = cfg.seeds.front();
  const Real alpha = cfg.train.smirl.alpha;
  const RunOutput out = run_experiment(cfg, seed, alpha, cfg.output_dir);
  const RunSummary& s = out.summary;
  if (!opts.quiet) {
    std::cout << "wrote " << cfg.output_dir << "/" << run_csv_name(seed, alpha) << "\n"
              << "steps " << s.steps << ", final-bin r_energy " << show(s.final_bin_reward)
              << ", steps_to_threshold "
              << (s.steps_to_threshold ? std::to_string(*s.steps_to_threshold) : "none")
              << ", trailing entropy " << show(s.trailing_entropy) << ", wall "
              << s.wall_seconds << " s\n";
  }
  if (s.failed) {
    std::cerr << "training aborted: " << s.error << "\n";
    return kExitAbort;
  }
  return kExitOk;
}

int cmd_sweep(const CommonOptions& opts) {
  const ExperimentConfig cfg = load_config(opts);
  const SweepReport report = sweep(cfg, cfg.output_dir, opts.quiet);
  if (!opts.quiet) std::cout << report_table(report);
  for (const RunSummary& s : report.cells)
    if (s.failed) return kExitAbort;
  return kExitOk;
}

int cmd_plot(const std::string& config_path, const std::vector<std::string>& csvs,
             const std::vector<long>& steps, const std::string& out_path) {
  const ExperimentConfig cfg =
      config_path.empty() ? parse_config_text("") : parse_config(config_path);
  const auto panels = load_consumption_panels(csvs, steps);
  const std::string svg = consumption_svg(panels, cfg.train.env.grid);
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  out << svg;
  if (!out) throw std::runtime_error("write failed for " + out_path);
  return kExitOk;
}

void print(const char* name, double value) { std::printf("%-58s %.17g\n", name, value); }

int cmd_oracle() {
  // Closed-form references for the worked examples in the test suite.
  const std::vector<double> ones(10, 1.0);
  std::vector<double> last_hour(10, 0.0);
  last_hour[9] = 1.0;
  const auto shifted = oracle::worker_response(last_hour, ones, 1.0);
  print("worker_response(b=1, beta=1, p10=1): d_1..9", shifted[0]);
  print("worker_response(b=1, beta=1, p10=1): d_10", shifted[9]);

  const DemandProfile b = default_baseline();
  const GridPriceSchedule g = default_grid_schedule();
  const std::vector<double> bv(b.data(), b.data() + kHours), gv(g.data(), g.data() + kHours);
  print("energy_reward(default baseline, default grid)", oracle::energy_reward(bv, gv));
  const auto grid_priced = oracle::worker_response(gv, bv, 1.0);
  print("energy_reward(response to prices = grid, beta=1)",
        oracle::energy_reward(grid_priced, gv));

  print("sample entropy per hour, variance floor 1e-12",
        0.5 * std::log(2 * oracle::kPi * oracle::kE * 1e-12));
  print("sample entropy, 10 hours, variance floor 1e-12",
        10 * 0.5 * std::log(2 * oracle::kPi * oracle::kE * 1e-12));
  print("entropy of standard normal 0.5 ln(2 pi e)",
        0.5 * std::log(2 * oracle::kPi * oracle::kE));

  std::vector<double> ramp(100);
  for (int i = 0; i < 100; ++i) ramp[i] = i + 1;
  print("bin(1..100): mean", 50.5);
  print("bin(1..100): population std", oracle::population_std(ramp));

  print("simplex dim 10, C 10: coordinate mean", oracle::simplex_coordinate_mean(10, 10));
  print("simplex dim 10, C 10: coordinate std", oracle::simplex_coordinate_std(10, 10));
  print("KS critical value n=m=1e5, significance 0.01", oracle::ks_critical(100000, 100000, 0.01));
  print("combined reward alpha 0.12, r_e -1, r_s -2", -1.0 + 0.12 * -2.0);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Demand-response price-setting bench with surprise-minimizing rewards"};
  app.require_subcommand(1);

  CommonOptions run_opts, sweep_opts;
  CLI::App* run = app.add_subcommand("run", "Train one (seed, alpha) cell");
  add_common(run, run_opts);
  CLI::App* sw = app.add_subcommand("sweep", "Train the seeds x alphas grid and report");
  add_common(sw, sweep_opts);

  std::string plot_config, plot_out = "consumption.svg";
  std::vector<std::string> plot_csvs;
  std::vector<long> plot_steps;
  CLI::App* plot = app.add_subcommand("plot", "Demand profiles at checkpoints vs grid price");
  plot->add_option("--config", plot_config, "Experiment config (for the grid schedule)");
  plot->add_option("--csv", plot_csvs, "Run CSV files")->required();
  plot->add_option("--steps", plot_steps, "Checkpoint days")->required()->delimiter(',');
  plot->add_option("--out", plot_out, "Output SVG path");

  CLI::App* orc = app.add_subcommand("oracle", "Print brute-force reference values");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (run->parsed()) return cmd_run(run_opts);
    if (sw->parsed()) return cmd_sweep(sweep_opts);
    if (plot->parsed()) return cmd_plot(plot_config, plot_csvs, plot_steps, plot_out);
    if (orc->parsed()) return cmd_oracle();
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const TrainingAborted& e) {
    std::cerr << "training aborted: " << e.what() << "\n";
    return kExitAbort;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitOk;
}
