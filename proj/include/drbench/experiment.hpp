#ifndef DRBENCH_EXPERIMENT_HPP
#define DRBENCH_EXPERIMENT_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "drbench/config.hpp"
#include "drbench/metrics.hpp"

namespace drbench {

/// Convergence threshold relative to a reference final-bin reward: the
/// reward 5% below the reference in magnitude (0.95 * ref for ref > 0).
Real convergence_threshold(Real reference);

struct BufferSnapshot {
  long count = 0;
  VectorX mean;
  VectorX m2;
};

struct RunSummary {
  std::string config_hash;
  std::uint64_t seed = 0;
  Real alpha = 0;
  long steps = 0;
  bool failed = false;
  std::string error;
  std::optional<Real> final_bin_reward;
  Real final_bin_reward_std = 0;
  std::optional<Real> threshold;
  std::optional<std::size_t> threshold_bin;
  /// (threshold_bin + 1) * bin: the day on which the first qualifying bin ends.
  std::optional<long> steps_to_threshold;
  /// Mean defined sample entropy over the final bin.
  std::optional<Real> final_entropy;
  /// Mean defined sample entropy over the last trailing_window days.
  std::optional<Real> trailing_entropy;
  BufferSnapshot buffer;
  /// Reported on stdout only; never written to disk.
  double wall_seconds = 0;
};

/// Per-day series kept for aggregation after a run.
struct RunSeries {
  std::vector<Real> r_energy;
  std::vector<std::optional<Real>> entropy;
};

/// Fills the metric fields of a summary from a run's daily series. A missing
/// `threshold` means the run's own final-bin reward is the reference.
void summarize_series(const RunSeries& series, const ExperimentConfig& cfg,
                      std::optional<Real> threshold, RunSummary& summary);

std::string alpha_tag(Real alpha);
std::string run_csv_name(std::uint64_t seed, Real alpha);
std::string run_summary_name(std::uint64_t seed, Real alpha);

/// Serialized summary (JSON text) as written next to the CSV.
std::string summary_json(const RunSummary& s);

struct RunOutput {
  RunSummary summary;
  RunSeries series;
};

/// Trains one (seed, alpha) cell, streaming its CSV to
/// <out_dir>/run_seed<k>_alpha<a>.csv and writing the summary beside it. A
/// TrainingAborted is caught: the CSV keeps the finished days plus a
/// truncation marker and the summary is flagged failed. I/O failures throw
/// std::runtime_error.
RunOutput run_experiment(const ExperimentConfig& cfg, std::uint64_t seed, Real alpha,
                         const std::string& out_dir);

struct AlphaRow {
  Real alpha = 0;
  int runs = 0;
  int failed = 0;
  std::optional<Real> median_steps_to_threshold;
  std::optional<Real> median_final_reward;
  std::optional<Real> median_final_entropy;
  std::optional<Real> median_trailing_entropy;
};

struct SweepReport {
  Real reference_alpha = 0;
  std::optional<Real> threshold;
  std::vector<RunSummary> cells;
  std::vector<AlphaRow> rows;
};

/// Median with missing values ordered after every present one; empty input
/// or a median landing on a missing value gives nullopt.
std::optional<Real> median_of(std::vector<std::optional<Real>> values);

/// Runs every (alpha, seed) cell on `threads` workers, then recomputes
/// steps_to_threshold against the threshold derived from the median
/// final-bin reward of the smallest alpha in the grid, and writes
/// report.json, report.txt, fig_reward.svg and fig_entropy.svg.
SweepReport sweep(const ExperimentConfig& cfg, const std::string& out_dir, bool quiet);

std::string report_json(const SweepReport& report, const ExperimentConfig& cfg);
std::string report_table(const SweepReport& report);

}  // namespace drbench

#endif  // DRBENCH_EXPERIMENT_HPP
