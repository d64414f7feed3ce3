#include "drbench/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "drbench/plot.hpp"
#include "drbench/train.hpp"

namespace drbench {

namespace {

using json = nlohmann::json;

json optional_json(const std::optional<Real>& v) { return v ? json(*v) : json(nullptr); }

json vector_json(const VectorX& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::optional<Real> mean_defined(const std::vector<std::optional<Real>>& values,
                                 std::size_t begin, std::size_t end) {
  Real sum = 0;
  std::size_t n = 0;
  for (std::size_t i = begin; i < end; ++i)
    if (values[i]) {
      sum += *values[i];
      ++n;
    }
  if (n == 0) return std::nullopt;
  return sum / Real(n);
}

/// Pools every seed's days inside each bin.
BandSeries pooled_band(const std::string& label, const std::vector<const RunSeries*>& runs,
                       bool entropy, std::size_t bin) {
  std::size_t len = 0;
  for (const RunSeries* r : runs) len = std::max(len, r->r_energy.size());
  BandSeries s{label, {}, {}, {}};
  for (std::size_t start = 0; start < len; start += bin) {
    std::vector<Real> pool;
    for (const RunSeries* r : runs)
      for (std::size_t i = start; i < std::min(start + bin, r->r_energy.size()); ++i) {
        if (!entropy)
          pool.push_back(r->r_energy[i]);
        else if (r->entropy[i])
          pool.push_back(*r->entropy[i]);
      }
    if (pool.empty()) continue;
    const BinStat b = bin_series(pool, pool.size()).front();
    s.x.push_back(Real(std::min(start + bin, len)));
    s.mean.push_back(b.mean);
    s.std.push_back(b.std);
  }
  return s;
}

std::string opt_text(const std::optional<Real>& v, const char* format) {
  if (!v) return "none";
  char buf[64];
  std::snprintf(buf, sizeof(buf), format, *v);
  return buf;
}

}  // namespace

Real convergence_threshold(Real reference) { return reference - 0.05 * std::abs(reference); }

void summarize_series(const RunSeries& series, const ExperimentConfig& cfg,
                      std::optional<Real> threshold, RunSummary& summary) {
  const std::vector<BinStat> bins = bin_series(series.r_energy, cfg.bin);
  summary.final_bin_reward.reset();
  summary.final_bin_reward_std = 0;
  summary.threshold.reset();
  summary.threshold_bin.reset();
  summary.steps_to_threshold.reset();
  summary.final_entropy.reset();
  summary.trailing_entropy.reset();
  if (bins.empty()) return;

  summary.final_bin_reward = bins.back().mean;
  summary.final_bin_reward_std = bins.back().std;
  summary.threshold = threshold ? *threshold : convergence_threshold(bins.back().mean);
  summary.threshold_bin = steps_to_threshold(bins, *summary.threshold, cfg.threshold_tolerance);
  if (summary.threshold_bin)
    summary.steps_to_threshold = static_cast<long>((*summary.threshold_bin + 1) * cfg.bin);

  const std::size_t n = series.entropy.size();
  const std::size_t last_bin_start = (bins.size() - 1) * cfg.bin;
  summary.final_entropy = mean_defined(series.entropy, last_bin_start, n);
  const std::size_t window = std::min<std::size_t>(n, static_cast<std::size_t>(cfg.trailing_window));
  summary.trailing_entropy = mean_defined(series.entropy, n - window, n);
}

std::string alpha_tag(Real alpha) { return format_real(alpha); }

std::string run_csv_name(std::uint64_t seed, Real alpha) {
  return "run_seed" + std::to_string(seed) + "_alpha" + alpha_tag(alpha) + ".csv";
}

std::string run_summary_name(std::uint64_t seed, Real alpha) {
  return "run_seed" + std::to_string(seed) + "_alpha" + alpha_tag(alpha) + ".summary.json";
}

std::string summary_json(const RunSummary& s) {
  json j;
  j["config_hash"] = s.config_hash;
  j["seed"] = s.seed;
  j["alpha"] = s.alpha;
  j["steps"] = s.steps;
  j["failed"] = s.failed;
  j["error"] = s.error;
  j["final_bin_reward"] = optional_json(s.final_bin_reward);
  j["final_bin_reward_std"] = s.final_bin_reward_std;
  j["threshold"] = optional_json(s.threshold);
  j["threshold_bin"] = s.threshold_bin ? json(*s.threshold_bin) : json(nullptr);
  j["steps_to_threshold"] = s.steps_to_threshold ? json(*s.steps_to_threshold) : json(nullptr);
  j["final_entropy"] = optional_json(s.final_entropy);
  j["trailing_entropy"] = optional_json(s.trailing_entropy);
  j["buffer"] = {{"count", s.buffer.count},
                 {"mean", vector_json(s.buffer.mean)},
                 {"m2", vector_json(s.buffer.m2)}};
  return j.dump(2) + "\n";
}

RunOutput run_experiment(const ExperimentConfig& cfg, std::uint64_t seed, Real alpha,
                         const std::string& out_dir) {
  ExperimentConfig cell = cfg;
  cell.train.smirl.alpha = alpha;
  validate(cell);

  const std::filesystem::path dir(out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create " + out_dir + ": " + ec.message());
  const std::filesystem::path csv_path = dir / run_csv_name(seed, alpha);
  std::ofstream csv(csv_path, std::ios::binary);
  if (!csv) throw std::runtime_error("cannot write " + csv_path.string());
  csv << csv_header();

  RunOutput out;
  RunSummary& summary = out.summary;
  summary.config_hash = config_hash(cfg);
  summary.seed = seed;
  summary.alpha = alpha;

  const auto t0 = std::chrono::steady_clock::now();
  const auto sink = [&](const StepRecord& r) {
    csv << csv_row(r);
    out.series.r_energy.push_back(r.r_energy);
    out.series.entropy.push_back(r.sample_entropy);
  };
  try {
    const TrainResult result = train(cell.train, seed, sink);
    summary.steps = result.steps;
    summary.buffer = {result.buffer.count(), result.buffer.mean(), result.buffer.m2()};
  } catch (const TrainingAborted& e) {
    summary.failed = true;
    summary.error = e.what();
    summary.steps = static_cast<long>(out.series.r_energy.size());
    csv << csv_truncation_marker(e.what());
  }
  summary.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  csv.close();
  if (!csv) throw std::runtime_error("write failed for " + csv_path.string());

  summarize_series(out.series, cfg, std::nullopt, summary);
  write_file(dir / run_summary_name(seed, alpha), summary_json(summary));
  return out;
}

std::optional<Real> median_of(std::vector<std::optional<Real>> values) {
  if (values.empty()) return std::nullopt;
  std::stable_sort(values.begin(), values.end(),
                   [](const std::optional<Real>& a, const std::optional<Real>& b) {
                     if (!a) return false;
                     if (!b) return true;
                     return *a < *b;
                   });
  const std::size_t n = values.size();
  if (n % 2 == 1) return values[n / 2];
  const auto& lo = values[n / 2 - 1];
  const auto& hi = values[n / 2];
  if (!lo || !hi) return std::nullopt;
  return 0.5 * (*lo + *hi);
}

SweepReport sweep(const ExperimentConfig& cfg, const std::string& out_dir, bool quiet) {
  validate(cfg);
  struct Cell {
    Real alpha;
    std::uint64_t seed;
  };
  std::vector<Cell> cells;
  for (Real a : cfg.alphas)
    for (std::uint64_t s : cfg.seeds) cells.push_back({a, s});

  std::vector<RunOutput> outputs(cells.size());
  std::vector<std::string> io_errors(cells.size());
  std::atomic<std::size_t> next{0};
  std::mutex log_mutex;
  const auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      try {
        outputs[i] = run_experiment(cfg, cells[i].seed, cells[i].alpha, out_dir);
      } catch (const std::exception& e) {
        // Keep going; the report marks the cell failed.
        outputs[i].summary.seed = cells[i].seed;
        outputs[i].summary.alpha = cells[i].alpha;
        outputs[i].summary.config_hash = config_hash(cfg);
        outputs[i].summary.failed = true;
        outputs[i].summary.error = e.what();
        io_errors[i] = e.what();
      }
      if (!quiet) {
        const RunSummary& s = outputs[i].summary;
        std::lock_guard<std::mutex> lock(log_mutex);
        std::cout << "alpha=" << alpha_tag(s.alpha) << " seed=" << s.seed
                  << (s.failed ? " FAILED: " + s.error : "")
                  << " final_reward=" << opt_text(s.final_bin_reward, "%.5f")
                  << " wall=" << opt_text(s.wall_seconds, "%.1fs") << std::endl;
      }
    }
  };
  unsigned threads = cfg.threads > 0 ? static_cast<unsigned>(cfg.threads)
                                     : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(cells.size()));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();

  SweepReport report;
  report.reference_alpha = *std::min_element(cfg.alphas.begin(), cfg.alphas.end());
  std::vector<std::optional<Real>> reference_finals;
  for (std::size_t i = 0; i < cells.size(); ++i)
    if (cells[i].alpha == report.reference_alpha && !outputs[i].summary.failed)
      reference_finals.push_back(outputs[i].summary.final_bin_reward);
  const std::optional<Real> reference = median_of(reference_finals);
  if (reference) report.threshold = convergence_threshold(*reference);

  const std::filesystem::path dir(out_dir);
  for (std::size_t i = 0; i < cells.size(); ++i) {
    RunSummary& s = outputs[i].summary;
    if (io_errors[i].empty() && report.threshold) {
      summarize_series(outputs[i].series, cfg, report.threshold, s);
      write_file(dir / run_summary_name(s.seed, s.alpha), summary_json(s));
    }
    report.cells.push_back(s);
  }

  std::vector<BandSeries> reward_curves, entropy_curves;
  for (Real a : cfg.alphas) {
    AlphaRow row;
    row.alpha = a;
    std::vector<std::optional<Real>> stt, fin, ent, trail;
    std::vector<const RunSeries*> runs;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (cells[i].alpha != a) continue;
      ++row.runs;
      const RunSummary& s = report.cells[i];
      if (s.failed) {
        ++row.failed;
        continue;
      }
      stt.push_back(s.steps_to_threshold ? std::optional<Real>(Real(*s.steps_to_threshold))
                                         : std::nullopt);
      fin.push_back(s.final_bin_reward);
      ent.push_back(s.final_entropy);
      trail.push_back(s.trailing_entropy);
      runs.push_back(&outputs[i].series);
    }
    row.median_steps_to_threshold = median_of(stt);
    row.median_final_reward = median_of(fin);
    row.median_final_entropy = median_of(ent);
    row.median_trailing_entropy = median_of(trail);
    report.rows.push_back(row);
    const std::string label = "alpha = " + alpha_tag(a);
    reward_curves.push_back(pooled_band(label, runs, false, cfg.bin));
    entropy_curves.push_back(pooled_band(label, runs, true, cfg.bin));
  }

  write_file(dir / "report.json", report_json(report, cfg));
  write_file(dir / "report.txt", report_table(report));
  write_file(dir / "fig_reward.svg",
             band_panel_svg("Energy reward (binned every " + std::to_string(cfg.bin) + " days)",
                            "day", "r_energy", reward_curves));
  write_file(dir / "fig_entropy.svg",
             band_panel_svg("Summed hourly sample entropy (binned every " +
                                std::to_string(cfg.bin) + " days)",
                            "day", "sample entropy", entropy_curves));
  return report;
}

std::string report_json(const SweepReport& report, const ExperimentConfig& cfg) {
  json j;
  j["config_hash"] = config_hash(cfg);
  j["reference_alpha"] = report.reference_alpha;
  j["threshold"] = optional_json(report.threshold);
  json rows = json::array();
  for (const AlphaRow& r : report.rows)
    rows.push_back({{"alpha", r.alpha},
                    {"runs", r.runs},
                    {"failed", r.failed},
                    {"median_steps_to_threshold", optional_json(r.median_steps_to_threshold)},
                    {"median_final_reward", optional_json(r.median_final_reward)},
                    {"median_final_entropy", optional_json(r.median_final_entropy)},
                    {"median_trailing_entropy", optional_json(r.median_trailing_entropy)}});
  j["rows"] = rows;
  json cells = json::array();
  for (const RunSummary& s : report.cells) cells.push_back(json::parse(summary_json(s)));
  j["cells"] = cells;
  return j.dump(2) + "\n";
}

std::string report_table(const SweepReport& report) {
  std::string out = "threshold (reference alpha " + alpha_tag(report.reference_alpha) +
                    "): " + opt_text(report.threshold, "%.6f") + "\n";
  char line[256];
  std::snprintf(line, sizeof(line), "%-8s %5s %7s %16s %14s %14s %16s\n", "alpha", "runs",
                "failed", "median_steps", "median_reward", "median_entropy",
                "median_trailing");
  out += line;
  for (const AlphaRow& r : report.rows) {
    std::snprintf(line, sizeof(line), "%-8s %5d %7d %16s %14s %14s %16s\n",
                  alpha_tag(r.alpha).c_str(), r.runs, r.failed,
                  opt_text(r.median_steps_to_threshold, "%.0f").c_str(),
                  opt_text(r.median_final_reward, "%.5f").c_str(),
                  opt_text(r.median_final_entropy, "%.4f").c_str(),
                  opt_text(r.median_trailing_entropy, "%.4f").c_str());
    out += line;
  }
  return out;
}

}  // namespace drbench
