#ifndef DRBENCH_METRICS_HPP
#define DRBENCH_METRICS_HPP

#include <cstddef>
#include <cstdint>
#include <deque>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "drbench/types.hpp"

namespace drbench {

/// Trailing window of observed demand profiles.
class EntropyTracker {
 public:
  explicit EntropyTracker(std::size_t window = 100, Real variance_floor = 1e-12);

  /// Appends and evicts the oldest entry once the window is full.
  void push(const DemandProfile& obs);

  std::size_t size() const { return items_.size(); }
  std::size_t window() const { return window_; }
  Real variance_floor() const { return variance_floor_; }
  const std::deque<DemandProfile>& items() const { return items_; }

 private:
  std::size_t window_;
  Real variance_floor_;
  std::deque<DemandProfile> items_;
};

/// Sum over hours of 0.5 ln(2 pi e sigma_i^2), sigma_i^2 the floored sample
/// variance of the window. Empty while fewer than two profiles are held.
std::optional<Real> sample_entropy(const EntropyTracker& tracker);

/// Same quantity over an arbitrary set of column samples (one per column).
Real gaussian_sample_entropy(const MatrixX& samples, Real variance_floor);

struct BinStat {
  Real mean = 0;
  Real std = 0;  // population std of the bin
  std::size_t count = 0;
};

/// Consecutive non-overlapping bins; the final partial bin is kept.
std::vector<BinStat> bin_series(const std::vector<Real>& values, std::size_t bin = 100);

/// First bin whose mean reaches `threshold` and after which every bin stays
/// at or above threshold - tolerance.
std::optional<std::size_t> steps_to_threshold(const std::vector<BinStat>& bins,
                                              Real threshold, Real tolerance = 0.05);

struct StepRecord {
  long step = 0;
  std::uint64_t seed = 0;
  Real alpha = 0;
  Real r_energy = 0;
  Real r_smirl = 0;
  Real r_combined = 0;
  std::optional<Real> sample_entropy;
  PriceVector prices = PriceVector::Zero();
  DemandProfile demand = DemandProfile::Zero();
};

/// Shortest decimal text that parses back to exactly `x`.
std::string format_real(Real x);

/// step,seed,alpha,r_energy,r_smirl,r_combined,sample_entropy,price_1..10,demand_1..10
std::string csv_header();
/// One line-feed terminated row. An undefined entropy is an empty field.
std::string csv_row(const StepRecord& r);
/// Row written after the last record when a run is cut short.
std::string csv_truncation_marker(const std::string& reason);

struct CsvLog {
  std::vector<StepRecord> records;
  bool truncated = false;
};

/// Strict reader for files produced by csv_row. Throws std::runtime_error on
/// a malformed header or row.
CsvLog read_csv(std::istream& in);
CsvLog read_csv_file(const std::string& path);

}  // namespace drbench

#endif  // DRBENCH_METRICS_HPP
