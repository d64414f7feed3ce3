#include "drbench/metrics.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace drbench {

namespace {

constexpr Real kTwoPiE = 17.079468445347132;  // 2 pi e
constexpr const char* kTruncationTag = "#truncated";

Real parse_real(std::string_view s, const std::string& what) {
  Real x = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw std::runtime_error("csv: cannot parse " + what + " from '" + std::string(s) + "'");
  return x;
}

template <typename Int>
Int parse_int(std::string_view s, const std::string& what) {
  Int x = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw std::runtime_error("csv: cannot parse " + what + " from '" + std::string(s) + "'");
  return x;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

}  // namespace

EntropyTracker::EntropyTracker(std::size_t window, Real variance_floor)
    : window_(window), variance_floor_(variance_floor) {
  if (window_ < 1) throw std::invalid_argument("window: must be >= 1");
  if (!(variance_floor_ > 0)) throw std::invalid_argument("variance_floor: must be > 0");
}

void EntropyTracker::push(const DemandProfile& obs) {
  if (items_.size() == window_) items_.pop_front();
  items_.push_back(obs);
}

Real gaussian_sample_entropy(const MatrixX& samples, Real variance_floor) {
  const Eigen::Index n = samples.cols();
  if (n < 2) throw std::invalid_argument("gaussian_sample_entropy: need >= 2 samples");
  const VectorX mean = samples.rowwise().mean();
  const VectorX var =
      (samples.colwise() - mean).array().square().rowwise().sum() / Real(n - 1);
  return (0.5 * (kTwoPiE * var.array().max(variance_floor)).log()).sum();
}

std::optional<Real> sample_entropy(const EntropyTracker& tracker) {
  if (tracker.size() < 2) return std::nullopt;
  MatrixX samples(kHours, static_cast<Eigen::Index>(tracker.size()));
  Eigen::Index j = 0;
  for (const DemandProfile& d : tracker.items()) samples.col(j++) = d;
  return gaussian_sample_entropy(samples, tracker.variance_floor());
}

std::vector<BinStat> bin_series(const std::vector<Real>& values, std::size_t bin) {
  if (bin < 1) throw std::invalid_argument("bin_series: bin must be >= 1");
  std::vector<BinStat> out;
  for (std::size_t start = 0; start < values.size(); start += bin) {
    const std::size_t end = std::min(values.size(), start + bin);
    BinStat b;
    b.count = end - start;
    Real sum = 0;
    for (std::size_t i = start; i < end; ++i) sum += values[i];
    b.mean = sum / Real(b.count);
    Real ss = 0;
    for (std::size_t i = start; i < end; ++i) ss += (values[i] - b.mean) * (values[i] - b.mean);
    b.std = std::sqrt(ss / Real(b.count));
    out.push_back(b);
  }
  return out;
}

std::optional<std::size_t> steps_to_threshold(const std::vector<BinStat>& bins,
                                              Real threshold, Real tolerance) {
  // Scan backwards for the longest suffix that stays above the lower band.
  std::size_t suffix_start = bins.size();
  while (suffix_start > 0 && bins[suffix_start - 1].mean >= threshold - tolerance)
    --suffix_start;
  for (std::size_t i = suffix_start; i < bins.size(); ++i)
    if (bins[i].mean >= threshold) return i;
  return std::nullopt;
}

std::string format_real(Real x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  if (ec != std::errc()) throw std::runtime_error("format_real: buffer too small");
  return std::string(buf, ptr);
}

std::string csv_header() {
  std::string h = "step,seed,alpha,r_energy,r_smirl,r_combined,sample_entropy";
  for (int i = 1; i <= kHours; ++i) h += ",price_" + std::to_string(i);
  for (int i = 1; i <= kHours; ++i) h += ",demand_" + std::to_string(i);
  return h + "\n";
}

std::string csv_row(const StepRecord& r) {
  std::string s = std::to_string(r.step) + "," + std::to_string(r.seed) + "," +
                  format_real(r.alpha) + "," + format_real(r.r_energy) + "," +
                  format_real(r.r_smirl) + "," + format_real(r.r_combined) + ",";
  if (r.sample_entropy) s += format_real(*r.sample_entropy);
  for (int i = 0; i < kHours; ++i) s += "," + format_real(r.prices(i));
  for (int i = 0; i < kHours; ++i) s += "," + format_real(r.demand(i));
  return s + "\n";
}

std::string csv_truncation_marker(const std::string& reason) {
  std::string clean = reason;
  for (char& c : clean)
    if (c == ',' || c == '\n' || c == '\r') c = ' ';
  return std::string(kTruncationTag) + "," + clean + "\n";
}

CsvLog read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line + "\n" != csv_header())
    throw std::runtime_error("csv: missing or unexpected header");
  CsvLog log;
  constexpr std::size_t kColumns = 7 + 2 * kHours;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.rfind(kTruncationTag, 0) == 0) {
      log.truncated = true;
      break;
    }
    const auto f = split(line, ',');
    if (f.size() != kColumns)
      throw std::runtime_error("csv: expected " + std::to_string(kColumns) +
                               " fields, got " + std::to_string(f.size()));
    StepRecord r;
    r.step = parse_int<long>(f[0], "step");
    r.seed = parse_int<std::uint64_t>(f[1], "seed");
    r.alpha = parse_real(f[2], "alpha");
    r.r_energy = parse_real(f[3], "r_energy");
    r.r_smirl = parse_real(f[4], "r_smirl");
    r.r_combined = parse_real(f[5], "r_combined");
    if (!f[6].empty()) r.sample_entropy = parse_real(f[6], "sample_entropy");
    for (int i = 0; i < kHours; ++i) {
      r.prices(i) = parse_real(f[7 + i], "price");
      r.demand(i) = parse_real(f[7 + kHours + i], "demand");
    }
    log.records.push_back(r);
  }
  return log;
}

CsvLog read_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_csv(in);
}

}  // namespace drbench
