#ifndef DRBENCH_CONFIG_HPP
#define DRBENCH_CONFIG_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "drbench/train.hpp"

namespace drbench {

/// Everything one invocation of the bench needs. `train.smirl.alpha` is the
/// weight of a single run; `alphas` is the sweep grid.
struct ExperimentConfig {
  TrainConfig train;
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  std::vector<Real> alphas{0.0, 0.01, 0.12, 0.25};
  std::string output_dir = "out";
  std::size_t bin = 100;
  Real threshold_tolerance = 0.05;
  /// Trailing window (days) used for the reported trailing entropy.
  long trailing_window = 2000;
  /// 0 picks std::thread::hardware_concurrency().
  int threads = 0;
};

class ConfigError : public std::runtime_error {
 public:
  enum class Kind { kMissingFile, kSyntax, kUnknownKey, kType, kInvariant };
  ConfigError(Kind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// Throws ConfigError(kInvariant) naming the offending key.
void validate(const ExperimentConfig& cfg);

/// Strict JSON parse: unknown keys and wrong types are errors, omitted keys
/// keep their defaults, a blank document means all defaults.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config(const std::string& path);

/// Canonical JSON text with every key present (sorted, 2-space indent).
std::string serialize_config(const ExperimentConfig& cfg);

/// FNV-1a 64 of the canonical serialization, as 16 hex digits.
std::string config_hash(const ExperimentConfig& cfg);

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b);

}  // namespace drbench

#endif  // DRBENCH_CONFIG_HPP
