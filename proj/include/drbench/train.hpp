#ifndef DRBENCH_TRAIN_HPP
#define DRBENCH_TRAIN_HPP

#include <cstdint>
#include <functional>
#include <string_view>
#include <vector>

#include "drbench/agent.hpp"
#include "drbench/env.hpp"
#include "drbench/metrics.hpp"
#include "drbench/sampler.hpp"
#include "drbench/smirl.hpp"

namespace drbench {

/// Whether the policy sees the buffer statistics next to the raw demand.
/// `auto` augments exactly when alpha > 0, so alpha = 0 is plain PPO.
enum class AugmentMode { kAuto, kOn, kOff };

std::string_view to_string(AugmentMode mode);
AugmentMode parse_augment_mode(std::string_view name);

struct TrainConfig {
  EnvConfig env = default_env_config();
  SmirlConfig smirl;
  PpoConfig ppo;
  FixedLoadConfig fixed_load;
  ConstrainMode constrain_l1 = ConstrainMode::kOff;
  AugmentMode augment = AugmentMode::kAuto;
  /// When false the surprise reward is not evaluated and logged as 0. Only
  /// allowed with alpha = 0.
  bool log_smirl = true;
  int hidden_width = 64;
  int hidden_layers = 2;
  Real log_std_init = 0.0;
  std::size_t entropy_window = 100;
};

void validate(const TrainConfig& cfg);

bool uses_augmentation(const TrainConfig& cfg);

/// Width of the policy input: 10 raw, 31 augmented.
int observation_width(const TrainConfig& cfg);

/// Policy input. Demand and mean are divided by the baseline total, sigma by
/// sigma_init.
VectorX policy_input(const TrainConfig& cfg, const SmirlBuffer<Real>& buffer,
                     const DemandProfile& obs);

struct TrainResult {
  PolicyParams params;
  SmirlBuffer<Real> buffer;
  long steps = 0;
  int updates = 0;
};

using RecordSink = std::function<void(const StepRecord&)>;

/// Runs the control loop for ppo.max_steps days: act, step the environment,
/// score the new demand against the buffer, insert it, mix the rewards, and
/// run a PPO update every batch_size days. Every day is passed to `sink`
/// before the next one starts, so a TrainingAborted leaves the sink with all
/// completed days.
TrainResult train(const TrainConfig& cfg, std::uint64_t seed, const RecordSink& sink);

/// Independent streams derived from one run seed.
enum class RngStream : std::uint64_t { kEnv = 1, kInit = 2, kPolicy = 3, kShuffle = 4, kSampler = 5 };
Rng make_rng(std::uint64_t seed, RngStream stream);

}  // namespace drbench

#endif  // DRBENCH_TRAIN_HPP
