#ifndef DRBENCH_ENV_HPP
#define DRBENCH_ENV_HPP

#include <cstdint>

#include "drbench/types.hpp"

namespace drbench {

/// Simulated office worker: an un-influenced daily load that is shifted
/// between hours according to the offered prices.
struct WorkerConfig {
  DemandProfile baseline;
  Real elasticity = 1.0;
  Real noise_scale = 0.0;
};

struct EnvConfig {
  WorkerConfig worker;
  GridPriceSchedule grid;
  Real p_max = 10.0;
  int episode_length = 30;
};

/// Office profile used when the config file does not override it. Peaks
/// around midday, 46 kWh in total.
DemandProfile default_baseline();

/// Off-peak 0.10, peak 0.30 over hours 5-8 (1-indexed).
GridPriceSchedule default_grid_schedule();

EnvConfig default_env_config();

/// Throws std::invalid_argument naming the offending field.
void validate(const EnvConfig& cfg);

/// Throws DomainError unless every price is finite and in [0, p_max].
void validate_prices(const PriceVector& prices, Real p_max);

/// Exponential price-elastic load shift with conserved daily total:
///   d_i = B * b_i exp(-beta p_i) / sum_j b_j exp(-beta p_j),  B = sum_j b_j.
/// With noise, each share is perturbed by max(0, 1 + noise_scale * z_i) and
/// the profile is rescaled back to B. `rng` is only drawn from when
/// noise_scale > 0.
DemandProfile worker_response(const PriceVector& prices, const WorkerConfig& cfg,
                              Rng& rng);

/// -ln(d . g). Throws DomainError when d . g <= 0.
Real energy_reward(const DemandProfile& demand, const GridPriceSchedule& grid);

struct StepResult {
  DemandProfile obs;
  Real r_energy = 0;
  bool done = false;
};

/// Each step is one day. The worker is memoryless, so the only state is the
/// day counter and the noise stream.
class Environment {
 public:
  Environment(EnvConfig cfg, std::uint64_t seed);

  /// Restarts the episode. The initial observation is the worker's response
  /// to uniform prices at p_max / 2.
  DemandProfile reset();

  StepResult step(const PriceVector& action);

  const EnvConfig& config() const { return cfg_; }
  long step_count() const { return step_count_; }

 private:
  EnvConfig cfg_;
  Rng rng_;
  long step_count_ = 0;
};

}  // namespace drbench

#endif  // DRBENCH_ENV_HPP
