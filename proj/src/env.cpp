#include "drbench/env.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace drbench {

DemandProfile default_baseline() {
  DemandProfile b;
  b << 3.0, 4.0, 5.0, 5.0, 6.0, 6.0, 5.0, 5.0, 4.0, 3.0;
  return b;
}

GridPriceSchedule default_grid_schedule() {
  GridPriceSchedule g = GridPriceSchedule::Constant(0.10);
  g.segment<4>(4).setConstant(0.30);
  return g;
}

EnvConfig default_env_config() {
  EnvConfig cfg;
  cfg.worker.baseline = default_baseline();
  cfg.grid = default_grid_schedule();
  return cfg;
}

void validate(const EnvConfig& cfg) {
  const WorkerConfig& w = cfg.worker;
  if (!w.baseline.allFinite() || (w.baseline.array() < 0).any())
    throw std::invalid_argument("baseline: entries must be finite and >= 0");
  if (!(w.baseline.sum() > 0))
    throw std::invalid_argument("baseline: total demand must be positive");
  if (!std::isfinite(w.elasticity) || w.elasticity < 0)
    throw std::invalid_argument("elasticity: must be finite and >= 0");
  if (!std::isfinite(w.noise_scale) || w.noise_scale < 0)
    throw std::invalid_argument("noise_scale: must be finite and >= 0");
  if (!cfg.grid.allFinite() || (cfg.grid.array() <= 0).any())
    throw std::invalid_argument("grid: entries must be finite and > 0");
  if (!std::isfinite(cfg.p_max) || cfg.p_max <= 0)
    throw std::invalid_argument("p_max: must be finite and > 0");
  if (cfg.episode_length < 1)
    throw std::invalid_argument("episode_length: must be >= 1");
}

void validate_prices(const PriceVector& prices, Real p_max) {
  for (int i = 0; i < kHours; ++i) {
    const Real p = prices(i);
    if (!std::isfinite(p) || p < 0 || p > p_max)
      throw DomainError("price " + std::to_string(i + 1) + " outside [0, p_max]");
  }
}

DemandProfile worker_response(const PriceVector& prices, const WorkerConfig& cfg,
                              Rng& rng) {
  if (!prices.allFinite()) throw DomainError("worker_response: prices must be finite");
  const Real total = cfg.baseline.sum();
  // Shift by the minimum price first; the shares are invariant to it and the
  // exponentials stay in range for large elasticities.
  const Real floor = prices.minCoeff();
  DemandProfile weights =
      cfg.baseline.array() * (-cfg.elasticity * (prices.array() - floor)).exp();
  DemandProfile demand = total * weights / weights.sum();

  if (cfg.noise_scale > 0) {
    std::normal_distribution<Real> normal(0.0, 1.0);
    for (int i = 0; i < kHours; ++i)
      demand(i) *= std::max<Real>(0.0, 1.0 + cfg.noise_scale * normal(rng));
    const Real s = demand.sum();
    // Every factor clipped to zero: fall back to the noise-free profile.
    if (s > 0)
      demand *= total / s;
    else
      demand = total * weights / weights.sum();
  }
  return demand;
}

Real energy_reward(const DemandProfile& demand, const GridPriceSchedule& grid) {
  const Real cost = demand.dot(grid);
  if (!(cost > 0)) throw DomainError("energy_reward: d . g must be positive");
  return -std::log(cost);
}

Environment::Environment(EnvConfig cfg, std::uint64_t seed)
    : cfg_(std::move(cfg)), rng_(seed) {
  validate(cfg_);
}

DemandProfile Environment::reset() {
  step_count_ = 0;
  const PriceVector mid = PriceVector::Constant(cfg_.p_max / 2);
  return worker_response(mid, cfg_.worker, rng_);
}

StepResult Environment::step(const PriceVector& action) {
  validate_prices(action, cfg_.p_max);
  StepResult out;
  out.obs = worker_response(action, cfg_.worker, rng_);
  out.r_energy = energy_reward(out.obs, cfg_.grid);
  ++step_count_;
  out.done = step_count_ % cfg_.episode_length == 0;
  return out;
}

}  // namespace drbench
