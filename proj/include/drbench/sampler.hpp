#ifndef DRBENCH_SAMPLER_HPP
#define DRBENCH_SAMPLER_HPP

#include <string_view>

#include "drbench/types.hpp"

namespace drbench {

/// Constant hourly load `load_magnitude` (c) and target L1 norm of the price
/// vector `norm_target` (C).
struct FixedLoadConfig {
  Real load_magnitude = 1.0;
  Real norm_target = 10.0;
};

/// How agent actions are tied to the fixed-L1 constraint during training.
///   off     - untouched
///   project - every emitted price vector is rescaled to norm C
///   sample  - the first batch is drawn uniformly from the scaled simplex
enum class ConstrainMode { kOff, kProject, kSample };

std::string_view to_string(ConstrainMode mode);
/// Throws std::invalid_argument on an unknown name.
ConstrainMode parse_constrain_mode(std::string_view name);

void validate(const FixedLoadConfig& cfg);

/// Uniform draw from {p >= 0 : sum p = C} by normalizing standard
/// exponentials.
VectorX sample_fixed_l1(int dim, Real norm_target, Rng& rng);

/// C * p / sum(p). Throws DomainError for negative entries or a zero sum.
VectorX project_to_l1(const VectorX& prices, Real norm_target);

/// Day's total price under constant load: c * sum(p).
Real fixed_price_day(const VectorX& prices, const FixedLoadConfig& cfg);

}  // namespace drbench

#endif  // DRBENCH_SAMPLER_HPP
