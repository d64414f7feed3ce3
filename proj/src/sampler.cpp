#include "drbench/sampler.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace drbench {

std::string_view to_string(ConstrainMode mode) {
  switch (mode) {
    case ConstrainMode::kOff: return "off";
    case ConstrainMode::kProject: return "project";
    case ConstrainMode::kSample: return "sample";
  }
  return "off";
}

ConstrainMode parse_constrain_mode(std::string_view name) {
  if (name == "off") return ConstrainMode::kOff;
  if (name == "project") return ConstrainMode::kProject;
  if (name == "sample") return ConstrainMode::kSample;
  throw std::invalid_argument("constrain_l1: expected off, project or sample, got '" +
                              std::string(name) + "'");
}

void validate(const FixedLoadConfig& cfg) {
  if (!std::isfinite(cfg.load_magnitude) || cfg.load_magnitude < 0)
    throw std::invalid_argument("load_magnitude: must be finite and >= 0");
  if (!std::isfinite(cfg.norm_target) || cfg.norm_target <= 0)
    throw std::invalid_argument("norm_target: must be finite and > 0");
}

VectorX sample_fixed_l1(int dim, Real norm_target, Rng& rng) {
  if (dim < 1) throw std::invalid_argument("sample_fixed_l1: dim must be >= 1");
  if (!(norm_target > 0))
    throw std::invalid_argument("sample_fixed_l1: norm target must be > 0");
  std::exponential_distribution<Real> exponential(1.0);
  VectorX e(dim);
  Real total = 0;
  do {
    for (int i = 0; i < dim; ++i) e(i) = exponential(rng);
    total = e.sum();
  } while (!(total > 0));
  VectorX p = (norm_target / total) * e;
  if (dim == 1) p(0) = norm_target;
  return p;
}

VectorX project_to_l1(const VectorX& prices, Real norm_target) {
  if ((prices.array() < 0).any())
    throw DomainError("project_to_l1: prices must be non-negative");
  const Real total = prices.sum();
  if (!(total > 0)) throw DomainError("project_to_l1: zero vector has no projection");
  return (norm_target / total) * prices;
}

Real fixed_price_day(const VectorX& prices, const FixedLoadConfig& cfg) {
  return cfg.load_magnitude * prices.sum();
}

}  // namespace drbench
