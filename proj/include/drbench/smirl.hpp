#ifndef DRBENCH_SMIRL_HPP
#define DRBENCH_SMIRL_HPP

#include <cmath>
#include <stdexcept>

#include "drbench/types.hpp"

namespace drbench {

struct SmirlConfig {
  Real alpha = 0.12;
  Real sigma_floor = 0.01;
  Real sigma_init = 1.0;
};

/// Throws std::invalid_argument naming the offending field.
inline void validate(const SmirlConfig& cfg) {
  if (!std::isfinite(cfg.alpha) || cfg.alpha < 0)
    throw std::invalid_argument("alpha: must be finite and >= 0");
  if (!std::isfinite(cfg.sigma_floor) || cfg.sigma_floor <= 0)
    throw std::invalid_argument("sigma_floor: must be finite and > 0");
  if (!std::isfinite(cfg.sigma_init) || cfg.sigma_init <= 0)
    throw std::invalid_argument("sigma_init: must be finite and > 0");
}

/// Independent-Gaussian estimate of the visited-state marginal, updated one
/// observation at a time (Welford). Never reset during a run.
template <typename Scalar>
class SmirlBuffer {
 public:
  SmirlBuffer(Eigen::Index dim, Scalar sigma_floor, Scalar sigma_init)
      : mean_(Vector<Scalar>::Zero(dim)),
        m2_(Vector<Scalar>::Zero(dim)),
        sigma_floor_(sigma_floor),
        sigma_init_(sigma_init) {}

  SmirlBuffer(Eigen::Index dim, const SmirlConfig& cfg)
      : SmirlBuffer(dim, Scalar(cfg.sigma_floor), Scalar(cfg.sigma_init)) {}

  /// Restores a snapshot written by a previous run.
  static SmirlBuffer from_snapshot(long count, Vector<Scalar> mean,
                                   Vector<Scalar> m2, Scalar sigma_floor,
                                   Scalar sigma_init) {
    if (mean.size() != m2.size())
      throw std::invalid_argument("SmirlBuffer: mean/m2 size mismatch");
    SmirlBuffer buf(mean.size(), sigma_floor, sigma_init);
    buf.count_ = count;
    buf.mean_ = std::move(mean);
    buf.m2_ = std::move(m2);
    return buf;
  }

  template <typename Derived>
  void update(const Eigen::MatrixBase<Derived>& obs) {
    if (obs.size() != dim())
      throw std::invalid_argument("SmirlBuffer::update: dimension mismatch");
    ++count_;
    const Vector<Scalar> delta = obs - mean_;
    mean_ += delta / Scalar(count_);
    m2_.array() += delta.array() * (obs - mean_).array();
  }

  /// max(sigma_floor, sample std) once two states are seen, sigma_init before.
  Vector<Scalar> sigma() const {
    if (count_ < 2) return Vector<Scalar>::Constant(dim(), sigma_init_);
    return (m2_.array() / Scalar(count_ - 1))
        .sqrt()
        .max(sigma_floor_)
        .matrix();
  }

  Eigen::Index dim() const { return mean_.size(); }
  long count() const { return count_; }
  const Vector<Scalar>& mean() const { return mean_; }
  const Vector<Scalar>& m2() const { return m2_; }
  Scalar sigma_floor() const { return sigma_floor_; }
  Scalar sigma_init() const { return sigma_init_; }

 private:
  long count_ = 0;
  Vector<Scalar> mean_;
  Vector<Scalar> m2_;
  Scalar sigma_floor_;
  Scalar sigma_init_;
};

/// Surprise reward of `obs` under the buffer's current marginal:
///   -sum_i ( ln sigma_i + (s_i - mu_i)^2 / (2 sigma_i^2) ).
/// The Gaussian normalizer (dim/2) ln(2 pi) is not included. Call before
/// inserting `obs` into the buffer.
template <typename Scalar, typename Derived>
Scalar smirl_reward(const SmirlBuffer<Scalar>& buf,
                    const Eigen::MatrixBase<Derived>& obs) {
  if (buf.count() < 1)
    throw std::logic_error("smirl_reward: buffer is empty");
  if (obs.size() != buf.dim())
    throw std::invalid_argument("smirl_reward: dimension mismatch");
  const Vector<Scalar> sigma = buf.sigma();
  const auto z = (obs - buf.mean()).array() / sigma.array();
  return -(sigma.array().log() + Scalar(0.5) * z.square()).sum();
}

/// Policy input for the augmented decision process:
/// (obs, mu, sigma, count / max_steps).
template <typename Scalar>
struct AugmentedObservation {
  Vector<Scalar> obs;
  Vector<Scalar> mean;
  Vector<Scalar> sigma;
  Scalar count_normalized = 0;

  Vector<Scalar> flatten() const {
    Vector<Scalar> out(obs.size() + mean.size() + sigma.size() + 1);
    out << obs, mean, sigma, count_normalized;
    return out;
  }
};

template <typename Scalar, typename Derived>
AugmentedObservation<Scalar> augment_obs(const SmirlBuffer<Scalar>& buf,
                                         const Eigen::MatrixBase<Derived>& obs,
                                         long max_steps) {
  if (max_steps <= 0)
    throw std::invalid_argument("augment_obs: max_steps must be positive");
  return {obs, buf.mean(), buf.sigma(),
          Scalar(buf.count()) / Scalar(max_steps)};
}

inline Real combined_reward(Real r_energy, Real r_smirl, const SmirlConfig& cfg) {
  return r_energy + cfg.alpha * r_smirl;
}

}  // namespace drbench

#endif  // DRBENCH_SMIRL_HPP
