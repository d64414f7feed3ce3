#ifndef DRBENCH_AGENT_HPP
#define DRBENCH_AGENT_HPP

#include <stdexcept>
#include <vector>

#include "drbench/mlp.hpp"
#include "drbench/types.hpp"

namespace drbench {

inline constexpr Real kLogStdMin = -5.0;
inline constexpr Real kLogStdMax = 2.0;

struct PpoConfig {
  Real learning_rate = 0.003;
  int batch_size = 256;
  int minibatch_size = 32;
  Real clip = 0.3;
  int epochs_per_batch = 8;
  Real gamma = 0.5;
  Real gae_lambda = 0.95;
  Real value_coeff = 0.5;
  Real entropy_coeff = 0.0;
  /// L2 bound on each minibatch gradient, applied separately to the mean
  /// trunk, the log-std vector and the value trunk; 0 disables clipping.
  Real max_grad_norm = 1.0;
  long max_steps = 20000;
};

/// Throws std::invalid_argument naming the offending field.
void validate(const PpoConfig& cfg);

/// Diagonal-Gaussian policy with a state-independent log-std, and a value
/// function on a separate trunk of the same shape.
struct PolicyParams {
  Mlp<Real> policy;
  VectorX log_std;
  Mlp<Real> value;

  Eigen::Index input_size() const { return policy.input_size(); }
  Eigen::Index action_size() const { return log_std.size(); }
  bool all_finite() const;
  /// Policy trunk plus log-std.
  Real policy_squared_norm() const;
  Real value_squared_norm() const;
  Real squared_norm() const;
  PolicyParams zeros_like() const;
  /// this += scale * other
  void axpy(Real scale, const PolicyParams& other);
  void clamp_log_std();
};

struct NetworkShape {
  int input_size = 10;
  int action_size = kHours;
  int hidden_width = 64;
  int hidden_layers = 2;
};

/// Glorot-initialized trunks, mean head scaled by 0.01, value head by 1.
PolicyParams make_policy_params(const NetworkShape& shape, Real log_std_init,
                                Rng& rng);

/// Sum over dimensions of the Gaussian log-density of `raw` under
/// N(mean, exp(log_std)^2).
Real gaussian_logprob(const VectorX& mean, const VectorX& log_std,
                      const VectorX& raw);

/// p_max * sigmoid(raw), with raw clamped to +-30 so entries stay inside
/// (0, p_max) in double precision.
PriceVector squash_action(const VectorX& raw, Real p_max);

/// Inverse of squash_action for prices in (0, p_max).
VectorX unsquash_action(const PriceVector& action, Real p_max);

struct ActionSample {
  VectorX raw;
  PriceVector action;
  Real logprob = 0;
};

ActionSample policy_act(const PolicyParams& params, const VectorX& obs,
                        Real p_max, Rng& rng);

VectorX policy_mean(const PolicyParams& params, const VectorX& obs);

Real policy_logprob(const PolicyParams& params, const VectorX& obs,
                    const VectorX& raw_action);

Real value(const PolicyParams& params, const VectorX& obs);

struct Transition {
  VectorX aug_obs;
  VectorX raw_action;
  PriceVector action;
  Real logprob = 0;
  Real value = 0;
  Real r_combined = 0;
  Real r_energy = 0;
  Real r_smirl = 0;
  bool done = false;
};

struct GaeResult {
  VectorX advantages;
  VectorX returns;
};

/// Generalized advantage estimation over `traj` using r_combined. Episode
/// boundaries are the done flags; `bootstrap_value` is V of the state after
/// the last transition (ignored when that transition is terminal).
GaeResult compute_gae(const std::vector<Transition>& traj, Real gamma,
                      Real lambda, Real bootstrap_value = 0.0);

/// Zero mean, unit (population) std. Only centers when the spread vanishes.
VectorX normalize_advantages(const VectorX& advantages);

/// Column-major batch ready for the loss.
struct PpoBatch {
  MatrixX obs;
  MatrixX raw_actions;
  VectorX logprob_old;
  VectorX advantages;
  VectorX returns;
};

struct LossStats {
  Real policy_loss = 0;
  Real value_loss = 0;
  Real entropy = 0;
  Real total = 0;
  Real clip_fraction = 0;
  Real mean_ratio = 0;
};

/// Clipped-surrogate loss plus value_coeff * mean squared value error minus
/// entropy_coeff * policy entropy. When `grad` is non-null it receives the
/// exact gradient of `total` (overwritten, same shape as params).
LossStats ppo_loss(const PolicyParams& params, const PpoBatch& batch,
                   const PpoConfig& cfg, PolicyParams* grad);

/// Non-finite loss during an update.
class TrainingAborted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct UpdateStats {
  LossStats last;
  Real mean_policy_loss = 0;
  Real mean_value_loss = 0;
  int sgd_steps = 0;
};

/// One PPO update: GAE, per-batch advantage normalization, then
/// epochs_per_batch passes of plain SGD over shuffled minibatches. Throws
/// TrainingAborted on a non-finite loss.
UpdateStats ppo_update(PolicyParams& params, const std::vector<Transition>& batch,
                       Real bootstrap_value, const PpoConfig& cfg, Rng& rng);

}  // namespace drbench

#endif  // DRBENCH_AGENT_HPP
