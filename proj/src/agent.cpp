#include "drbench/agent.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace drbench {

namespace {

constexpr Real kHalfLog2Pi = 0.91893853320467274178;  // 0.5 ln(2 pi)
constexpr Real kSquashLimit = 30.0;

}  // namespace

void validate(const PpoConfig& cfg) {
  if (!std::isfinite(cfg.learning_rate) || cfg.learning_rate < 0)
    throw std::invalid_argument("learning_rate: must be finite and >= 0");
  if (cfg.batch_size < 1)
    throw std::invalid_argument("batch_size: must be >= 1");
  if (cfg.minibatch_size < 1 || cfg.minibatch_size > cfg.batch_size)
    throw std::invalid_argument("minibatch_size: must be in [1, batch_size]");
  if (!(cfg.clip > 0 && cfg.clip < 1))
    throw std::invalid_argument("clip: must be in (0, 1)");
  if (cfg.epochs_per_batch < 1)
    throw std::invalid_argument("epochs_per_batch: must be >= 1");
  if (!(cfg.gamma >= 0 && cfg.gamma <= 1))
    throw std::invalid_argument("gamma: must be in [0, 1]");
  if (!(cfg.gae_lambda >= 0 && cfg.gae_lambda <= 1))
    throw std::invalid_argument("gae_lambda: must be in [0, 1]");
  if (!std::isfinite(cfg.value_coeff) || cfg.value_coeff < 0)
    throw std::invalid_argument("value_coeff: must be finite and >= 0");
  if (!std::isfinite(cfg.entropy_coeff) || cfg.entropy_coeff < 0)
    throw std::invalid_argument("entropy_coeff: must be finite and >= 0");
  if (!std::isfinite(cfg.max_grad_norm) || cfg.max_grad_norm < 0)
    throw std::invalid_argument("max_grad_norm: must be finite and >= 0");
  if (cfg.max_steps < 0)
    throw std::invalid_argument("max_steps: must be >= 0");
}

bool PolicyParams::all_finite() const {
  return policy.all_finite() && log_std.allFinite() && value.all_finite();
}

namespace {

Real mlp_squared_norm(const Mlp<Real>& net) {
  Real total = 0;
  for (std::size_t l = 0; l < net.num_layers(); ++l)
    total += net.weights[l].squaredNorm() + net.biases[l].squaredNorm();
  return total;
}

}  // namespace

Real PolicyParams::policy_squared_norm() const {
  return mlp_squared_norm(policy) + log_std.squaredNorm();
}

Real PolicyParams::value_squared_norm() const { return mlp_squared_norm(value); }

Real PolicyParams::squared_norm() const {
  return policy_squared_norm() + value_squared_norm();
}

PolicyParams PolicyParams::zeros_like() const {
  return {policy.zeros_like(), VectorX::Zero(log_std.size()), value.zeros_like()};
}

void PolicyParams::axpy(Real scale, const PolicyParams& other) {
  policy.axpy(scale, other.policy);
  log_std += scale * other.log_std;
  value.axpy(scale, other.value);
}

void PolicyParams::clamp_log_std() {
  log_std = log_std.cwiseMax(kLogStdMin).cwiseMin(kLogStdMax);
}

PolicyParams make_policy_params(const NetworkShape& shape, Real log_std_init,
                                Rng& rng) {
  std::vector<int> trunk{shape.input_size};
  for (int l = 0; l < shape.hidden_layers; ++l) trunk.push_back(shape.hidden_width);

  std::vector<int> policy_sizes = trunk;
  policy_sizes.push_back(shape.action_size);
  std::vector<int> value_sizes = trunk;
  value_sizes.push_back(1);

  PolicyParams p{Mlp<Real>(policy_sizes),
                 VectorX::Constant(shape.action_size, log_std_init),
                 Mlp<Real>(value_sizes)};
  p.policy.init(rng, 0.01);
  p.value.init(rng, 1.0);
  p.clamp_log_std();
  return p;
}

Real gaussian_logprob(const VectorX& mean, const VectorX& log_std,
                      const VectorX& raw) {
  const auto z = (raw - mean).array() / log_std.array().exp();
  return (-0.5 * z.square() - log_std.array() - kHalfLog2Pi).sum();
}

PriceVector squash_action(const VectorX& raw, Real p_max) {
  if (raw.size() != kHours)
    throw std::invalid_argument("squash_action: expected one value per hour");
  const auto clamped = raw.array().max(-kSquashLimit).min(kSquashLimit);
  return (p_max / (1.0 + (-clamped).exp())).matrix();
}

VectorX unsquash_action(const PriceVector& action, Real p_max) {
  const auto u = (action.array() / p_max).max(1e-12).min(1.0 - 1e-12);
  return (u / (1.0 - u)).log().matrix();
}

VectorX policy_mean(const PolicyParams& params, const VectorX& obs) {
  return params.policy.forward(obs).col(0);
}

ActionSample policy_act(const PolicyParams& params, const VectorX& obs,
                        Real p_max, Rng& rng) {
  const VectorX mean = policy_mean(params, obs);
  std::normal_distribution<Real> normal(0.0, 1.0);
  VectorX noise(mean.size());
  for (Eigen::Index i = 0; i < noise.size(); ++i) noise(i) = normal(rng);

  ActionSample s;
  s.raw = mean + (params.log_std.array().exp() * noise.array()).matrix();
  s.action = squash_action(s.raw, p_max);
  s.logprob = gaussian_logprob(mean, params.log_std, s.raw);
  return s;
}

Real policy_logprob(const PolicyParams& params, const VectorX& obs,
                    const VectorX& raw_action) {
  return gaussian_logprob(policy_mean(params, obs), params.log_std, raw_action);
}

Real value(const PolicyParams& params, const VectorX& obs) {
  return params.value.forward(obs)(0, 0);
}

GaeResult compute_gae(const std::vector<Transition>& traj, Real gamma,
                      Real lambda, Real bootstrap_value) {
  if (traj.empty()) throw std::invalid_argument("compute_gae: empty trajectory");
  const auto n = static_cast<Eigen::Index>(traj.size());
  GaeResult out{VectorX(n), VectorX(n)};
  Real next_value = bootstrap_value;
  Real next_adv = 0;
  for (Eigen::Index t = n - 1; t >= 0; --t) {
    const Transition& tr = traj[static_cast<std::size_t>(t)];
    const Real live = tr.done ? 0.0 : 1.0;
    const Real delta = tr.r_combined + gamma * next_value * live - tr.value;
    next_adv = delta + gamma * lambda * live * next_adv;
    out.advantages(t) = next_adv;
    out.returns(t) = next_adv + tr.value;
    next_value = tr.value;
  }
  return out;
}

VectorX normalize_advantages(const VectorX& advantages) {
  const Real mean = advantages.mean();
  VectorX centered = advantages.array() - mean;
  const Real std = std::sqrt(centered.squaredNorm() / Real(centered.size()));
  if (std > 1e-12) centered /= std;
  return centered;
}

LossStats ppo_loss(const PolicyParams& params, const PpoBatch& batch,
                   const PpoConfig& cfg, PolicyParams* grad) {
  const Eigen::Index n = batch.obs.cols();
  const Real inv_n = 1.0 / Real(n);

  const auto policy_trace = params.policy.forward_trace(batch.obs);
  const MatrixX& mean = policy_trace.output();
  const VectorX inv_var = (-2.0 * params.log_std.array()).exp();
  const MatrixX diff = batch.raw_actions - mean;
  const MatrixX z2 = diff.array().square().colwise() * inv_var.array();

  VectorX logprob(n);
  for (Eigen::Index k = 0; k < n; ++k)
    logprob(k) = gaussian_logprob(mean.col(k), params.log_std, batch.raw_actions.col(k));
  const VectorX ratio = (logprob - batch.logprob_old).array().exp();

  LossStats s;
  VectorX dloss_dlogprob(n);
  Real surr_sum = 0;
  int clipped = 0;
  for (Eigen::Index k = 0; k < n; ++k) {
    const Real a = batch.advantages(k);
    const Real rho = ratio(k);
    const Real unclipped = rho * a;
    const Real clipped_term = std::clamp(rho, 1.0 - cfg.clip, 1.0 + cfg.clip) * a;
    surr_sum += std::min(unclipped, clipped_term);
    // The clipped branch is constant in rho, so only the unclipped one carries
    // gradient.
    dloss_dlogprob(k) = unclipped <= clipped_term ? -a * rho * inv_n : 0.0;
    if (std::abs(rho - 1.0) > cfg.clip) ++clipped;
  }
  s.policy_loss = -surr_sum * inv_n;
  s.clip_fraction = Real(clipped) * inv_n;
  s.mean_ratio = ratio.mean();

  const auto value_trace = params.value.forward_trace(batch.obs);
  const VectorX value_err = value_trace.output().row(0).transpose() - batch.returns;
  s.value_loss = value_err.squaredNorm() * inv_n;

  s.entropy = params.log_std.sum() +
              Real(params.log_std.size()) * (kHalfLog2Pi + 0.5);
  s.total = s.policy_loss + cfg.value_coeff * s.value_loss -
            cfg.entropy_coeff * s.entropy;

  if (grad != nullptr) {
    *grad = params.zeros_like();
    // d logprob / d mean = diff / var
    const MatrixX dmean = (diff.array().colwise() * inv_var.array()).rowwise() *
                          dloss_dlogprob.transpose().array();
    params.policy.backward(policy_trace, dmean, grad->policy);

    // d logprob / d log_std_i = z_i^2 - 1
    grad->log_std = (z2.array() - 1.0).matrix() * dloss_dlogprob;
    grad->log_std.array() -= cfg.entropy_coeff;

    const MatrixX dvalue =
        (2.0 * cfg.value_coeff * inv_n * value_err).transpose();
    params.value.backward(value_trace, dvalue, grad->value);
  }
  return s;
}

UpdateStats ppo_update(PolicyParams& params, const std::vector<Transition>& batch,
                       Real bootstrap_value, const PpoConfig& cfg, Rng& rng) {
  if (static_cast<int>(batch.size()) != cfg.batch_size)
    throw std::invalid_argument("ppo_update: expected " +
                                std::to_string(cfg.batch_size) + " transitions, got " +
                                std::to_string(batch.size()));
  const GaeResult gae = compute_gae(batch, cfg.gamma, cfg.gae_lambda, bootstrap_value);
  const VectorX advantages = normalize_advantages(gae.advantages);

  const auto n = static_cast<Eigen::Index>(batch.size());
  const Eigen::Index in = batch.front().aug_obs.size();
  const Eigen::Index act = batch.front().raw_action.size();
  MatrixX obs(in, n), raw(act, n);
  VectorX logprob_old(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const Transition& tr = batch[static_cast<std::size_t>(k)];
    obs.col(k) = tr.aug_obs;
    raw.col(k) = tr.raw_action;
    logprob_old(k) = tr.logprob;
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});

  UpdateStats stats;
  PolicyParams grad;
  const Eigen::Index mb = cfg.minibatch_size;
  for (int epoch = 0; epoch < cfg.epochs_per_batch; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (Eigen::Index start = 0; start < n; start += mb) {
      const Eigen::Index size = std::min(mb, n - start);
      PpoBatch mini{MatrixX(in, size), MatrixX(act, size), VectorX(size),
                    VectorX(size), VectorX(size)};
      for (Eigen::Index j = 0; j < size; ++j) {
        const Eigen::Index k = order[static_cast<std::size_t>(start + j)];
        mini.obs.col(j) = obs.col(k);
        mini.raw_actions.col(j) = raw.col(k);
        mini.logprob_old(j) = logprob_old(k);
        mini.advantages(j) = advantages(k);
        mini.returns(j) = gae.returns(k);
      }
      const LossStats loss = ppo_loss(params, mini, cfg, &grad);
      if (!std::isfinite(loss.total) || !grad.all_finite())
        throw TrainingAborted("non-finite PPO loss at epoch " + std::to_string(epoch) +
                              " (policy " + std::to_string(loss.policy_loss) +
                              ", value " + std::to_string(loss.value_loss) + ")");
      // Mean trunk, log-std and value trunk are bounded separately: a large
      // value error cannot shrink the policy step, and the ~1/sigma growth of
      // the mean gradient cannot stall the log-std.
      const auto clipped_step = [&](Real squared_norm) {
        const Real norm = std::sqrt(squared_norm);
        return cfg.max_grad_norm > 0 && norm > cfg.max_grad_norm
                   ? cfg.learning_rate * cfg.max_grad_norm / norm
                   : cfg.learning_rate;
      };
      params.policy.axpy(-clipped_step(mlp_squared_norm(grad.policy)), grad.policy);
      params.log_std -= clipped_step(grad.log_std.squaredNorm()) * grad.log_std;
      params.value.axpy(-clipped_step(grad.value_squared_norm()), grad.value);
      params.clamp_log_std();
      stats.last = loss;
      stats.mean_policy_loss += loss.policy_loss;
      stats.mean_value_loss += loss.value_loss;
      ++stats.sgd_steps;
    }
  }
  stats.mean_policy_loss /= Real(stats.sgd_steps);
  stats.mean_value_loss /= Real(stats.sgd_steps);
  return stats;
}

}  // namespace drbench
