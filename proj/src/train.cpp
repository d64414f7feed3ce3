#include "drbench/train.hpp"

#include <random>
#include <stdexcept>
#include <string>

namespace drbench {

std::string_view to_string(AugmentMode mode) {
  switch (mode) {
    case AugmentMode::kAuto: return "auto";
    case AugmentMode::kOn: return "on";
    case AugmentMode::kOff: return "off";
  }
  return "auto";
}

AugmentMode parse_augment_mode(std::string_view name) {
  if (name == "auto") return AugmentMode::kAuto;
  if (name == "on") return AugmentMode::kOn;
  if (name == "off") return AugmentMode::kOff;
  throw std::invalid_argument("augment: expected auto, on or off, got '" +
                              std::string(name) + "'");
}

void validate(const TrainConfig& cfg) {
  validate(cfg.env);
  validate(cfg.smirl);
  validate(cfg.ppo);
  validate(cfg.fixed_load);
  if (cfg.constrain_l1 != ConstrainMode::kOff && cfg.fixed_load.norm_target >= cfg.env.p_max)
    throw std::invalid_argument("norm_target: must be below p_max when constrain_l1 is on");
  if (!cfg.log_smirl && cfg.smirl.alpha != 0)
    throw std::invalid_argument("log_smirl: can only be disabled when alpha = 0");
  if (cfg.hidden_width < 1) throw std::invalid_argument("hidden_width: must be >= 1");
  if (cfg.hidden_layers < 1) throw std::invalid_argument("hidden_layers: must be >= 1");
  if (!(cfg.log_std_init >= kLogStdMin && cfg.log_std_init <= kLogStdMax))
    throw std::invalid_argument("log_std_init: must be in [-5, 2]");
  if (cfg.entropy_window < 2) throw std::invalid_argument("window: must be >= 2");
}

bool uses_augmentation(const TrainConfig& cfg) {
  switch (cfg.augment) {
    case AugmentMode::kOn: return true;
    case AugmentMode::kOff: return false;
    case AugmentMode::kAuto: return cfg.smirl.alpha > 0;
  }
  return false;
}

int observation_width(const TrainConfig& cfg) {
  return uses_augmentation(cfg) ? 3 * kHours + 1 : kHours;
}

VectorX policy_input(const TrainConfig& cfg, const SmirlBuffer<Real>& buffer,
                     const DemandProfile& obs) {
  const Real demand_scale = 1.0 / cfg.env.worker.baseline.sum();
  if (!uses_augmentation(cfg)) return demand_scale * obs;
  AugmentedObservation<Real> aug =
      augment_obs(buffer, obs, std::max<long>(cfg.ppo.max_steps, 1));
  aug.obs *= demand_scale;
  aug.mean *= demand_scale;
  aug.sigma /= cfg.smirl.sigma_init;
  return aug.flatten();
}

Rng make_rng(std::uint64_t seed, RngStream stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream)};
  return Rng(seq);
}

TrainResult train(const TrainConfig& cfg, std::uint64_t seed, const RecordSink& sink) {
  validate(cfg);
  const PpoConfig& ppo = cfg.ppo;

  Rng env_seed_rng = make_rng(seed, RngStream::kEnv);
  Environment env(cfg.env, env_seed_rng());
  Rng init_rng = make_rng(seed, RngStream::kInit);
  Rng act_rng = make_rng(seed, RngStream::kPolicy);
  Rng shuffle_rng = make_rng(seed, RngStream::kShuffle);
  Rng sampler_rng = make_rng(seed, RngStream::kSampler);

  const NetworkShape shape{observation_width(cfg), kHours, cfg.hidden_width,
                           cfg.hidden_layers};
  TrainResult result{make_policy_params(shape, cfg.log_std_init, init_rng),
                     SmirlBuffer<Real>(kHours, cfg.smirl)};
  if (ppo.max_steps == 0) return result;

  PolicyParams& params = result.params;
  SmirlBuffer<Real>& buffer = result.buffer;
  EntropyTracker tracker(cfg.entropy_window);
  const Real p_max = cfg.env.p_max;

  DemandProfile obs = env.reset();
  buffer.update(obs);

  std::vector<Transition> batch;
  batch.reserve(static_cast<std::size_t>(ppo.batch_size));

  for (long t = 1; t <= ppo.max_steps; ++t) {
    const VectorX input = policy_input(cfg, buffer, obs);

    ActionSample act;
    if (cfg.constrain_l1 == ConstrainMode::kSample && t <= ppo.batch_size) {
      act.action = sample_fixed_l1(kHours, cfg.fixed_load.norm_target, sampler_rng);
      act.raw = unsquash_action(act.action, p_max);
      act.logprob = policy_logprob(params, input, act.raw);
    } else {
      act = policy_act(params, input, p_max, act_rng);
      if (cfg.constrain_l1 == ConstrainMode::kProject)
        act.action = project_to_l1(act.action, cfg.fixed_load.norm_target);
    }

    Transition tr;
    tr.aug_obs = input;
    tr.raw_action = act.raw;
    tr.action = act.action;
    tr.logprob = act.logprob;
    tr.value = value(params, input);

    const StepResult sr = env.step(act.action);
    // Scored against the marginal of earlier days, then inserted.
    tr.r_smirl = cfg.log_smirl ? smirl_reward(buffer, sr.obs) : 0.0;
    buffer.update(sr.obs);
    tr.r_energy = sr.r_energy;
    tr.r_combined = cfg.smirl.alpha == 0
                        ? sr.r_energy
                        : combined_reward(sr.r_energy, tr.r_smirl, cfg.smirl);
    tr.done = sr.done;
    tracker.push(sr.obs);

    StepRecord rec;
    rec.step = t;
    rec.seed = seed;
    rec.alpha = cfg.smirl.alpha;
    rec.r_energy = tr.r_energy;
    rec.r_smirl = tr.r_smirl;
    rec.r_combined = tr.r_combined;
    rec.sample_entropy = sample_entropy(tracker);
    rec.prices = act.action;
    rec.demand = sr.obs;
    sink(rec);

    batch.push_back(std::move(tr));
    obs = sr.done ? env.reset() : sr.obs;
    result.steps = t;

    if (static_cast<int>(batch.size()) == ppo.batch_size) {
      const Real bootstrap =
          batch.back().done ? 0.0 : value(params, policy_input(cfg, buffer, obs));
      ppo_update(params, batch, bootstrap, ppo, shuffle_rng);
      batch.clear();
      ++result.updates;
    }
  }
  return result;
}

}  // namespace drbench
