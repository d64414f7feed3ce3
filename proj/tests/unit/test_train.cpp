#include <numeric>
#include <optional>
#include <vector>

#include <gtest/gtest.h>

#include "drbench/train.hpp"

namespace drbench {
namespace {

std::vector<StepRecord> run(const TrainConfig& cfg, std::uint64_t seed,
                            std::optional<TrainResult>* out = nullptr) {
  std::vector<StepRecord> log;
  TrainResult r = train(cfg, seed, [&](const StepRecord& s) { log.push_back(s); });
  if (out) out->emplace(std::move(r));
  return log;
}

void expect_identical(const std::vector<StepRecord>& a, const std::vector<StepRecord>& b) {
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    ASSERT_EQ(a[k].r_energy, b[k].r_energy) << "day " << k + 1;
    ASSERT_EQ(a[k].prices, b[k].prices) << "day " << k + 1;
    ASSERT_EQ(a[k].demand, b[k].demand) << "day " << k + 1;
    ASSERT_EQ(a[k].sample_entropy, b[k].sample_entropy) << "day " << k + 1;
  }
}

TEST(Train, ZeroStepsReturnsInitialParams) {
  TrainConfig cfg;
  cfg.ppo.max_steps = 0;
  std::optional<TrainResult> out;
  EXPECT_TRUE(run(cfg, 1, &out).empty());
  const TrainResult& r = *out;
  EXPECT_EQ(r.steps, 0);
  EXPECT_EQ(r.updates, 0);
  Rng init = make_rng(1, RngStream::kInit);
  const PolicyParams fresh = make_policy_params(
      NetworkShape{observation_width(cfg), kHours, cfg.hidden_width, cfg.hidden_layers},
      cfg.log_std_init, init);
  for (std::size_t l = 0; l < fresh.policy.num_layers(); ++l)
    EXPECT_EQ(r.params.policy.weights[l], fresh.policy.weights[l]);
}

TEST(Train, SameSeedIsBitIdentical) {
  TrainConfig cfg;
  cfg.ppo.max_steps = 600;
  cfg.env.worker.noise_scale = 0.1;
  expect_identical(run(cfg, 4), run(cfg, 4));
  const auto other = run(cfg, 5);
  EXPECT_NE(run(cfg, 4).front().prices, other.front().prices);
}

TEST(Train, ZeroAlphaIgnoresSurpriseTracking) {
  TrainConfig on;
  on.smirl.alpha = 0;
  on.ppo.max_steps = 800;
  TrainConfig off = on;
  off.log_smirl = false;
  const auto a = run(on, 2), b = run(off, 2);
  expect_identical(a, b);
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_EQ(a[k].r_combined, a[k].r_energy);
    EXPECT_EQ(b[k].r_smirl, 0.0);
  }
  EXPECT_NE(a.back().r_smirl, 0.0);
}

TEST(Train, RecordsAreConsistent) {
  TrainConfig cfg;
  cfg.ppo.max_steps = 300;
  std::optional<TrainResult> out;
  const auto log = run(cfg, 3, &out);
  const TrainResult& r = *out;
  ASSERT_EQ(log.size(), 300u);
  EXPECT_EQ(r.steps, 300);
  EXPECT_EQ(r.updates, 1);
  EXPECT_EQ(r.buffer.count(), 301);
  for (std::size_t k = 0; k < log.size(); ++k) {
    const StepRecord& s = log[k];
    EXPECT_EQ(s.step, static_cast<long>(k + 1));
    EXPECT_DOUBLE_EQ(s.r_combined, s.r_energy + cfg.smirl.alpha * s.r_smirl);
    EXPECT_NEAR(s.demand.sum(), cfg.env.worker.baseline.sum(), 1e-9);
    EXPECT_TRUE((s.prices.array() > 0).all() && (s.prices.array() < cfg.env.p_max).all());
    EXPECT_EQ(s.sample_entropy.has_value(), k >= 1);
  }
}

TEST(Train, SamplerModeKeepsPriceNormDuringWarmup) {
  TrainConfig cfg;
  cfg.constrain_l1 = ConstrainMode::kSample;
  cfg.fixed_load.norm_target = 8.0;
  cfg.ppo.max_steps = 400;
  const auto log = run(cfg, 1);
  for (int k = 0; k < cfg.ppo.batch_size; ++k)
    EXPECT_NEAR(log[k].prices.sum(), cfg.fixed_load.norm_target, 1e-9);

  cfg.constrain_l1 = ConstrainMode::kProject;
  for (const StepRecord& s : run(cfg, 1)) EXPECT_NEAR(s.prices.sum(), cfg.fixed_load.norm_target, 1e-9);
}

TEST(Train, SmokeRunImproves) {
  TrainConfig cfg;
  cfg.ppo.max_steps = 2000;
  for (std::uint64_t seed : {1, 2, 3}) {
    const auto log = run(cfg, seed);
    double first = 0, last = 0;
    for (int k = 0; k < 256; ++k) {
      first += log[k].r_energy;
      last += log[log.size() - 1 - k].r_energy;
    }
    EXPECT_GT(last, first) << "seed " << seed;
  }
}

TEST(TrainConfig, Validation) {
  TrainConfig cfg;
  cfg.log_smirl = false;
  EXPECT_THROW(validate(cfg), std::invalid_argument);
  cfg = TrainConfig{};
  cfg.constrain_l1 = ConstrainMode::kSample;
  cfg.fixed_load.norm_target = cfg.env.p_max;
  EXPECT_THROW(validate(cfg), std::invalid_argument);
  cfg = TrainConfig{};
  cfg.entropy_window = 1;
  EXPECT_THROW(validate(cfg), std::invalid_argument);
  EXPECT_EQ(observation_width(TrainConfig{}), 31);
  cfg = TrainConfig{};
  cfg.smirl.alpha = 0;
  EXPECT_EQ(observation_width(cfg), 10);
  cfg.augment = AugmentMode::kOn;
  EXPECT_EQ(observation_width(cfg), 31);
}

}  // namespace
}  // namespace drbench
