#include <filesystem>
#include <fstream>
#include <string>

#include <gtest/gtest.h>

#include "drbench/config.hpp"

namespace drbench {
namespace {

namespace fs = std::filesystem;

ConfigError::Kind kind_of(const std::string& text) {
  try {
    parse_config_text(text);
  } catch (const ConfigError& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error for: " << text;
  return ConfigError::Kind::kSyntax;
}

std::string message_of(const std::string& text) {
  try {
    parse_config_text(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

TEST(Config, EmptyFileGivesDefaults) {
  const fs::path path = fs::temp_directory_path() / "drbench_empty_config.json";
  std::ofstream(path) << "";
  const ExperimentConfig c = parse_config(path.string());
  EXPECT_EQ(c.train.smirl.alpha, 0.12);
  EXPECT_EQ(c.train.ppo.learning_rate, 0.003);
  EXPECT_EQ(c.train.ppo.batch_size, 256);
  EXPECT_EQ(c.train.ppo.minibatch_size, 32);
  EXPECT_EQ(c.train.ppo.clip, 0.3);
  EXPECT_EQ(c.seeds.size(), 5u);
  EXPECT_EQ(c.alphas, (std::vector<Real>{0.0, 0.01, 0.12, 0.25}));
  EXPECT_TRUE(c == parse_config_text("{}"));
  fs::remove(path);
}

TEST(Config, OverridesApply) {
  const ExperimentConfig c = parse_config_text(R"({
    "env": {"elasticity": 2.0, "grid": [1,1,1,1,2,2,2,2,1,1]},
    "smirl": {"alpha": 0.25, "augment": "off"},
    "ppo": {"gamma": 0.99, "hidden_width": 16},
    "sampler": {"constrain_l1": "project", "norm_target": 5},
    "run": {"max_steps": 1000, "seeds": [7, 8], "alphas": [0, 0.5], "output_dir": "x"}
  })");
  EXPECT_EQ(c.train.env.worker.elasticity, 2.0);
  EXPECT_EQ(c.train.env.grid(5), 2.0);
  EXPECT_EQ(c.train.smirl.alpha, 0.25);
  EXPECT_EQ(c.train.augment, AugmentMode::kOff);
  EXPECT_EQ(c.train.ppo.gamma, 0.99);
  EXPECT_EQ(c.train.hidden_width, 16);
  EXPECT_EQ(c.train.constrain_l1, ConstrainMode::kProject);
  EXPECT_EQ(c.train.ppo.max_steps, 1000);
  EXPECT_EQ(c.seeds, (std::vector<std::uint64_t>{7, 8}));
  EXPECT_EQ(c.output_dir, "x");
}

TEST(Config, NegativeAlphaNamesAlpha) {
  const std::string text = R"({"smirl": {"alpha": -1}})";
  EXPECT_EQ(kind_of(text), ConfigError::Kind::kInvariant);
  EXPECT_NE(message_of(text).find("alpha"), std::string::npos);
}

TEST(Config, UnknownKeyIsAnError) {
  EXPECT_EQ(kind_of(R"({"ppo": {"learning_rat": 0.1}})"), ConfigError::Kind::kUnknownKey);
  EXPECT_NE(message_of(R"({"ppo": {"learning_rat": 0.1}})").find("ppo.learning_rat"),
            std::string::npos);
  EXPECT_EQ(kind_of(R"({"extra": {}})"), ConfigError::Kind::kUnknownKey);
}

TEST(Config, DistinctDiagnostics) {
  EXPECT_EQ(kind_of("{\"ppo\": {"), ConfigError::Kind::kSyntax);
  EXPECT_EQ(kind_of(R"({"ppo": {"batch_size": "big"}})"), ConfigError::Kind::kType);
  EXPECT_NE(message_of(R"({"ppo": {"batch_size": "big"}})").find("batch_size"),
            std::string::npos);
  EXPECT_EQ(kind_of(R"({"run": {"seeds": [1, 1]}})"), ConfigError::Kind::kInvariant);
  EXPECT_EQ(kind_of(R"({"run": {"seeds": []}})"), ConfigError::Kind::kInvariant);
  EXPECT_EQ(kind_of(R"({"sampler": {"constrain_l1": "project", "norm_target": 50}})"),
            ConfigError::Kind::kInvariant);
  EXPECT_EQ(kind_of(R"({"smirl": {"log_smirl": false}})"), ConfigError::Kind::kInvariant);
  EXPECT_EQ(kind_of(R"({"env": {"baseline": [1, 2]}})"), ConfigError::Kind::kType);
  try {
    parse_config("/nonexistent/drbench.json");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.kind(), ConfigError::Kind::kMissingFile);
  }
}

TEST(Config, SerializeRoundTrip) {
  const ExperimentConfig a = parse_config_text(R"({
    "env": {"noise_scale": 0.1, "baseline": [1.5,2,3,4,5,6,7,8,9,10.25]},
    "smirl": {"alpha": 0.01, "sigma_floor": 0.001},
    "ppo": {"learning_rate": 0.0007, "max_grad_norm": 0},
    "metrics": {"window": 50, "bin": 20},
    "run": {"seeds": [3, 1, 2], "alphas": [0.3, 0.1], "threads": 2}
  })");
  const ExperimentConfig b = parse_config_text(serialize_config(a));
  EXPECT_TRUE(a == b);
  EXPECT_EQ(serialize_config(a), serialize_config(b));
  EXPECT_EQ(config_hash(a), config_hash(b));
  EXPECT_NE(config_hash(a), config_hash(parse_config_text("")));
  const ExperimentConfig d = parse_config_text(serialize_config(parse_config_text("")));
  EXPECT_TRUE(d == parse_config_text(""));
}

}  // namespace
}  // namespace drbench
