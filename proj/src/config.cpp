#include "drbench/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace drbench {

namespace {

using json = nlohmann::json;
using Kind = ConfigError::Kind;

/// One JSON object of the config tree; remembers which keys were consumed
/// so leftovers can be reported.
class Section {
 public:
  Section(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object())
      throw ConfigError(Kind::kType, "'" + label() + "' must be an object");
  }

  Section child(const std::string& key) {
    seen_.insert(key);
    const auto it = node_.find(key);
    if (it == node_.end()) return Section(empty(), qualify(key));
    return Section(*it, qualify(key));
  }

  void get(const std::string& key, Real& out) {
    if (const json* v = find(key)) {
      if (!v->is_number()) type_error(key, "a number");
      out = v->get<Real>();
    }
  }

  void get(const std::string& key, int& out) {
    if (const json* v = find(key)) {
      if (!v->is_number_integer()) type_error(key, "an integer");
      out = v->get<int>();
    }
  }

  void get(const std::string& key, long& out) {
    if (const json* v = find(key)) {
      if (!v->is_number_integer()) type_error(key, "an integer");
      out = v->get<long>();
    }
  }

  void get(const std::string& key, std::size_t& out) {
    if (const json* v = find(key)) {
      if (!v->is_number_unsigned()) type_error(key, "a non-negative integer");
      out = v->get<std::size_t>();
    }
  }

  void get(const std::string& key, bool& out) {
    if (const json* v = find(key)) {
      if (!v->is_boolean()) type_error(key, "a boolean");
      out = v->get<bool>();
    }
  }

  void get(const std::string& key, std::string& out) {
    if (const json* v = find(key)) {
      if (!v->is_string()) type_error(key, "a string");
      out = v->get<std::string>();
    }
  }

  void get(const std::string& key, HourVector& out) {
    if (const json* v = find(key)) {
      if (!v->is_array() || v->size() != kHours)
        type_error(key, "an array of " + std::to_string(kHours) + " numbers");
      for (int i = 0; i < kHours; ++i) {
        if (!(*v)[i].is_number())
          type_error(key, "an array of " + std::to_string(kHours) + " numbers");
        out(i) = (*v)[i].get<Real>();
      }
    }
  }

  void get(const std::string& key, std::vector<Real>& out) {
    if (const json* v = find(key)) {
      if (!v->is_array()) type_error(key, "an array of numbers");
      out.clear();
      for (const json& e : *v) {
        if (!e.is_number()) type_error(key, "an array of numbers");
        out.push_back(e.get<Real>());
      }
    }
  }

  void get(const std::string& key, std::vector<std::uint64_t>& out) {
    if (const json* v = find(key)) {
      if (!v->is_array()) type_error(key, "an array of non-negative integers");
      out.clear();
      for (const json& e : *v) {
        if (!e.is_number_unsigned()) type_error(key, "an array of non-negative integers");
        out.push_back(e.get<std::uint64_t>());
      }
    }
  }

  void finish() const {
    for (const auto& [key, _] : node_.items())
      if (!seen_.count(key))
        throw ConfigError(Kind::kUnknownKey, "unknown key '" + qualify(key) + "'");
  }

 private:
  static const json& empty() {
    static const json e = json::object();
    return e;
  }

  std::string label() const { return path_.empty() ? "<root>" : path_; }
  std::string qualify(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  const json* find(const std::string& key) {
    seen_.insert(key);
    const auto it = node_.find(key);
    return it == node_.end() ? nullptr : &*it;
  }

  [[noreturn]] void type_error(const std::string& key, const std::string& want) const {
    throw ConfigError(Kind::kType, "'" + qualify(key) + "' must be " + want);
  }

  const json& node_;
  std::string path_;
  std::set<std::string> seen_;
};

json hours_to_json(const HourVector& v) {
  json a = json::array();
  for (int i = 0; i < kHours; ++i) a.push_back(v(i));
  return a;
}

json to_json(const ExperimentConfig& c) {
  const TrainConfig& t = c.train;
  json j;
  j["env"] = {{"baseline", hours_to_json(t.env.worker.baseline)},
              {"grid", hours_to_json(t.env.grid)},
              {"elasticity", t.env.worker.elasticity},
              {"noise_scale", t.env.worker.noise_scale},
              {"episode_length", t.env.episode_length},
              {"p_max", t.env.p_max}};
  j["smirl"] = {{"alpha", t.smirl.alpha},
                {"sigma_floor", t.smirl.sigma_floor},
                {"sigma_init", t.smirl.sigma_init},
                {"augment", std::string(to_string(t.augment))},
                {"log_smirl", t.log_smirl}};
  j["ppo"] = {{"learning_rate", t.ppo.learning_rate},
              {"batch_size", t.ppo.batch_size},
              {"minibatch_size", t.ppo.minibatch_size},
              {"clip", t.ppo.clip},
              {"epochs_per_batch", t.ppo.epochs_per_batch},
              {"gamma", t.ppo.gamma},
              {"gae_lambda", t.ppo.gae_lambda},
              {"value_coeff", t.ppo.value_coeff},
              {"entropy_coeff", t.ppo.entropy_coeff},
              {"max_grad_norm", t.ppo.max_grad_norm},
              {"hidden_width", t.hidden_width},
              {"hidden_layers", t.hidden_layers},
              {"log_std_init", t.log_std_init}};
  j["sampler"] = {{"constrain_l1", std::string(to_string(t.constrain_l1))},
                  {"norm_target", t.fixed_load.norm_target},
                  {"load_magnitude", t.fixed_load.load_magnitude}};
  j["metrics"] = {{"window", t.entropy_window},
                  {"bin", c.bin},
                  {"threshold_tolerance", c.threshold_tolerance},
                  {"trailing_window", c.trailing_window}};
  j["run"] = {{"max_steps", t.ppo.max_steps},
              {"seeds", c.seeds},
              {"alphas", c.alphas},
              {"output_dir", c.output_dir},
              {"threads", c.threads}};
  return j;
}

ExperimentConfig from_json(const json& root) {
  ExperimentConfig c;
  TrainConfig& t = c.train;
  Section top(root, "");

  Section env = top.child("env");
  env.get("baseline", t.env.worker.baseline);
  env.get("grid", t.env.grid);
  env.get("elasticity", t.env.worker.elasticity);
  env.get("noise_scale", t.env.worker.noise_scale);
  env.get("episode_length", t.env.episode_length);
  env.get("p_max", t.env.p_max);
  env.finish();

  Section smirl = top.child("smirl");
  smirl.get("alpha", t.smirl.alpha);
  smirl.get("sigma_floor", t.smirl.sigma_floor);
  smirl.get("sigma_init", t.smirl.sigma_init);
  std::string augment(to_string(t.augment));
  smirl.get("augment", augment);
  smirl.get("log_smirl", t.log_smirl);
  smirl.finish();

  Section ppo = top.child("ppo");
  ppo.get("learning_rate", t.ppo.learning_rate);
  ppo.get("batch_size", t.ppo.batch_size);
  ppo.get("minibatch_size", t.ppo.minibatch_size);
  ppo.get("clip", t.ppo.clip);
  ppo.get("epochs_per_batch", t.ppo.epochs_per_batch);
  ppo.get("gamma", t.ppo.gamma);
  ppo.get("gae_lambda", t.ppo.gae_lambda);
  ppo.get("value_coeff", t.ppo.value_coeff);
  ppo.get("entropy_coeff", t.ppo.entropy_coeff);
  ppo.get("max_grad_norm", t.ppo.max_grad_norm);
  ppo.get("hidden_width", t.hidden_width);
  ppo.get("hidden_layers", t.hidden_layers);
  ppo.get("log_std_init", t.log_std_init);
  ppo.finish();

  Section sampler = top.child("sampler");
  std::string constrain(to_string(t.constrain_l1));
  sampler.get("constrain_l1", constrain);
  sampler.get("norm_target", t.fixed_load.norm_target);
  sampler.get("load_magnitude", t.fixed_load.load_magnitude);
  sampler.finish();

  Section metrics = top.child("metrics");
  metrics.get("window", t.entropy_window);
  metrics.get("bin", c.bin);
  metrics.get("threshold_tolerance", c.threshold_tolerance);
  metrics.get("trailing_window", c.trailing_window);
  metrics.finish();

  Section run = top.child("run");
  run.get("max_steps", t.ppo.max_steps);
  run.get("seeds", c.seeds);
  run.get("alphas", c.alphas);
  run.get("output_dir", c.output_dir);
  run.get("threads", c.threads);
  run.finish();

  top.finish();

  try {
    t.augment = parse_augment_mode(augment);
    t.constrain_l1 = parse_constrain_mode(constrain);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(Kind::kInvariant, e.what());
  }
  validate(c);
  return c;
}

}  // namespace

void validate(const ExperimentConfig& cfg) {
  try {
    validate(cfg.train);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(Kind::kInvariant, e.what());
  }
  auto fail = [](const std::string& msg) { throw ConfigError(Kind::kInvariant, msg); };
  if (cfg.seeds.empty()) fail("seeds: must not be empty");
  if (std::set<std::uint64_t>(cfg.seeds.begin(), cfg.seeds.end()).size() != cfg.seeds.size())
    fail("seeds: must be distinct");
  if (cfg.alphas.empty()) fail("alphas: must not be empty");
  for (Real a : cfg.alphas) {
    if (!std::isfinite(a) || a < 0) fail("alphas: every alpha must be finite and >= 0");
    if (!cfg.train.log_smirl && a != 0) fail("alphas: log_smirl = false requires alpha = 0");
  }
  if (std::set<Real>(cfg.alphas.begin(), cfg.alphas.end()).size() != cfg.alphas.size())
    fail("alphas: must be distinct");
  if (cfg.output_dir.empty()) fail("output_dir: must not be empty");
  if (cfg.bin < 1) fail("bin: must be >= 1");
  if (!std::isfinite(cfg.threshold_tolerance) || cfg.threshold_tolerance < 0)
    fail("threshold_tolerance: must be finite and >= 0");
  if (cfg.trailing_window < 1) fail("trailing_window: must be >= 1");
  if (cfg.threads < 0) fail("threads: must be >= 0");
}

ExperimentConfig parse_config_text(const std::string& text) {
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) {
    ExperimentConfig c;
    validate(c);
    return c;
  }
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(Kind::kSyntax, std::string("malformed config: ") + e.what());
  }
  return from_json(root);
}

ExperimentConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(Kind::kMissingFile, "cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

std::string serialize_config(const ExperimentConfig& cfg) {
  return to_json(cfg).dump(2) + "\n";
}

std::string config_hash(const ExperimentConfig& cfg) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : to_json(cfg).dump()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
  const TrainConfig& x = a.train;
  const TrainConfig& y = b.train;
  return x.env.worker.baseline == y.env.worker.baseline && x.env.grid == y.env.grid &&
         x.env.worker.elasticity == y.env.worker.elasticity &&
         x.env.worker.noise_scale == y.env.worker.noise_scale &&
         x.env.episode_length == y.env.episode_length && x.env.p_max == y.env.p_max &&
         x.smirl.alpha == y.smirl.alpha && x.smirl.sigma_floor == y.smirl.sigma_floor &&
         x.smirl.sigma_init == y.smirl.sigma_init && x.augment == y.augment &&
         x.log_smirl == y.log_smirl &&
         x.ppo.learning_rate == y.ppo.learning_rate && x.ppo.batch_size == y.ppo.batch_size &&
         x.ppo.minibatch_size == y.ppo.minibatch_size && x.ppo.clip == y.ppo.clip &&
         x.ppo.epochs_per_batch == y.ppo.epochs_per_batch && x.ppo.gamma == y.ppo.gamma &&
         x.ppo.gae_lambda == y.ppo.gae_lambda && x.ppo.value_coeff == y.ppo.value_coeff &&
         x.ppo.entropy_coeff == y.ppo.entropy_coeff &&
         x.ppo.max_grad_norm == y.ppo.max_grad_norm && x.ppo.max_steps == y.ppo.max_steps &&
         x.hidden_width == y.hidden_width && x.hidden_layers == y.hidden_layers &&
         x.log_std_init == y.log_std_init && x.constrain_l1 == y.constrain_l1 &&
         x.fixed_load.norm_target == y.fixed_load.norm_target &&
         x.fixed_load.load_magnitude == y.fixed_load.load_magnitude &&
         x.entropy_window == y.entropy_window && a.seeds == b.seeds &&
         a.alphas == b.alphas && a.output_dir == b.output_dir && a.bin == b.bin &&
         a.threshold_tolerance == b.threshold_tolerance &&
         a.trailing_window == b.trailing_window && a.threads == b.threads;
}

}  // namespace drbench
