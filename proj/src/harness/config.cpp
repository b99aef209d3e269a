#include "lcrl/harness/config.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace lcrl::harness {

using nlohmann::json;

env::PegParams TrainConfig::peg_params() const {
  env::PegParams p = env::peg_preset(preset);
  json merged = p;
  merged.merge_patch(env_overrides);
  env::from_json(merged, p);
  return p;
}

std::unique_ptr<env::Environment> TrainConfig::make_env() const {
  if (env::is_peg_preset(preset)) return std::make_unique<env::PegEnv>(peg_params());
  if (!env_overrides.empty()) throw ConfigError("env: overrides are only supported for peg presets");
  return env::make_environment(preset);
}

namespace {

void check_keys(const json& j, const std::string& path, const std::set<std::string>& known) {
  if (!j.is_object()) throw ConfigError(path + ": expected an object");
  for (const auto& [key, _] : j.items()) {
    if (!known.count(key)) throw ConfigError(path + "." + key + ": unknown field");
  }
}

template <typename T>
void read(const json& j, const std::string& path, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(path + "." + key + ": " + e.what());
  }
}

json vec6(const env::Vec6& v) { return std::vector<double>(v.data(), v.data() + 6); }

}  // namespace

json to_json(const TrainConfig& c) {
  json graph{{"source", attribution::to_string(c.graph.source)},
             {"file", c.graph.file},
             {"threshold", c.graph.threshold},
             {"sampling_times", c.graph.sampling_times},
             {"horizon", c.graph.horizon},
             {"mode", attribution::to_string(c.graph.mode)},
             {"seed", c.graph.seed}};
  json ddpg{{"gamma", c.ddpg.gamma},
            {"tau", c.ddpg.tau},
            {"actor_lr", c.ddpg.actor_lr},
            {"critic_lr", c.ddpg.critic_lr},
            {"batch_size", c.ddpg.batch_size},
            {"buffer_capacity", c.ddpg.buffer_capacity},
            {"global_hidden", c.ddpg.global_hidden},
            {"local_hidden", c.ddpg.local_hidden},
            {"critic_hidden", c.ddpg.critic_hidden},
            {"exploration_fraction", c.ddpg.exploration_fraction},
            {"exploration_decay", c.ddpg.exploration_decay}};
  json eval{{"episodes", c.eval.episodes}, {"init_error", vec6(c.eval.init_error)}, {"sensor_noise", c.eval.sensor_noise}};
  json compare{{"reward_threshold", c.compare.reward_threshold},
               {"window", c.compare.window},
               {"final_window", c.compare.final_window}};
  json env_json = env::is_peg_preset(c.preset) ? json(c.peg_params()) : c.env_overrides;
  return json{{"schema_version", kConfigSchemaVersion},
              {"preset", c.preset},
              {"env", env_json},
              {"agent", agents::to_string(c.agent)},
              {"graph", graph},
              {"episodes", c.episodes},
              {"steps_per_episode", c.steps_per_episode},
              {"seeds", c.seeds},
              {"ddpg", ddpg},
              {"eval", eval},
              {"compare", compare},
              {"jobs", c.jobs},
              {"threads", c.threads}};
}

TrainConfig config_from_json(const json& j) {
  check_keys(j, "config",
             {"schema_version", "preset", "env", "agent", "graph", "episodes", "steps_per_episode", "seeds", "ddpg",
              "eval", "compare", "jobs", "threads"});
  if (!j.contains("schema_version")) throw ConfigError("config.schema_version: required field missing");
  int version = 0;
  read(j, "config", "schema_version", version);
  if (version != kConfigSchemaVersion) {
    throw ConfigError("config.schema_version: unsupported version " + std::to_string(version));
  }
  TrainConfig c;
  read(j, "config", "preset", c.preset);
  if (!env::is_peg_preset(c.preset) && !env::is_lti_preset(c.preset)) {
    throw ConfigError("config.preset: unknown preset '" + c.preset + "'");
  }
  if (j.contains("env")) {
    if (!j.at("env").is_object()) throw ConfigError("config.env: expected an object");
    c.env_overrides = j.at("env");
  }
  try {
    if (env::is_peg_preset(c.preset)) (void)c.peg_params();
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config.env: ") + e.what());
  }
  if (j.contains("agent")) {
    try {
      c.agent = agents::actor_kind_from_string(j.at("agent").get<std::string>());
    } catch (const std::exception& e) {
      throw ConfigError(std::string("config.agent: ") + e.what());
    }
  }
  if (j.contains("graph")) {
    const json& g = j.at("graph");
    check_keys(g, "config.graph", {"source", "file", "threshold", "sampling_times", "horizon", "mode", "seed"});
    std::string source = attribution::to_string(c.graph.source);
    std::string mode = attribution::to_string(c.graph.mode);
    read(g, "config.graph", "source", source);
    read(g, "config.graph", "mode", mode);
    try {
      c.graph.source = attribution::graph_source_from_string(source);
      c.graph.mode = attribution::cs3_mode_from_string(mode);
    } catch (const std::exception& e) {
      throw ConfigError(std::string("config.graph: ") + e.what());
    }
    read(g, "config.graph", "file", c.graph.file);
    read(g, "config.graph", "threshold", c.graph.threshold);
    read(g, "config.graph", "sampling_times", c.graph.sampling_times);
    read(g, "config.graph", "horizon", c.graph.horizon);
    read(g, "config.graph", "seed", c.graph.seed);
    if (!(c.graph.threshold > 0.0)) throw ConfigError("config.graph.threshold: must be > 0");
    if (c.graph.sampling_times < 1) throw ConfigError("config.graph.sampling_times: must be >= 1");
  }
  read(j, "config", "episodes", c.episodes);
  read(j, "config", "steps_per_episode", c.steps_per_episode);
  read(j, "config", "seeds", c.seeds);
  read(j, "config", "jobs", c.jobs);
  read(j, "config", "threads", c.threads);
  if (c.episodes < 0) throw ConfigError("config.episodes: must be >= 0");
  if (c.steps_per_episode < 0) throw ConfigError("config.steps_per_episode: must be >= 0");
  if (c.seeds.empty()) throw ConfigError("config.seeds: needs at least one seed");
  if (j.contains("ddpg")) {
    const json& d = j.at("ddpg");
    const std::string p = "config.ddpg";
    check_keys(d, p,
               {"gamma", "tau", "actor_lr", "critic_lr", "batch_size", "buffer_capacity", "global_hidden",
                "local_hidden", "critic_hidden", "exploration_fraction", "exploration_decay"});
    read(d, p, "gamma", c.ddpg.gamma);
    read(d, p, "tau", c.ddpg.tau);
    read(d, p, "actor_lr", c.ddpg.actor_lr);
    read(d, p, "critic_lr", c.ddpg.critic_lr);
    read(d, p, "batch_size", c.ddpg.batch_size);
    read(d, p, "buffer_capacity", c.ddpg.buffer_capacity);
    read(d, p, "global_hidden", c.ddpg.global_hidden);
    read(d, p, "local_hidden", c.ddpg.local_hidden);
    read(d, p, "critic_hidden", c.ddpg.critic_hidden);
    read(d, p, "exploration_fraction", c.ddpg.exploration_fraction);
    read(d, p, "exploration_decay", c.ddpg.exploration_decay);
    if (!(c.ddpg.gamma >= 0.0 && c.ddpg.gamma < 1.0)) throw ConfigError(p + ".gamma: must be in [0, 1)");
    if (!(c.ddpg.tau > 0.0 && c.ddpg.tau <= 1.0)) throw ConfigError(p + ".tau: must be in (0, 1]");
    if (c.ddpg.batch_size < 1) throw ConfigError(p + ".batch_size: must be >= 1");
    if (c.ddpg.buffer_capacity < 1) throw ConfigError(p + ".buffer_capacity: must be >= 1");
  }
  if (j.contains("eval")) {
    const json& e = j.at("eval");
    check_keys(e, "config.eval", {"episodes", "init_error", "sensor_noise"});
    read(e, "config.eval", "episodes", c.eval.episodes);
    read(e, "config.eval", "sensor_noise", c.eval.sensor_noise);
    if (e.contains("init_error")) {
      std::vector<double> v;
      read(e, "config.eval", "init_error", v);
      if (v.size() != 6) throw ConfigError("config.eval.init_error: expected 6 values");
      c.eval.init_error = Eigen::Map<const env::Vec6>(v.data());
    }
  }
  if (j.contains("compare")) {
    const json& k = j.at("compare");
    check_keys(k, "config.compare", {"reward_threshold", "window", "final_window"});
    read(k, "config.compare", "reward_threshold", c.compare.reward_threshold);
    read(k, "config.compare", "window", c.compare.window);
    read(k, "config.compare", "final_window", c.compare.final_window);
    if (c.compare.window < 1 || c.compare.final_window < 1) {
      throw ConfigError("config.compare: windows must be >= 1");
    }
  }
  return c;
}

TrainConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return config_from_json(j);
}

std::string config_hash(const TrainConfig& config) {
  json j = to_json(config);
  j.erase("jobs");
  j.erase("threads");
  const std::string text = j.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

TrainConfig profile(const std::string& preset) {
  TrainConfig c;
  c.preset = preset;
  if (env::is_lti_preset(preset)) {
    c.graph.source = attribution::GraphSource::kAnalytic;
    return c;
  }
  if (!env::is_peg_preset(preset)) throw ConfigError("preset: unknown preset '" + preset + "'");
  return c;
}

}  // namespace lcrl::harness
