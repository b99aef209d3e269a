#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lcrl/agents/ddpg.hpp"
#include "lcrl/attribution/cs3.hpp"
#include "lcrl/attribution/graph.hpp"
#include "lcrl/env/presets.hpp"

namespace lcrl::harness {

inline constexpr int kConfigSchemaVersion = 1;

/// Raised for malformed configs; the message starts with the offending field path.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct GraphConfig {
  attribution::GraphSource source = attribution::GraphSource::kEmpirical;
  std::string file;  // used when source == file
  double threshold = 0.1;
  int sampling_times = 200;
  int horizon = 0;  // 0 -> state dimension
  attribution::Cs3Mode mode = attribution::Cs3Mode::kResample;
  std::uint64_t seed = 0;
};

struct EvalConfig {
  int episodes = 1;
  // Fixed initial pose error (mm, deg); z entry is ignored.
  env::Vec6 init_error = (env::Vec6() << 0.2, 0.2, 0.2, 0.5, 0.5, 0.5).finished();
  bool sensor_noise = false;
};

struct CompareConfig {
  double reward_threshold = -3.5;
  int window = 10;
  int final_window = 20;
};

struct TrainConfig {
  std::string preset = "sim-group1";
  nlohmann::json env_overrides = nlohmann::json::object();
  agents::ActorKind agent = agents::ActorKind::kLocal;
  GraphConfig graph;
  int episodes = 200;
  int steps_per_episode = 0;  // 0 -> environment step budget
  std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4};
  agents::DdpgConfig ddpg;
  EvalConfig eval;
  CompareConfig compare;
  // Execution-only settings: they do not change results and stay out of the hash.
  int jobs = 1;
  int threads = 1;

  /// Preset parameters with env_overrides applied (peg presets only).
  env::PegParams peg_params() const;
  std::unique_ptr<env::Environment> make_env() const;
};

/// Fully resolved JSON form, including every default.
nlohmann::json to_json(const TrainConfig& config);
/// Missing fields take defaults; unknown fields and type errors raise ConfigError.
TrainConfig config_from_json(const nlohmann::json& j);
TrainConfig load_config(const std::string& path);

/// FNV-1a 64 over the canonical dump of every result-affecting field.
std::string config_hash(const TrainConfig& config);

/// Named profiles shipped with the binary.
TrainConfig profile(const std::string& preset);

}  // namespace lcrl::harness
