#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lcrl/numerics/dense.hpp"

namespace lcrl::harness {

struct EpisodeRecord {
  int episode = 0;
  double reward = 0.0;
  int steps = 0;
  bool success = false;
};

/// Per-episode training record of one (config, seed) run. Wall-clock timings
/// are kept apart (see Timing) so the log itself is reproducible byte for byte.
struct RunLog {
  std::string config_hash;
  std::string preset;
  std::string agent;
  std::uint64_t seed = 0;
  std::vector<EpisodeRecord> episodes;
  bool diverged = false;
  std::string error;  // set when training aborted

  std::vector<double> rewards() const;
  void append(const EpisodeRecord& record);
};

std::string rewards_csv(const RunLog& log);
/// Parses rewards_csv output; metadata fields other than the hash stay empty.
RunLog parse_rewards_csv(const std::string& text);
nlohmann::json run_metadata(const RunLog& log);

struct TraceStep {
  int step = 0;
  Vector state;  // raw pose for peg, raw state otherwise
  Vector wrench;  // true contact wrench (peg only)
  Vector gains;   // peg only
  Vector action;
  double reward = 0.0;
};

struct Trace {
  std::vector<std::string> state_labels;
  bool has_wrench = false;
  std::vector<TraceStep> steps;
  bool success = false;
  double total_reward = 0.0;

  // Force/moment 2-norms (zero without a wrench). Peaks cover the steps after
  // the first action; terminal is the last recorded step.
  double peak_force() const;
  double terminal_force() const;
  double peak_moment() const;
  double terminal_moment() const;
};

std::string trace_csv(const Trace& trace, const std::string& config_hash);
nlohmann::json trace_summary(const Trace& trace);

struct Timing {
  double graph_seconds = 0.0;
  double train_seconds = 0.0;
  double eval_seconds = 0.0;
};
nlohmann::json timing_json(const Timing& timing, const std::string& config_hash);

void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);
/// Pretty-printed JSON with a trailing newline.
void write_json(const std::string& path, const nlohmann::json& j);
nlohmann::json read_json(const std::string& path);

}  // namespace lcrl::harness
