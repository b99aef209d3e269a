#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "lcrl/agents/ddpg.hpp"
#include "lcrl/attribution/graph.hpp"
#include "lcrl/harness/config.hpp"
#include "lcrl/harness/run_log.hpp"

namespace lcrl::harness {

struct GraphPhaseResult {
  attribution::ConnectionGraph graph;
  std::optional<attribution::Cs3Matrix> cs3;  // empirical source only
  std::optional<Matrix> H;                    // analytic source only
  double seconds = 0.0;
};

/// Builds the connection graph from the configured source.
GraphPhaseResult run_graph_phase(const TrainConfig& config);

/// phi.csv, phi_normalized.csv, H.csv, graph.csv, graph.json and timing.json.
void write_graph_artifacts(const std::string& dir, const TrainConfig& config, const GraphPhaseResult& result);

struct TrainResult {
  RunLog log;
  nlohmann::json checkpoint;
  double seconds = 0.0;
};

/// Runs the configured number of episodes for one seed. A divergence stops
/// training early; the log keeps every finished episode and records the error.
TrainResult train(const TrainConfig& config, std::uint64_t seed, const attribution::ConnectionGraph* graph);

/// Noise-free rollout of `policy` from the configured initial error.
Trace evaluate(const agents::Actor& policy, const TrainConfig& config, std::uint64_t seed);

/// Graph phase (when needed) then train + evaluate every seed into
/// out/seed_<s>/. Seeds run on up to `config.jobs` threads.
void run_experiment(const TrainConfig& config, const std::string& out_dir);

/// One seed's artifacts: rewards.csv, run.json, checkpoint.json, trace.csv,
/// eval.json and timing.json.
void write_run_artifacts(const std::string& dir, const TrainConfig& config, const TrainResult& result,
                         const Trace& trace, double eval_seconds);

}  // namespace lcrl::harness
