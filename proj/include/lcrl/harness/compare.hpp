#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lcrl/harness/config.hpp"
#include "lcrl/harness/run_log.hpp"

namespace lcrl::harness {

/// 1-based episode count at which the trailing-`window` mean first reaches
/// `threshold`; nullopt if it never does.
std::optional<int> episodes_to_threshold(const std::vector<double>& rewards, double threshold, int window);
/// Mean of the last `window` rewards (fewer if the log is shorter); nullopt when empty.
std::optional<double> final_mean(const std::vector<double>& rewards, int window);

struct RunData {
  std::string arm;
  std::string path;
  RunLog log;
  std::optional<nlohmann::json> eval;  // trace summary if present
};

struct RunSummary {
  std::string path;
  std::uint64_t seed = 0;
  std::optional<int> episodes_to_threshold;
  std::optional<double> final_mean;
  std::optional<double> peak_force, terminal_force, peak_moment, terminal_moment;
};

struct Envelope {
  std::vector<double> min, mean, max;
};

struct ArmSummary {
  std::string arm;
  std::string agent;
  std::vector<RunSummary> runs;
  // Runs that never reach the threshold count as (episodes + 1) in the median.
  double median_episodes_to_threshold = 0.0;
  int reached = 0;
  double median_final_mean = 0.0;
  double mean_final_mean = 0.0;
  std::optional<double> median_peak_force, median_terminal_force, median_peak_moment, median_terminal_moment;
  Envelope envelope;
};

struct ComparisonSummary {
  std::string preset;
  CompareConfig settings;
  std::vector<ArmSummary> arms;
  // Present with two or more arms: first arm relative to the second.
  std::optional<nlohmann::json> ratios;
};

double median(std::vector<double> values);

/// Loads a single-seed run directory or every seed_* directory below `path`.
std::vector<RunData> load_runs(const std::string& path, const std::string& arm);

/// Throws std::invalid_argument when the runs mix environment presets.
ComparisonSummary compare(const std::vector<RunData>& runs, const CompareConfig& settings);

nlohmann::json summary_to_json(const ComparisonSummary& summary);
/// episode followed by min/mean/max columns per arm.
std::string envelope_csv(const ComparisonSummary& summary);
/// One row per run.
std::string runs_csv(const ComparisonSummary& summary);

}  // namespace lcrl::harness
