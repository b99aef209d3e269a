// Command-line entry point: graph, lemma-check, train, eval, compare.

#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lcrl/agents/checkpoint.hpp"
#include "lcrl/attribution/export.hpp"
#include "lcrl/attribution/lti_oracle.hpp"
#include "lcrl/harness/compare.hpp"
#include "lcrl/harness/experiment.hpp"

namespace fs = std::filesystem;
using namespace lcrl;
using nlohmann::json;

namespace {

struct Common {
  std::string config_path;
  std::string preset;
  std::string out = "out";
  std::optional<std::uint64_t> seed;
  int verbose = 0;
};

void add_common(CLI::App* cmd, Common& c, bool with_seed = true) {
  cmd->add_option("--config", c.config_path, "JSON config file")->check(CLI::ExistingFile);
  cmd->add_option("--preset", c.preset, "Environment preset / named profile");
  cmd->add_option("--out", c.out, "Output directory");
  if (with_seed) cmd->add_option("--seed", c.seed, "Seed override");
  cmd->add_flag("-v,--verbose", c.verbose, "More output");
}

harness::TrainConfig resolve(const Common& c) {
  harness::TrainConfig config;
  if (!c.config_path.empty()) {
    config = harness::load_config(c.config_path);
    if (!c.preset.empty()) config.preset = c.preset;
  } else {
    config = harness::profile(c.preset.empty() ? "sim-group1" : c.preset);
  }
  return config;
}

std::string matrix_text(const Matrix& M) {
  std::ostringstream out;
  for (Eigen::Index r = 0; r < M.rows(); ++r) {
    out << "  [";
    for (Eigen::Index k = 0; k < M.cols(); ++k) out << (k ? ", " : "") << format_double(M(r, k));
    out << "]\n";
  }
  return out.str();
}

std::string graph_text(const IntMatrix& G) { return matrix_text(G.cast<double>()); }

struct LemmaOptions {
  std::string preset;
  std::string matrix_file;
  int random = 0;
  std::uint64_t seed = 0;
  int m = 5, n = 4;
  double density = 0.3;
  int sampling_times = 500;
  double threshold = 0.1;
  double required_fraction = 0.9;
};

bool lemma_case(const env::LtiParams& p, const LemmaOptions& o, bool print, std::uint64_t cs3_seed) {
  const Matrix H = attribution::analytic_H(p.E, p.F);
  const auto analytic = attribution::graph_from_H(H);
  env::LtiEnv environment(p);
  attribution::Cs3Options opts;
  opts.sampling_times = o.sampling_times;
  opts.seed = cs3_seed;
  const auto cs3 = attribution::estimate_cs3(environment, opts);
  const auto empirical = attribution::build_graph(cs3, o.threshold);
  const bool match = analytic.same_pattern(empirical);
  if (print) {
    std::cout << "H (state x action):\n" << matrix_text(H);
    std::cout << "analytic G (action x state):\n" << graph_text(analytic.G);
    std::cout << "empirical G (ST=" << o.sampling_times << ", T=" << format_double(o.threshold) << "):\n"
              << graph_text(empirical.G);
  }
  return match;
}

env::LtiParams lti_from_file(const std::string& path) {
  const json j = harness::read_json(path);
  env::LtiParams p;
  try {
    p.E = matrix_from_json(j.at("E"));
    p.F = matrix_from_json(j.at("F"));
  } catch (const std::exception& e) {
    throw std::invalid_argument(path + ": expected {\"E\": [[...]], \"F\": [[...]]}: " + e.what());
  }
  const auto m = p.E.rows();
  if (p.E.cols() != m || p.F.rows() != m || p.F.cols() < 1) throw DimensionError(path + ": E must be m x m, F m x n");
  p.init_range = Vector::Ones(m);
  p.action_lb = -Vector::Ones(p.F.cols());
  p.action_ub = Vector::Ones(p.F.cols());
  return p;
}

int cmd_lemma(const LemmaOptions& o) {
  if (o.random > 0) {
    int matches = 0;
    for (int k = 0; k < o.random; ++k) {
      const auto p = env::random_sparse_lti(o.m, o.n, o.density, env::derive_seed(o.seed, static_cast<std::uint64_t>(k)));
      const bool ok = lemma_case(p, o, false, env::derive_seed(o.seed, 100 + static_cast<std::uint64_t>(k)));
      std::cout << "system " << k << ": " << (ok ? "MATCH" : "MISMATCH") << "\n";
      matches += ok ? 1 : 0;
    }
    const bool pass = matches >= static_cast<int>(std::ceil(o.required_fraction * o.random - 1e-9));
    std::cout << matches << "/" << o.random << " matched; " << (pass ? "MATCH" : "MISMATCH") << "\n";
    return pass ? 0 : 1;
  }
  env::LtiParams p;
  if (!o.matrix_file.empty()) {
    p = lti_from_file(o.matrix_file);
  } else {
    p = env::lti_preset(o.preset.empty() ? "lti-coupled3" : o.preset);
  }
  const bool ok = lemma_case(p, o, true, o.seed);
  std::cout << (ok ? "MATCH" : "MISMATCH") << "\n";
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Locally connected reinforcement learning toolkit"};
  app.require_subcommand(1);

  Common g, t, e;
  auto* graph = app.add_subcommand("graph", "Build the connection graph of an environment");
  add_common(graph, g);
  std::optional<int> graph_st;
  std::optional<double> graph_threshold;
  graph->add_option("--sampling-times", graph_st, "Repeats per action component");
  graph->add_option("--threshold", graph_threshold, "Column-mean threshold T");

  auto* train = app.add_subcommand("train", "Train agents for every configured seed");
  add_common(train, t);
  std::optional<std::string> agent;
  std::optional<int> episodes, jobs;
  train->add_option("--agent", agent, "gcrl | lcrl | constant");
  train->add_option("--episodes", episodes, "Episodes per seed");
  train->add_option("--jobs", jobs, "Seeds trained in parallel");

  auto* eval = app.add_subcommand("eval", "Roll out a checkpoint from the configured initial error");
  add_common(eval, e);
  std::string checkpoint_path;
  eval->add_option("--checkpoint", checkpoint_path, "checkpoint.json")->required()->check(CLI::ExistingFile);

  auto* cmp = app.add_subcommand("compare", "Compare run directories (one arm per directory)");
  std::vector<std::string> dirs;
  std::string cmp_out = "compare";
  std::string cmp_config;
  std::optional<double> cmp_threshold;
  std::optional<int> cmp_window, cmp_final;
  cmp->add_option("dirs", dirs, "Run directories")->required()->check(CLI::ExistingDirectory);
  cmp->add_option("--out", cmp_out, "Output directory");
  cmp->add_option("--config", cmp_config, "Config whose compare settings to use")->check(CLI::ExistingFile);
  cmp->add_option("--threshold", cmp_threshold, "Reward threshold");
  cmp->add_option("--window", cmp_window, "Trailing window for the threshold");
  cmp->add_option("--final-window", cmp_final, "Final-reward window");

  auto* lemma = app.add_subcommand("lemma-check", "Compare analytic and empirical graphs of LTI systems");
  LemmaOptions lo;
  lemma->add_option("--preset", lo.preset, "LTI preset");
  lemma->add_option("--matrix", lo.matrix_file, "JSON file with E and F")->check(CLI::ExistingFile);
  lemma->add_option("--random", lo.random, "Number of random sparse systems (batch mode)");
  lemma->add_option("--seed", lo.seed, "Seed");
  lemma->add_option("--sampling-times", lo.sampling_times, "Repeats per action component");
  lemma->add_option("--threshold", lo.threshold, "Column-mean threshold T");
  lemma->add_option("--state-dim", lo.m, "Random systems: state dimension");
  lemma->add_option("--action-dim", lo.n, "Random systems: action dimension");
  lemma->add_option("--density", lo.density, "Random systems: nonzero density");
  lemma->add_option("--required-fraction", lo.required_fraction, "Batch mode: fraction that must match");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*graph) {
      auto config = resolve(g);
      if (g.seed) config.graph.seed = *g.seed;
      if (graph_st) config.graph.sampling_times = *graph_st;
      if (graph_threshold) config.graph.threshold = *graph_threshold;
      const auto result = harness::run_graph_phase(config);
      harness::write_graph_artifacts(g.out, config, result);
      std::cout << "graph (" << attribution::to_string(result.graph.source) << ", "
                << format_double(result.seconds) << " s):\n"
                << graph_text(result.graph.G);
      if (!result.graph.zero_columns.empty()) {
        std::cout << "unreached state columns:";
        for (int c : result.graph.zero_columns) std::cout << ' ' << c;
        std::cout << "\n";
      }
    } else if (*train) {
      auto config = resolve(t);
      if (t.seed) config.seeds = {*t.seed};
      if (agent) config.agent = agents::actor_kind_from_string(*agent);
      if (episodes) config.episodes = *episodes;
      if (jobs) config.jobs = *jobs;
      harness::run_experiment(config, t.out);
      for (auto s : config.seeds) {
        const auto log = harness::parse_rewards_csv(
            harness::read_text(t.out + "/seed_" + std::to_string(s) + "/rewards.csv"));
        const auto fin = harness::final_mean(log.rewards(), config.compare.final_window);
        std::cout << "seed " << s << ": " << log.episodes.size() << " episodes, final mean "
                  << (fin ? format_double(*fin) : std::string("n/a")) << "\n";
      }
    } else if (*eval) {
      auto config = resolve(e);
      const std::uint64_t seed = e.seed.value_or(config.seeds.front());
      const json ckpt = harness::read_json(checkpoint_path);
      const auto policy = agents::load_policy(ckpt);
      const auto trace = harness::evaluate(*policy, config, seed);
      fs::create_directories(e.out);
      const std::string hash = harness::config_hash(config);
      harness::write_text(e.out + "/trace.csv", harness::trace_csv(trace, hash));
      json summary = harness::trace_summary(trace);
      summary["config_hash"] = hash;
      summary["checkpoint"] = checkpoint_path;
      harness::write_json(e.out + "/eval.json", summary);
      std::cout << summary.dump(2) << "\n";
    } else if (*cmp) {
      harness::CompareConfig settings;
      if (!cmp_config.empty()) settings = harness::load_config(cmp_config).compare;
      if (cmp_threshold) settings.reward_threshold = *cmp_threshold;
      if (cmp_window) settings.window = *cmp_window;
      if (cmp_final) settings.final_window = *cmp_final;
      std::vector<harness::RunData> runs;
      for (const auto& d : dirs) {
        const std::string arm = fs::path(d).lexically_normal().filename().string();
        auto loaded = harness::load_runs(d, arm.empty() ? fs::path(d).parent_path().filename().string() : arm);
        runs.insert(runs.end(), loaded.begin(), loaded.end());
      }
      const auto summary = harness::compare(runs, settings);
      fs::create_directories(cmp_out);
      const json j = harness::summary_to_json(summary);
      harness::write_json(cmp_out + "/summary.json", j);
      harness::write_text(cmp_out + "/envelope.csv", harness::envelope_csv(summary));
      harness::write_text(cmp_out + "/runs.csv", harness::runs_csv(summary));
      for (const auto& arm : summary.arms) {
        std::cout << arm.arm << " (" << arm.agent << "): median episodes-to-threshold "
                  << format_double(arm.median_episodes_to_threshold) << ", median final mean "
                  << format_double(arm.median_final_mean) << ", reached " << arm.reached << "/"
                  << arm.runs.size() << "\n";
      }
    } else if (*lemma) {
      return cmd_lemma(lo);
    }
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 2;
  }
  return 0;
}
