#include "lcrl/harness/experiment.hpp"

#include <atomic>
#include <chrono>
#include <exception>
#include <filesystem>
#include <mutex>
#include <thread>

#include "lcrl/agents/checkpoint.hpp"
#include "lcrl/attribution/export.hpp"
#include "lcrl/attribution/lti_oracle.hpp"

namespace lcrl::harness {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

attribution::MatrixLabels labels_for(const TrainConfig& config, int n, int m) {
  if (env::is_peg_preset(config.preset)) return {attribution::peg_action_labels(), attribution::peg_state_labels()};
  return {attribution::default_labels("a", n), attribution::default_labels("s", m)};
}

}  // namespace

GraphPhaseResult run_graph_phase(const TrainConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  GraphPhaseResult result;
  const auto environment = config.make_env();
  const auto& spec = environment->spec();
  switch (config.graph.source) {
    case attribution::GraphSource::kAnalytic: {
      if (!env::is_lti_preset(config.preset)) {
        throw ConfigError("config.graph.source: analytic graphs need an LTI preset");
      }
      const env::LtiParams p = env::lti_preset(config.preset);
      result.H = attribution::analytic_H(p.E, p.F);
      result.graph = attribution::graph_from_H(*result.H);
      break;
    }
    case attribution::GraphSource::kFile: {
      if (config.graph.file.empty()) throw ConfigError("config.graph.file: required for file source");
      result.graph = attribution::graph_from_json(read_json(config.graph.file));
      result.graph.source = attribution::GraphSource::kFile;
      break;
    }
    case attribution::GraphSource::kEmpirical: {
      attribution::Cs3Options opts;
      opts.sampling_times = config.graph.sampling_times;
      opts.horizon = config.graph.horizon;
      opts.mode = config.graph.mode;
      opts.seed = config.graph.seed;
      opts.threads = config.threads;
      result.cs3 = attribution::estimate_cs3(*environment, opts);
      result.graph = attribution::build_graph(*result.cs3, config.graph.threshold);
      break;
    }
  }
  if (result.graph.action_dim() != spec.action_dim || result.graph.state_dim() != spec.state_dim) {
    throw DimensionError("graph shape does not match the environment");
  }
  result.seconds = seconds_since(start);
  return result;
}

void write_graph_artifacts(const std::string& dir, const TrainConfig& config, const GraphPhaseResult& result) {
  fs::create_directories(dir);
  const std::string hash = config_hash(config);
  const auto labels = labels_for(config, result.graph.action_dim(), result.graph.state_dim());
  if (result.cs3) {
    write_text(dir + "/phi.csv", attribution::matrix_to_csv(result.cs3->phi, labels, hash));
    const auto normalized = attribution::normalize_cs3(result.cs3->phi);
    write_text(dir + "/phi_normalized.csv", attribution::matrix_to_csv(normalized.values, labels, hash));
    json j = attribution::cs3_to_json(*result.cs3);
    j["config_hash"] = hash;
    write_json(dir + "/phi.json", j);
  }
  if (result.H) {
    // H is state x action; exported in the same action-row layout as phi.
    write_text(dir + "/H.csv", attribution::matrix_to_csv(result.H->transpose(), labels, hash));
  }
  write_text(dir + "/graph.csv", attribution::graph_to_csv(result.graph, labels, hash));
  json g = attribution::graph_to_json(result.graph);
  g["config_hash"] = hash;
  write_json(dir + "/graph.json", g);
  Timing timing;
  timing.graph_seconds = result.seconds;
  write_json(dir + "/timing.json", timing_json(timing, hash));
}

TrainResult train(const TrainConfig& config, std::uint64_t seed, const attribution::ConnectionGraph* graph) {
  const auto start = std::chrono::steady_clock::now();
  TrainResult result;
  const std::string hash = config_hash(config);
  result.log.config_hash = hash;
  result.log.preset = config.preset;
  result.log.agent = agents::to_string(config.agent);
  result.log.seed = seed;

  auto environment = config.make_env();
  const auto& spec = environment->spec();
  const int step_cap = config.steps_per_episode > 0 ? config.steps_per_episode : spec.max_steps;

  if (config.agent == agents::ActorKind::kConstant) {
    agents::ConstantActor actor(spec.state_dim, spec.action_lb, spec.action_ub);
    for (int ep = 0; ep < config.episodes; ++ep) {
      Vector s = environment->reset(env::derive_seed(seed, 1000 + static_cast<std::uint64_t>(ep)));
      EpisodeRecord rec{ep, 0.0, 0, false};
      for (int t = 0; t < step_cap; ++t) {
        const auto r = environment->step(actor.act(s));
        rec.reward += r.reward;
        rec.steps = t + 1;
        rec.success = r.success;
        s = r.state;
        if (r.done) break;
      }
      result.log.append(rec);
    }
    result.checkpoint = agents::constant_checkpoint_json(actor, hash);
    result.seconds = seconds_since(start);
    return result;
  }

  if (config.agent == agents::ActorKind::kLocal && graph == nullptr) {
    throw std::invalid_argument("lcrl training needs a connection graph");
  }
  std::mt19937_64 init_rng(env::derive_seed(seed, 7));
  auto actor = agents::make_actor(config.agent, spec.state_dim, spec.action_lb, spec.action_ub, config.ddpg, graph,
                                  init_rng);
  agents::DdpgAgent agent(std::move(actor), config.ddpg, env::derive_seed(seed, 8));
  agents::ReplayBuffer buffer(config.ddpg.buffer_capacity, spec.state_dim, spec.action_dim, env::derive_seed(seed, 9));
  const auto batch = static_cast<std::size_t>(config.ddpg.batch_size);

  try {
    for (int ep = 0; ep < config.episodes; ++ep) {
      Vector s = environment->reset(env::derive_seed(seed, 1000 + static_cast<std::uint64_t>(ep)));
      EpisodeRecord rec{ep, 0.0, 0, false};
      for (int t = 0; t < step_cap; ++t) {
        const Vector a = agent.select_action(s, true);
        const auto r = environment->step(a);
        // Step-budget truncation is not terminal: keep bootstrapping through it.
        const bool terminal = r.done && !r.truncated;
        buffer.add({s, a, r.reward, r.state, terminal});
        if (buffer.size() >= batch) agent.update(buffer.sample(batch));
        rec.reward += r.reward;
        rec.steps = t + 1;
        rec.success = r.success;
        s = r.state;
        if (r.done) break;
      }
      if (!std::isfinite(rec.reward)) throw DivergenceError("non-finite episode reward");
      result.log.append(rec);
      agent.end_episode();
    }
  } catch (const DivergenceError& e) {
    result.log.diverged = true;
    result.log.error = e.what();
  }
  result.checkpoint = agents::checkpoint_to_json(agent, hash);
  result.seconds = seconds_since(start);
  return result;
}

Trace evaluate(const agents::Actor& policy, const TrainConfig& config, std::uint64_t seed) {
  Trace trace;
  auto environment = config.make_env();
  const auto& spec = environment->spec();
  if (policy.state_dim() != spec.state_dim || policy.action_dim() != spec.action_dim) {
    throw DimensionError("policy dimensions do not match the environment");
  }
  const int step_cap = config.steps_per_episode > 0 ? config.steps_per_episode : spec.max_steps;
  const std::uint64_t reset_seed = env::derive_seed(seed, 5000);

  if (env::is_peg_preset(config.preset)) {
    env::PegParams params = config.peg_params();
    if (!config.eval.sensor_noise) params.sensor_noise = 0.0;
    env::PegEnv peg(params);
    trace.state_labels = {"x", "y", "z", "alpha", "beta", "gamma"};
    trace.has_wrench = true;
    Vector s = peg.reset_to_pose(reset_seed, config.eval.init_error);
    trace.steps.push_back({0, peg.pose(), peg.true_wrench(), Vector::Zero(6), Vector::Zero(6), 0.0});
    for (int t = 0; t < step_cap; ++t) {
      const Vector a = policy.act(s);
      const auto r = peg.step(a);
      trace.steps.push_back({t + 1, peg.pose(), peg.true_wrench(), peg.last_gains(), a, r.reward});
      trace.total_reward += r.reward;
      trace.success = r.success;
      s = r.state;
      if (r.done) break;
    }
    return trace;
  }

  trace.state_labels = attribution::default_labels("s", spec.state_dim);
  Vector s = environment->reset(reset_seed);
  trace.steps.push_back({0, s, Vector(), Vector(), Vector::Zero(spec.action_dim), 0.0});
  for (int t = 0; t < step_cap; ++t) {
    const Vector a = policy.act(s);
    const auto r = environment->step(a);
    trace.steps.push_back({t + 1, r.state, Vector(), Vector(), a, r.reward});
    trace.total_reward += r.reward;
    trace.success = r.success;
    s = r.state;
    if (r.done) break;
  }
  return trace;
}

void write_run_artifacts(const std::string& dir, const TrainConfig& config, const TrainResult& result,
                         const Trace& trace, double eval_seconds) {
  fs::create_directories(dir);
  const std::string& hash = result.log.config_hash;
  write_text(dir + "/rewards.csv", rewards_csv(result.log));
  json meta = run_metadata(result.log);
  // Execution-only settings stay out so the file is identical across job counts.
  json resolved = to_json(config);
  resolved.erase("jobs");
  resolved.erase("threads");
  meta["config"] = resolved;
  meta["eval"] = trace_summary(trace);
  write_json(dir + "/run.json", meta);
  write_json(dir + "/checkpoint.json", result.checkpoint);
  write_text(dir + "/trace.csv", trace_csv(trace, hash));
  Timing timing;
  timing.train_seconds = result.seconds;
  timing.eval_seconds = eval_seconds;
  write_json(dir + "/timing.json", timing_json(timing, hash));
}

void run_experiment(const TrainConfig& config, const std::string& out_dir) {
  fs::create_directories(out_dir);
  const std::string hash = config_hash(config);
  write_json(out_dir + "/config.json", to_json(config));

  std::optional<attribution::ConnectionGraph> graph;
  if (config.agent == agents::ActorKind::kLocal) {
    const GraphPhaseResult phase = run_graph_phase(config);
    write_graph_artifacts(out_dir + "/graph", config, phase);
    graph = phase.graph;
  }

  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;
  auto worker = [&] {
    for (;;) {
      const std::size_t k = next.fetch_add(1);
      if (k >= config.seeds.size()) return;
      try {
        const std::uint64_t seed = config.seeds[k];
        const TrainResult result = train(config, seed, graph ? &*graph : nullptr);
        const auto start = std::chrono::steady_clock::now();
        const auto policy = agents::load_policy(result.checkpoint);
        const Trace trace = evaluate(*policy, config, seed);
        write_run_artifacts(out_dir + "/seed_" + std::to_string(seed), config, result, trace,
                            seconds_since(start));
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };
  const int jobs = std::max(1, std::min<int>(config.jobs, static_cast<int>(config.seeds.size())));
  std::vector<std::thread> pool;
  for (int w = 1; w < jobs; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace lcrl::harness
