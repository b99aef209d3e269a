#include "lcrl/harness/compare.hpp"

#include <algorithm>
#include <filesystem>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace lcrl::harness {

namespace fs = std::filesystem;
using nlohmann::json;

std::optional<int> episodes_to_threshold(const std::vector<double>& rewards, double threshold, int window) {
  if (window < 1) throw std::invalid_argument("window must be >= 1");
  const auto w = static_cast<std::size_t>(window);
  for (std::size_t k = w - 1; k < rewards.size(); ++k) {
    // Summed afresh for every window so no running-sum drift can move a crossing.
    double sum = 0.0;
    for (std::size_t q = k + 1 - w; q <= k; ++q) sum += rewards[q];
    if (sum / static_cast<double>(w) >= threshold) return static_cast<int>(k + 1);
  }
  return std::nullopt;
}

std::optional<double> final_mean(const std::vector<double>& rewards, int window) {
  if (window < 1) throw std::invalid_argument("window must be >= 1");
  if (rewards.empty()) return std::nullopt;
  const std::size_t n = std::min(rewards.size(), static_cast<std::size_t>(window));
  double sum = 0.0;
  for (std::size_t k = rewards.size() - n; k < rewards.size(); ++k) sum += rewards[k];
  return sum / static_cast<double>(n);
}

double median(std::vector<double> values) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

namespace {

RunData load_one(const fs::path& dir, const std::string& arm) {
  RunData run;
  run.arm = arm;
  run.path = dir.string();
  run.log = parse_rewards_csv(read_text((dir / "rewards.csv").string()));
  const fs::path meta_path = dir / "run.json";
  if (fs::exists(meta_path)) {
    const json meta = read_json(meta_path.string());
    run.log.preset = meta.value("preset", "");
    run.log.agent = meta.value("agent", "");
    run.log.seed = meta.value("seed", std::uint64_t{0});
    run.log.diverged = meta.value("diverged", false);
    if (meta.contains("eval")) run.eval = meta.at("eval");
  }
  return run;
}

std::optional<double> eval_field(const RunData& run, const char* key) {
  if (!run.eval || !run.eval->contains(key)) return std::nullopt;
  return run.eval->at(key).get<double>();
}

std::optional<double> median_of(const std::vector<RunSummary>& runs, std::optional<double> RunSummary::*field) {
  std::vector<double> v;
  for (const auto& r : runs) {
    if (r.*field) v.push_back(*(r.*field));
  }
  if (v.empty()) return std::nullopt;
  return median(v);
}

json opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }
json opt(const std::optional<int>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> ratio(const std::optional<double>& a, const std::optional<double>& b) {
  if (!a || !b || *b == 0.0) return std::nullopt;
  return *a / *b;
}

}  // namespace

std::vector<RunData> load_runs(const std::string& path, const std::string& arm) {
  const fs::path root(path);
  if (!fs::is_directory(root)) throw std::runtime_error(path + ": not a directory");
  if (fs::exists(root / "rewards.csv")) return {load_one(root, arm)};
  std::vector<fs::path> dirs;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (entry.is_directory() && entry.path().filename().string().rfind("seed_", 0) == 0 &&
        fs::exists(entry.path() / "rewards.csv")) {
      dirs.push_back(entry.path());
    }
  }
  if (dirs.empty()) throw std::runtime_error(path + ": no runs found");
  std::sort(dirs.begin(), dirs.end());
  std::vector<RunData> runs;
  for (const auto& d : dirs) runs.push_back(load_one(d, arm));
  return runs;
}

ComparisonSummary compare(const std::vector<RunData>& runs, const CompareConfig& settings) {
  if (runs.empty()) throw std::invalid_argument("compare needs at least one run");
  ComparisonSummary summary;
  summary.settings = settings;
  summary.preset = runs.front().log.preset;
  for (const auto& r : runs) {
    if (r.log.preset != summary.preset) {
      throw std::invalid_argument("runs use different environment presets: '" + summary.preset + "' vs '" +
                                  r.log.preset + "' (" + r.path + ")");
    }
  }
  std::vector<std::string> order;
  std::map<std::string, std::vector<const RunData*>> by_arm;
  for (const auto& r : runs) {
    if (!by_arm.count(r.arm)) order.push_back(r.arm);
    by_arm[r.arm].push_back(&r);
  }
  for (const auto& name : order) {
    ArmSummary arm;
    arm.arm = name;
    arm.agent = by_arm[name].front()->log.agent;
    std::vector<double> ett, finals;
    std::size_t shortest = std::numeric_limits<std::size_t>::max();
    for (const RunData* r : by_arm[name]) {
      const auto rewards = r->log.rewards();
      RunSummary rs;
      rs.path = r->path;
      rs.seed = r->log.seed;
      rs.episodes_to_threshold = episodes_to_threshold(rewards, settings.reward_threshold, settings.window);
      rs.final_mean = final_mean(rewards, settings.final_window);
      rs.peak_force = eval_field(*r, "peak_force");
      rs.terminal_force = eval_field(*r, "terminal_force");
      rs.peak_moment = eval_field(*r, "peak_moment");
      rs.terminal_moment = eval_field(*r, "terminal_moment");
      if (rs.episodes_to_threshold) ++arm.reached;
      ett.push_back(rs.episodes_to_threshold ? *rs.episodes_to_threshold
                                             : static_cast<double>(rewards.size() + 1));
      if (rs.final_mean) finals.push_back(*rs.final_mean);
      shortest = std::min(shortest, rewards.size());
      arm.runs.push_back(rs);
    }
    arm.median_episodes_to_threshold = median(ett);
    arm.median_final_mean = median(finals);
    arm.mean_final_mean = finals.empty() ? std::numeric_limits<double>::quiet_NaN()
                                         : std::accumulate(finals.begin(), finals.end(), 0.0) /
                                               static_cast<double>(finals.size());
    arm.median_peak_force = median_of(arm.runs, &RunSummary::peak_force);
    arm.median_terminal_force = median_of(arm.runs, &RunSummary::terminal_force);
    arm.median_peak_moment = median_of(arm.runs, &RunSummary::peak_moment);
    arm.median_terminal_moment = median_of(arm.runs, &RunSummary::terminal_moment);
    for (std::size_t e = 0; e < shortest; ++e) {
      double lo = std::numeric_limits<double>::infinity(), hi = -lo, sum = 0.0;
      for (const RunData* r : by_arm[name]) {
        const double v = r->log.episodes[e].reward;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
        sum += v;
      }
      arm.envelope.min.push_back(lo);
      arm.envelope.max.push_back(hi);
      arm.envelope.mean.push_back(sum / static_cast<double>(by_arm[name].size()));
    }
    summary.arms.push_back(std::move(arm));
  }
  if (summary.arms.size() >= 2) {
    const ArmSummary& a = summary.arms[0];
    const ArmSummary& b = summary.arms[1];
    summary.ratios = json{
        {"numerator", a.arm},
        {"denominator", b.arm},
        {"median_episodes_to_threshold",
         opt(ratio(a.median_episodes_to_threshold, b.median_episodes_to_threshold))},
        {"median_final_mean", opt(ratio(a.median_final_mean, b.median_final_mean))},
        {"median_peak_force", opt(ratio(a.median_peak_force, b.median_peak_force))},
        {"median_terminal_force", opt(ratio(a.median_terminal_force, b.median_terminal_force))},
        {"median_peak_moment", opt(ratio(a.median_peak_moment, b.median_peak_moment))},
        {"median_terminal_moment", opt(ratio(a.median_terminal_moment, b.median_terminal_moment))}};
  }
  return summary;
}

json summary_to_json(const ComparisonSummary& s) {
  json arms = json::array();
  for (const auto& arm : s.arms) {
    json runs = json::array();
    for (const auto& r : arm.runs) {
      runs.push_back({{"path", r.path},
                      {"seed", r.seed},
                      {"episodes_to_threshold", opt(r.episodes_to_threshold)},
                      {"final_mean", opt(r.final_mean)},
                      {"peak_force", opt(r.peak_force)},
                      {"terminal_force", opt(r.terminal_force)},
                      {"peak_moment", opt(r.peak_moment)},
                      {"terminal_moment", opt(r.terminal_moment)}});
    }
    arms.push_back({{"arm", arm.arm},
                    {"agent", arm.agent},
                    {"runs", runs},
                    {"reached_threshold", arm.reached},
                    {"median_episodes_to_threshold", arm.median_episodes_to_threshold},
                    {"median_final_mean", arm.median_final_mean},
                    {"mean_final_mean", arm.mean_final_mean},
                    {"median_peak_force", opt(arm.median_peak_force)},
                    {"median_terminal_force", opt(arm.median_terminal_force)},
                    {"median_peak_moment", opt(arm.median_peak_moment)},
                    {"median_terminal_moment", opt(arm.median_terminal_moment)}});
  }
  json j{{"preset", s.preset},
         {"reward_threshold", s.settings.reward_threshold},
         {"window", s.settings.window},
         {"final_window", s.settings.final_window},
         {"unreached_counts_as", "episodes + 1"},
         {"arms", arms}};
  j["ratios"] = s.ratios ? *s.ratios : json(nullptr);
  return j;
}

std::string envelope_csv(const ComparisonSummary& s) {
  std::ostringstream out;
  out << "episode";
  std::size_t rows = std::numeric_limits<std::size_t>::max();
  for (const auto& arm : s.arms) {
    out << ',' << arm.arm << "_min," << arm.arm << "_mean," << arm.arm << "_max";
    rows = std::min(rows, arm.envelope.mean.size());
  }
  out << '\n';
  if (s.arms.empty()) rows = 0;
  for (std::size_t e = 0; e < rows; ++e) {
    out << e;
    for (const auto& arm : s.arms) {
      out << ',' << format_double(arm.envelope.min[e]) << ',' << format_double(arm.envelope.mean[e]) << ','
          << format_double(arm.envelope.max[e]);
    }
    out << '\n';
  }
  return out.str();
}

std::string runs_csv(const ComparisonSummary& s) {
  auto cell = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
  std::ostringstream out;
  out << "arm,seed,episodes_to_threshold,final_mean,peak_force,terminal_force,peak_moment,terminal_moment\n";
  for (const auto& arm : s.arms) {
    for (const auto& r : arm.runs) {
      out << arm.arm << ',' << r.seed << ','
          << (r.episodes_to_threshold ? std::to_string(*r.episodes_to_threshold) : std::string()) << ','
          << cell(r.final_mean) << ',' << cell(r.peak_force) << ',' << cell(r.terminal_force) << ','
          << cell(r.peak_moment) << ',' << cell(r.terminal_moment) << '\n';
    }
  }
  return out.str();
}

}  // namespace lcrl::harness
