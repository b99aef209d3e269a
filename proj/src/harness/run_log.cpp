#include "lcrl/harness/run_log.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace lcrl::harness {

using nlohmann::json;

std::vector<double> RunLog::rewards() const {
  std::vector<double> out;
  out.reserve(episodes.size());
  for (const auto& e : episodes) out.push_back(e.reward);
  return out;
}

void RunLog::append(const EpisodeRecord& record) { episodes.push_back(record); }

std::string rewards_csv(const RunLog& log) {
  std::ostringstream out;
  out << "# config_hash=" << log.config_hash << "\n";
  out << "episode,reward,steps,success\n";
  for (const auto& e : log.episodes) {
    out << e.episode << ',' << format_double(e.reward) << ',' << e.steps << ',' << (e.success ? 1 : 0) << '\n';
  }
  return out.str();
}

RunLog parse_rewards_csv(const std::string& text) {
  RunLog log;
  std::istringstream in(text);
  std::string line;
  bool header = false;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line[0] == '#') {
      const std::string key = "# config_hash=";
      if (line.rfind(key, 0) == 0) log.config_hash = line.substr(key.size());
      continue;
    }
    if (!header) {
      if (line.rfind("episode,reward", 0) != 0) throw std::runtime_error("rewards csv: missing header");
      header = true;
      continue;
    }
    std::istringstream row(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(row, cell, ',')) cells.push_back(cell);
    if (cells.size() < 2) throw std::runtime_error("rewards csv: malformed line " + std::to_string(lineno));
    EpisodeRecord rec;
    try {
      rec.episode = std::stoi(cells[0]);
      rec.reward = std::stod(cells[1]);
      if (cells.size() > 2) rec.steps = std::stoi(cells[2]);
      if (cells.size() > 3) rec.success = cells[3] == "1";
    } catch (const std::exception&) {
      throw std::runtime_error("rewards csv: malformed line " + std::to_string(lineno));
    }
    log.episodes.push_back(rec);
  }
  if (!header) throw std::runtime_error("rewards csv: missing header");
  return log;
}

json run_metadata(const RunLog& log) {
  int successes = 0;
  for (const auto& e : log.episodes) successes += e.success ? 1 : 0;
  return json{{"config_hash", log.config_hash},
              {"preset", log.preset},
              {"agent", log.agent},
              {"seed", log.seed},
              {"episodes", log.episodes.size()},
              {"successes", successes},
              {"diverged", log.diverged},
              {"error", log.error}};
}

namespace {

double force_norm(const TraceStep& s) { return s.wrench.size() >= 3 ? s.wrench.head(3).norm() : 0.0; }
double moment_norm(const TraceStep& s) { return s.wrench.size() >= 6 ? s.wrench.segment(3, 3).norm() : 0.0; }

}  // namespace

// Peaks skip step 0: the initial contact is fixed by the init error, not the controller.
double Trace::peak_force() const {
  double best = 0.0;
  for (const auto& s : steps) {
    if (s.step > 0) best = std::max(best, force_norm(s));
  }
  return best;
}
double Trace::terminal_force() const { return steps.empty() ? 0.0 : force_norm(steps.back()); }
double Trace::peak_moment() const {
  double best = 0.0;
  for (const auto& s : steps) {
    if (s.step > 0) best = std::max(best, moment_norm(s));
  }
  return best;
}
double Trace::terminal_moment() const { return steps.empty() ? 0.0 : moment_norm(steps.back()); }

std::string trace_csv(const Trace& trace, const std::string& config_hash) {
  static const char* kWrench[] = {"Fx", "Fy", "Fz", "Mx", "My", "Mz"};
  std::ostringstream out;
  out << "# config_hash=" << config_hash << "\n";
  out << "step";
  for (const auto& l : trace.state_labels) out << ',' << l;
  const int n_action = trace.steps.empty() ? 0 : static_cast<int>(trace.steps.front().action.size());
  if (trace.has_wrench) {
    for (const char* w : kWrench) out << ',' << w;
    for (int i = 0; i < 6; ++i) out << ",K" << (i + 1);
  }
  for (int i = 0; i < n_action; ++i) out << ",a" << (i + 1);
  out << ",reward\n";
  for (const auto& s : trace.steps) {
    out << s.step;
    for (Eigen::Index k = 0; k < s.state.size(); ++k) out << ',' << format_double(s.state(k));
    if (trace.has_wrench) {
      for (Eigen::Index k = 0; k < s.wrench.size(); ++k) out << ',' << format_double(s.wrench(k));
      for (Eigen::Index k = 0; k < s.gains.size(); ++k) out << ',' << format_double(s.gains(k));
    }
    for (Eigen::Index k = 0; k < s.action.size(); ++k) out << ',' << format_double(s.action(k));
    out << ',' << format_double(s.reward) << '\n';
  }
  return out.str();
}

json trace_summary(const Trace& trace) {
  return json{{"steps", trace.steps.size()},
              {"success", trace.success},
              {"total_reward", trace.total_reward},
              {"peak_force", trace.peak_force()},
              {"terminal_force", trace.terminal_force()},
              {"peak_moment", trace.peak_moment()},
              {"terminal_moment", trace.terminal_moment()}};
}

json timing_json(const Timing& t, const std::string& config_hash) {
  return json{{"config_hash", config_hash},
              {"graph_seconds", t.graph_seconds},
              {"train_seconds", t.train_seconds},
              {"eval_seconds", t.eval_seconds}};
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << text;
  if (!out) throw std::runtime_error(path + ": write failed");
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(path + ": cannot open");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_json(const std::string& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

json read_json(const std::string& path) {
  try {
    return json::parse(read_text(path));
  } catch (const json::parse_error& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

}  // namespace lcrl::harness
