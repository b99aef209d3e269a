#include "lcrl/env/peg_env.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace lcrl::env {
namespace {

double relu(double v) { return v > 0.0 ? v : 0.0; }
double sign(double v) { return static_cast<double>((v > 0.0) - (v < 0.0)); }

template <int N>
nlohmann::json fixed_to_json(const Eigen::Matrix<double, N, 1>& v) {
  return nlohmann::json(std::vector<double>(v.data(), v.data() + N));
}

template <int N>
Eigen::Matrix<double, N, 1> fixed_from_json(const nlohmann::json& j, const char* key) {
  const auto values = j.get<std::vector<double>>();
  if (values.size() != N) {
    throw std::invalid_argument(std::string("peg.") + key + ": expected " + std::to_string(N) + " values");
  }
  return Eigen::Map<const Eigen::Matrix<double, N, 1>>(values.data());
}

}  // namespace

void PegParams::validate() const {
  if (!(clearance > 0.0)) throw std::invalid_argument("peg: clearance must be > 0");
  if (!(compliance.array() > 0.0).all()) throw std::invalid_argument("peg: compliance gains must be > 0");
  if (!(kinematic_scale.array() > 0.0).all()) throw std::invalid_argument("peg: kinematic scales must be > 0");
  if (!(action_lb.array() < action_ub.array()).all()) throw std::invalid_argument("peg: need lb < ub");
  if (!(init_range.array() >= 0.0).all()) throw std::invalid_argument("peg: init range must be >= 0");
  if (!(state_scale.array() > 0.0).all()) throw std::invalid_argument("peg: state scales must be > 0");
  if (!(target_depth > 0.0) || insertion_steps < 1) throw std::invalid_argument("peg: bad insertion plan");
  if (sensor_noise < 0.0 || jam_factor < 0.0 || tip_offset < 0.0) {
    throw std::invalid_argument("peg: noise, jam factor and tip offset must be >= 0");
  }
  if (max_steps < 1) throw std::invalid_argument("peg: max_steps must be >= 1");
}

Vec6 PegParams::planned_advance() const {
  Vec6 p = Vec6::Zero();
  p[2] = target_depth / insertion_steps;
  return p;
}

void to_json(nlohmann::json& j, const PegParams& p) {
  j = nlohmann::json{
      {"clearance", p.clearance},
      {"tip_offset", p.tip_offset},
      {"k_force", p.k_force},
      {"k_moment", p.k_moment},
      {"k_jam_force", p.k_jam_force},
      {"k_torsion", p.k_torsion},
      {"jam_factor", p.jam_factor},
      {"sensor_noise", p.sensor_noise},
      {"target_depth", p.target_depth},
      {"insertion_steps", p.insertion_steps},
      {"compliance", fixed_to_json<6>(p.compliance)},
      {"kinematic_scale", fixed_to_json<6>(p.kinematic_scale)},
      {"reference_wrench", fixed_to_json<6>(p.reference_wrench)},
      {"init_range", fixed_to_json<6>(p.init_range)},
      {"action_lb", fixed_to_json<6>(p.action_lb)},
      {"action_ub", fixed_to_json<6>(p.action_ub)},
      {"h_z", p.h_z},
      {"h_f", p.h_f},
      {"h_m", p.h_m},
      {"r_s", p.r_s},
      {"depth_penalty", p.depth_penalty == DepthPenalty::kProgress ? "progress" : "remaining"},
      {"force_limit", p.force_limit},
      {"max_steps", p.max_steps},
      {"state_scale", fixed_to_json<12>(p.state_scale)},
  };
}

void from_json(const nlohmann::json& j, PegParams& p) {
  static const std::set<std::string> known = {
      "clearance",   "tip_offset",      "k_force",     "k_moment",         "k_jam_force",
      "k_torsion",   "jam_factor",      "sensor_noise", "target_depth",    "insertion_steps",
      "compliance",  "kinematic_scale", "reference_wrench", "init_range",  "action_lb",
      "action_ub",   "h_z",             "h_f",         "h_m",              "r_s",
      "depth_penalty", "force_limit",   "max_steps",   "state_scale"};
  if (!j.is_object()) throw std::invalid_argument("peg: parameters must be an object");
  for (const auto& [key, _] : j.items()) {
    if (!known.count(key)) throw std::invalid_argument("peg." + key + ": unknown parameter");
  }
  auto num = [&](const char* key, double& out) {
    if (j.contains(key)) out = j.at(key).get<double>();
  };
  num("clearance", p.clearance);
  num("tip_offset", p.tip_offset);
  num("k_force", p.k_force);
  num("k_moment", p.k_moment);
  num("k_jam_force", p.k_jam_force);
  num("k_torsion", p.k_torsion);
  num("jam_factor", p.jam_factor);
  num("sensor_noise", p.sensor_noise);
  num("target_depth", p.target_depth);
  num("h_z", p.h_z);
  num("h_f", p.h_f);
  num("h_m", p.h_m);
  num("r_s", p.r_s);
  num("force_limit", p.force_limit);
  if (j.contains("insertion_steps")) p.insertion_steps = j.at("insertion_steps").get<int>();
  if (j.contains("max_steps")) p.max_steps = j.at("max_steps").get<int>();
  if (j.contains("compliance")) p.compliance = fixed_from_json<6>(j.at("compliance"), "compliance");
  if (j.contains("kinematic_scale")) {
    p.kinematic_scale = fixed_from_json<6>(j.at("kinematic_scale"), "kinematic_scale");
  }
  if (j.contains("reference_wrench")) {
    p.reference_wrench = fixed_from_json<6>(j.at("reference_wrench"), "reference_wrench");
  }
  if (j.contains("init_range")) p.init_range = fixed_from_json<6>(j.at("init_range"), "init_range");
  if (j.contains("action_lb")) p.action_lb = fixed_from_json<6>(j.at("action_lb"), "action_lb");
  if (j.contains("action_ub")) p.action_ub = fixed_from_json<6>(j.at("action_ub"), "action_ub");
  if (j.contains("state_scale")) p.state_scale = fixed_from_json<12>(j.at("state_scale"), "state_scale");
  if (j.contains("depth_penalty")) {
    const auto mode = j.at("depth_penalty").get<std::string>();
    if (mode == "progress") {
      p.depth_penalty = DepthPenalty::kProgress;
    } else if (mode == "remaining") {
      p.depth_penalty = DepthPenalty::kRemaining;
    } else {
      throw std::invalid_argument("peg.depth_penalty: expected 'progress' or 'remaining'");
    }
  }
  p.validate();
}

Vec6 contact_wrench(const PegParams& params, const Vec6& pose) {
  const double x = pose[0], y = pose[1], alpha = pose[3], beta = pose[4], gamma = pose[5];
  const double px = relu(std::abs(x) + params.tip_offset * std::abs(beta) - params.clearance);
  const double py = relu(std::abs(y) + params.tip_offset * std::abs(alpha) - params.clearance);
  Vec6 w;
  w[0] = -params.k_force * sign(x) * px;
  w[1] = -params.k_force * sign(y) * py;
  w[2] = params.k_jam_force * (px + py);
  w[3] = -params.k_moment * sign(alpha) * py;
  w[4] = -params.k_moment * sign(beta) * px;
  w[5] = -params.k_torsion * gamma;
  return w;
}

double jam_level(const PegParams& params, const Vec6& pose) {
  return relu(std::abs(pose[0]) - params.clearance) + relu(std::abs(pose[1]) - params.clearance);
}

PegEnv::PegEnv(PegParams params) : params_(std::move(params)) {
  params_.validate();
  spec_.state_dim = kStateDim;
  spec_.action_dim = kActionDim;
  spec_.action_lb = params_.action_lb;
  spec_.action_ub = params_.action_ub;
  spec_.state_scale = params_.state_scale;
  spec_.max_steps = params_.max_steps;
  spec_.validate();
  gains_ = params_.compliance;
}

Vector PegEnv::reset(std::uint64_t seed, const Vector& init_range) {
  require_size(init_range, 6, "peg init range");
  if (!init_range.allFinite() || !(init_range.array() >= 0.0).all()) {
    throw std::invalid_argument("peg: init range must be finite and >= 0");
  }
  std::mt19937_64 init_rng(derive_seed(seed, 0));
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  Vec6 pose;
  for (int k = 0; k < 6; ++k) pose[k] = init_range[k] * unit(init_rng);
  return reset_to_pose(seed, pose);
}

Vector PegEnv::reset_to_pose(std::uint64_t seed, const Vec6& pose) {
  if (!pose.allFinite()) throw std::invalid_argument("peg: initial pose must be finite");
  rng_.seed(derive_seed(seed, 1));
  pose_ = pose;
  pose_[2] = 0.0;
  gains_ = params_.compliance;
  steps_ = 0;
  done_ = false;
  sense();
  within_limit_ = wrench_inf_norm_normalized() <= params_.force_limit;
  return observe();
}

void PegEnv::sense() {
  wrench_ = contact_wrench(params_, pose_);
  measured_ = wrench_;
  if (params_.sensor_noise > 0.0) {
    std::normal_distribution<double> noise(0.0, params_.sensor_noise);
    for (int k = 0; k < 6; ++k) measured_[k] += noise(rng_);
  }
}

double PegEnv::wrench_inf_norm_normalized() const {
  return (measured_.array() / params_.state_scale.tail<6>().array()).abs().maxCoeff();
}

Vector PegEnv::observe() const {
  Vector s(kStateDim);
  s.head<6>() = pose_;
  s.tail<6>() = measured_;
  return (s.array() / params_.state_scale.array()).matrix();
}

StepResult PegEnv::step(const Vector& action) {
  if (done_) throw std::logic_error("peg: step called after episode end");
  check_action(action);

  // K = diag(a * K_hat) + K_hat; command u = p_p + K (F - F_rfr).
  gains_ = params_.compliance.cwiseProduct(Vec6::Ones() + Vec6(action));
  const Vec6 feedback = params_.kinematic_scale.cwiseProduct(gains_.cwiseProduct(measured_ - params_.reference_wrench));
  const Vec6 u = params_.planned_advance() + feedback;

  const double jam = jam_level(params_, pose_);
  Vec6 next = pose_;
  next[0] += u[0] + params_.tip_offset * u[4];
  next[1] += u[1] + params_.tip_offset * u[3];
  next[3] += u[3];
  next[4] += u[4];
  next[5] += u[5];
  const double advance = u[2] * std::max(0.0, 1.0 - params_.jam_factor * jam);
  next[2] = std::max(0.0, pose_[2] + advance);
  if (!next.allFinite()) throw DivergenceError("peg: pose became non-finite");

  const double planned = params_.planned_advance()[2];
  const double progress = next[2] - pose_[2];
  pose_ = next;
  ++steps_;
  sense();

  const Vector obs = observe();
  const double force_norm = obs.segment<3>(6).norm();
  const double moment_norm = obs.segment<3>(9).norm();
  const double depth_term = params_.depth_penalty == DepthPenalty::kProgress
                                ? 1.0 - progress / planned
                                : std::max(0.0, params_.target_depth - pose_[2]) / params_.target_depth;
  double reward = -params_.h_z * depth_term - params_.h_f * force_norm - params_.h_m * moment_norm;

  within_limit_ = within_limit_ && wrench_inf_norm_normalized() <= params_.force_limit;
  const bool inserted = pose_[2] >= params_.target_depth;
  const bool success = inserted && within_limit_;
  if (success) reward += params_.r_s;
  done_ = inserted || steps_ >= params_.max_steps;
  return {obs, reward, done_, success, done_ && !inserted};
}

Snapshot PegEnv::snapshot() const {
  return {std::string(kKind), State{pose_, wrench_, measured_, gains_, rng_, steps_, done_, within_limit_}};
}

void PegEnv::restore(const Snapshot& token) {
  const auto& st = token.as<State>(kKind);
  pose_ = st.pose;
  wrench_ = st.wrench;
  measured_ = st.measured;
  gains_ = st.gains;
  rng_ = st.rng;
  steps_ = st.steps;
  done_ = st.done;
  within_limit_ = st.within_limit;
}

}  // namespace lcrl::env
