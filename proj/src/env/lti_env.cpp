#include "lcrl/env/lti_env.hpp"

#include <stdexcept>

namespace lcrl::env {

LtiEnv::LtiEnv(LtiParams params) : params_(std::move(params)) {
  const Eigen::Index m = params_.E.rows();
  if (m < 1 || params_.E.cols() != m) throw DimensionError("lti: E must be square and non-empty");
  if (params_.F.rows() != m || params_.F.cols() < 1) throw DimensionError("lti: F must have m rows");
  if (!params_.E.allFinite() || !params_.F.allFinite()) throw std::invalid_argument("lti: non-finite E or F");
  if (params_.noise_std < 0.0) throw std::invalid_argument("lti: noise_std must be >= 0");
  const Eigen::Index n = params_.F.cols();
  if (params_.init_range.size() == 0) params_.init_range = Vector::Ones(m);
  if (params_.action_lb.size() == 0) params_.action_lb = -Vector::Ones(n);
  if (params_.action_ub.size() == 0) params_.action_ub = Vector::Ones(n);
  require_size(params_.init_range, m, "lti init range");

  spec_.state_dim = static_cast<int>(m);
  spec_.action_dim = static_cast<int>(n);
  spec_.action_lb = params_.action_lb;
  spec_.action_ub = params_.action_ub;
  spec_.state_scale = Vector::Ones(m);
  spec_.max_steps = params_.max_steps;
  spec_.validate();
  state_ = Vector::Zero(m);
}

Vector LtiEnv::reset(std::uint64_t seed, const Vector& init_range) {
  require_size(init_range, spec_.state_dim, "lti init range");
  if (!(init_range.array() >= 0.0).all() || !init_range.allFinite()) {
    throw std::invalid_argument("lti: init range must be finite and >= 0");
  }
  std::mt19937_64 init_rng(derive_seed(seed, 0));
  rng_.seed(derive_seed(seed, 1));
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (Eigen::Index j = 0; j < state_.size(); ++j) state_[j] = init_range[j] * unit(init_rng);
  steps_ = 0;
  done_ = false;
  return state_;
}

StepResult LtiEnv::step(const Vector& action) {
  if (done_) throw std::logic_error("lti: step called after episode end");
  check_action(action);
  Vector next = params_.E * state_ + params_.F * action;
  if (params_.noise_std > 0.0) {
    std::normal_distribution<double> noise(0.0, params_.noise_std);
    for (Eigen::Index j = 0; j < next.size(); ++j) next[j] += noise(rng_);
  }
  if (!next.allFinite()) throw DivergenceError("lti: state became non-finite");
  state_ = std::move(next);
  ++steps_;
  done_ = steps_ >= spec_.max_steps;
  return {state_, -state_.norm(), done_, false, done_};
}

void LtiEnv::set_state(const Vector& s) {
  require_size(s, spec_.state_dim, "lti state");
  state_ = s;
}

Snapshot LtiEnv::snapshot() const { return {std::string(kKind), State{state_, rng_, steps_, done_}}; }

void LtiEnv::restore(const Snapshot& token) {
  const auto& st = token.as<State>(kKind);
  if (st.state.size() != state_.size()) throw std::invalid_argument("lti: snapshot from a different system");
  state_ = st.state;
  rng_ = st.rng;
  steps_ = st.steps;
  done_ = st.done;
}

}  // namespace lcrl::env
