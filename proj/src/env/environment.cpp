#include "lcrl/env/environment.hpp"

#include <string>

namespace lcrl::env {

void EnvSpec::validate() const {
  if (state_dim < 1 || action_dim < 1) throw std::invalid_argument("env dims must be >= 1");
  require_size(action_lb, action_dim, "action lower bounds");
  require_size(action_ub, action_dim, "action upper bounds");
  require_size(state_scale, state_dim, "state scales");
  if (!(action_lb.array() < action_ub.array()).all()) {
    throw std::invalid_argument("action bounds need lb < ub componentwise");
  }
  if (!(state_scale.array() > 0.0).all()) throw std::invalid_argument("state scales must be positive");
  if (max_steps < 1) throw std::invalid_argument("max_steps must be >= 1");
}

void Environment::check_action(const Vector& action) const {
  const EnvSpec& s = spec();
  require_size(action, s.action_dim, "action");
  if (!action.allFinite()) throw std::invalid_argument("action contains non-finite entries");
  for (Eigen::Index i = 0; i < action.size(); ++i) {
    if (action[i] < s.action_lb[i] || action[i] > s.action_ub[i]) {
      throw std::out_of_range("action component " + std::to_string(i) + " = " + format_double(action[i]) +
                              " outside [" + format_double(s.action_lb[i]) + ", " +
                              format_double(s.action_ub[i]) + "]");
    }
  }
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace lcrl::env
