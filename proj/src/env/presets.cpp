#include "lcrl/env/presets.hpp"

#include <random>
#include <stdexcept>

namespace lcrl::env {

std::vector<std::string> preset_names() {
  return {"sim-group1", "sim-group2", "experiment-table3", "lti-coupled3", "paper-eq10", "lti-identity3"};
}

bool is_peg_preset(const std::string& name) {
  return name == "sim-group1" || name == "sim-group2" || name == "experiment-table3";
}

bool is_lti_preset(const std::string& name) {
  return name == "lti-coupled3" || name == "paper-eq10" || name == "lti-identity3";
}

PegParams peg_preset(const std::string& name) {
  PegParams p;
  if (name == "sim-group1") {
    // 10 mm hole, 9.9 mm peg, 30 mm depth.
    return p;
  }
  if (name == "sim-group2") {
    // 8 mm hole, 7.95 mm peg, 20 mm depth.
    p.clearance = 0.025;
    p.target_depth = 20.0;
    p.state_scale[2] = 20.0;
    return p;
  }
  if (name == "experiment-table3") {
    p.insertion_steps = 250;
    p.max_steps = 400;
    p.init_range << 0.4, 0.4, 0.4, 1.0, 1.0, 1.0;
    p.compliance << 1e-3, 1e-3, 1e-5, 8e-4, 8e-4, 8e-4;
    p.state_scale.head<6>() << 2.0, 2.0, 30.0, 5.0, 5.0, 5.0;
    return p;
  }
  throw std::invalid_argument("unknown peg preset '" + name + "'");
}

LtiParams lti_preset(const std::string& name) {
  LtiParams p;
  if (name == "lti-coupled3" || name == "paper-eq10") {
    p.E = (Matrix(3, 3) << -1, 1, 0, 0, 1, 0, 0, 0, 1).finished();
    p.F = Matrix::Identity(3, 3);
    return p;
  }
  if (name == "lti-identity3") {
    p.E = Matrix::Zero(3, 3);
    p.F = Matrix::Identity(3, 3);
    return p;
  }
  throw std::invalid_argument("unknown lti preset '" + name + "'");
}

LtiParams random_sparse_lti(int m, int n, double density, std::uint64_t seed) {
  if (m < 1 || n < 1) throw std::invalid_argument("random lti: dims must be >= 1");
  if (!(density >= 0.0 && density <= 1.0)) throw std::invalid_argument("random lti: density in [0, 1]");
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution keep(density);
  std::uniform_real_distribution<double> value(0.1, 1.0);
  LtiParams p;
  p.E = Matrix::Zero(m, m);
  p.F = Matrix::Zero(m, n);
  for (int c = 0; c < m; ++c)
    for (int r = 0; r < m; ++r)
      if (keep(rng)) p.E(r, c) = value(rng);
  for (int c = 0; c < n; ++c)
    for (int r = 0; r < m; ++r)
      if (keep(rng)) p.F(r, c) = value(rng);
  return p;
}

std::unique_ptr<Environment> make_environment(const std::string& preset) {
  if (is_peg_preset(preset)) return std::make_unique<PegEnv>(peg_preset(preset));
  if (is_lti_preset(preset)) return std::make_unique<LtiEnv>(lti_preset(preset));
  throw std::invalid_argument("unknown environment preset '" + preset + "'");
}

}  // namespace lcrl::env
