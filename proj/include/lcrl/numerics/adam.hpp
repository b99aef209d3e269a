#pragma once

#include <cstdint>

#include "lcrl/numerics/dense.hpp"

namespace lcrl {

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// Adam moments for one flat parameter vector.
class Adam {
 public:
  Adam() = default;
  Adam(Eigen::Index parameter_count, AdamConfig config);

  /// Applies one update. Throws DivergenceError on a non-finite gradient.
  void step(Vector& params, const Vector& grad);

  std::int64_t step_count() const { return steps_; }
  const AdamConfig& config() const { return config_; }
  const Vector& first_moment() const { return m_; }
  const Vector& second_moment() const { return v_; }

 private:
  AdamConfig config_;
  Vector m_;
  Vector v_;
  std::int64_t steps_ = 0;
};

}  // namespace lcrl
