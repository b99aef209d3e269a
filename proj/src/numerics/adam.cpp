#include "lcrl/numerics/adam.hpp"

#include <cmath>

namespace lcrl {

Adam::Adam(Eigen::Index parameter_count, AdamConfig config)
    : config_(config), m_(Vector::Zero(parameter_count)), v_(Vector::Zero(parameter_count)) {}

void Adam::step(Vector& params, const Vector& grad) {
  require_size(params, m_.size(), "adam parameters");
  require_size(grad, m_.size(), "adam gradient");
  if (!grad.allFinite()) throw DivergenceError("non-finite gradient passed to optimizer");
  ++steps_;
  m_ = config_.beta1 * m_ + (1.0 - config_.beta1) * grad;
  v_ = config_.beta2 * v_ + (1.0 - config_.beta2) * grad.cwiseProduct(grad);
  const double c1 = 1.0 - std::pow(config_.beta1, static_cast<double>(steps_));
  const double c2 = 1.0 - std::pow(config_.beta2, static_cast<double>(steps_));
  const double lr = config_.learning_rate;
  params.array() -= lr * (m_.array() / c1) / ((v_.array() / c2).sqrt() + config_.epsilon);
}

}  // namespace lcrl
