#include "lcrl/numerics/mlp.hpp"

#include <cmath>
#include <string>

namespace lcrl {

Mlp::Mlp(std::vector<int> layer_sizes, OutputActivation output, Vector out_lb, Vector out_ub)
    : layer_sizes_(std::move(layer_sizes)),
      output_(output),
      out_lb_(std::move(out_lb)),
      out_ub_(std::move(out_ub)) {
  if (layer_sizes_.size() < 2) throw DimensionError("mlp needs at least an input and an output layer");
  for (int s : layer_sizes_) {
    if (s < 1) throw DimensionError("mlp layer sizes must be positive");
  }
  if (output_ == OutputActivation::kBoxedTanh) {
    require_size(out_lb_, output_size(), "mlp output lower bound");
    require_size(out_ub_, output_size(), "mlp output upper bound");
    if (!(out_lb_.array() < out_ub_.array()).all()) {
      throw std::invalid_argument("mlp output box needs lb < ub componentwise");
    }
  }
  std::size_t total = 0;
  for (std::size_t l = 0; l + 1 < layer_sizes_.size(); ++l) {
    offsets_.push_back(total);
    total += static_cast<std::size_t>((layer_sizes_[l] + 1) * layer_sizes_[l + 1]);
  }
  params_ = Vector::Zero(static_cast<Eigen::Index>(total));
}

void Mlp::initialize(std::mt19937_64& rng) {
  for (std::size_t l = 0; l < layer_count(); ++l) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(layer_sizes_[l]));
    std::uniform_real_distribution<double> dist(-bound, bound);
    auto w = weights(l);
    for (Eigen::Index c = 0; c < w.cols(); ++c)
      for (Eigen::Index r = 0; r < w.rows(); ++r) w(r, c) = dist(rng);
    auto b = bias(l);
    for (Eigen::Index r = 0; r < b.size(); ++r) b[r] = dist(rng);
  }
}

void Mlp::set_parameters(const Vector& params) {
  require_size(params, params_.size(), "mlp parameters");
  params_ = params;
}

Eigen::Map<const Matrix> Mlp::weights(std::size_t layer) const {
  return {params_.data() + weight_offset(layer), layer_sizes_[layer + 1], layer_sizes_[layer]};
}
Eigen::Map<Matrix> Mlp::weights(std::size_t layer) {
  return {params_.data() + weight_offset(layer), layer_sizes_[layer + 1], layer_sizes_[layer]};
}
Eigen::Map<const Vector> Mlp::bias(std::size_t layer) const {
  return {params_.data() + bias_offset(layer), layer_sizes_[layer + 1]};
}
Eigen::Map<Vector> Mlp::bias(std::size_t layer) {
  return {params_.data() + bias_offset(layer), layer_sizes_[layer + 1]};
}

Vector Mlp::forward(const Vector& input) const {
  require_size(input, input_size(), "mlp input");
  Matrix out = forward(Matrix(input), nullptr);
  return out.col(0);
}

Matrix Mlp::forward(const Matrix& inputs, MlpTape* tape) const {
  if (inputs.rows() != input_size()) {
    throw DimensionError("mlp input: expected " + std::to_string(input_size()) + " rows, got " +
                         std::to_string(inputs.rows()));
  }
  if (tape) {
    tape->activations.clear();
    tape->activations.push_back(inputs);
  }
  Matrix a = inputs;
  const std::size_t last = layer_count() - 1;
  for (std::size_t l = 0; l < last; ++l) {
    Matrix z = weights(l) * a;
    z.colwise() += bias(l);
    a = z.array().tanh().matrix();
    if (tape) tape->activations.push_back(a);
  }
  Matrix z = weights(last) * a;
  z.colwise() += bias(last);
  if (output_ == OutputActivation::kLinear) return z;

  Matrix t = z.array().tanh().matrix();
  const Vector mid = 0.5 * (out_lb_ + out_ub_);
  const Vector half = 0.5 * (out_ub_ - out_lb_);
  Matrix y = (t.array().colwise() * half.array()).matrix();
  y.colwise() += mid;
  // Rounding in mid + half * tanh can land one ulp outside the box.
  for (Eigen::Index c = 0; c < y.cols(); ++c) {
    y.col(c) = y.col(c).cwiseMax(out_lb_).cwiseMin(out_ub_);
  }
  if (tape) tape->output_tanh = std::move(t);
  return y;
}

Matrix Mlp::backward(const MlpTape& tape, const Matrix& upstream, Vector* param_grad) const {
  const std::size_t last = layer_count() - 1;
  if (tape.activations.size() != layer_count()) throw DimensionError("mlp tape does not match network");
  const Eigen::Index batch = tape.activations.front().cols();
  if (upstream.rows() != output_size() || upstream.cols() != batch) {
    throw DimensionError("mlp upstream gradient has wrong shape");
  }
  if (param_grad) require_size(*param_grad, params_.size(), "mlp parameter gradient");

  Matrix delta;
  if (output_ == OutputActivation::kLinear) {
    delta = upstream;
  } else {
    const Vector half = 0.5 * (out_ub_ - out_lb_);
    const auto& t = tape.output_tanh;
    delta = (upstream.array() * (1.0 - t.array().square())).matrix();
    delta = (delta.array().colwise() * half.array()).matrix();
  }

  for (std::size_t l = last + 1; l-- > 0;) {
    const Matrix& prev = tape.activations[l];
    if (param_grad) {
      const auto rows = layer_sizes_[l + 1];
      const auto cols = layer_sizes_[l];
      Eigen::Map<Matrix> gw(param_grad->data() + weight_offset(l), rows, cols);
      Eigen::Map<Vector> gb(param_grad->data() + bias_offset(l), rows);
      gw.noalias() += delta * prev.transpose();
      gb.noalias() += delta.rowwise().sum();
    }
    Matrix back = weights(l).transpose() * delta;
    if (l == 0) return back;
    delta = (back.array() * (1.0 - prev.array().square())).matrix();
  }
  return {};
}

}  // namespace lcrl
