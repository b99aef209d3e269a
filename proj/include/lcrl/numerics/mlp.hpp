#pragma once

#include <cstddef>
#include <random>
#include <vector>

#include "lcrl/numerics/dense.hpp"

namespace lcrl {

enum class OutputActivation {
  kLinear,     // unbounded output, used by critics
  kBoxedTanh,  // tanh followed by an affine map into [lb, ub]
};

/// Intermediate values from a batched forward pass, consumed by backward().
struct MlpTape {
  // activations[0] is the input batch; activations[l] is the post-tanh output of hidden layer l.
  std::vector<Matrix> activations;
  // tanh of the last pre-activation (only filled for boxed outputs).
  Matrix output_tanh;
};

/// Fully connected network with tanh hidden units.
///
/// Parameters live in one flat vector: for every layer the weight block
/// (out x in, column-major) followed by the bias. Batched calls take one
/// sample per column.
class Mlp {
 public:
  Mlp() = default;
  Mlp(std::vector<int> layer_sizes, OutputActivation output, Vector out_lb = {}, Vector out_ub = {});

  static Mlp linear(std::vector<int> layer_sizes) {
    return Mlp(std::move(layer_sizes), OutputActivation::kLinear);
  }
  static Mlp boxed(std::vector<int> layer_sizes, Vector lb, Vector ub) {
    return Mlp(std::move(layer_sizes), OutputActivation::kBoxedTanh, std::move(lb), std::move(ub));
  }

  // Uniform in +-1/sqrt(fan_in) for weights and biases.
  void initialize(std::mt19937_64& rng);

  int input_size() const { return layer_sizes_.front(); }
  int output_size() const { return layer_sizes_.back(); }
  const std::vector<int>& layer_sizes() const { return layer_sizes_; }
  std::size_t layer_count() const { return layer_sizes_.size() - 1; }
  std::size_t parameter_count() const { return static_cast<std::size_t>(params_.size()); }
  OutputActivation output_activation() const { return output_; }
  const Vector& out_lb() const { return out_lb_; }
  const Vector& out_ub() const { return out_ub_; }

  Vector& parameters() { return params_; }
  const Vector& parameters() const { return params_; }
  void set_parameters(const Vector& params);

  Eigen::Map<const Matrix> weights(std::size_t layer) const;
  Eigen::Map<Matrix> weights(std::size_t layer);
  Eigen::Map<const Vector> bias(std::size_t layer) const;
  Eigen::Map<Vector> bias(std::size_t layer);

  Vector forward(const Vector& input) const;
  Matrix forward(const Matrix& inputs, MlpTape* tape = nullptr) const;

  /// Back-propagates `upstream` (dLoss/dOutput, same shape as the forward
  /// output) through the taped pass. Adds dLoss/dParams into `param_grad`
  /// when non-null and returns dLoss/dInput.
  Matrix backward(const MlpTape& tape, const Matrix& upstream, Vector* param_grad) const;

 private:
  std::size_t weight_offset(std::size_t layer) const { return offsets_[layer]; }
  std::size_t bias_offset(std::size_t layer) const {
    return offsets_[layer] + static_cast<std::size_t>(layer_sizes_[layer + 1] * layer_sizes_[layer]);
  }

  std::vector<int> layer_sizes_;
  std::vector<std::size_t> offsets_;
  OutputActivation output_ = OutputActivation::kLinear;
  Vector out_lb_;
  Vector out_ub_;
  Vector params_;
};

}  // namespace lcrl
