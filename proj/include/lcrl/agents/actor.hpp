#pragma once

#include <memory>
#include <random>
#include <string>
#include <vector>

#include "lcrl/attribution/graph.hpp"
#include "lcrl/numerics/mlp.hpp"

namespace lcrl::agents {

enum class ActorKind { kGlobal, kLocal, kConstant };

std::string to_string(ActorKind kind);
ActorKind actor_kind_from_string(const std::string& text);

struct ActorTape {
  std::vector<MlpTape> nets;
};

/// Deterministic policy mapping a normalized state to an action inside [lb, ub].
class Actor {
 public:
  virtual ~Actor() = default;

  virtual ActorKind kind() const = 0;
  virtual std::unique_ptr<Actor> clone() const = 0;

  int state_dim() const { return state_dim_; }
  int action_dim() const { return static_cast<int>(lb_.size()); }
  const Vector& lb() const { return lb_; }
  const Vector& ub() const { return ub_; }

  Vector act(const Vector& state) const;
  /// One state per column in, one action per column out.
  virtual Matrix act_batch(const Matrix& states, ActorTape* tape) const = 0;
  /// Adds dLoss/dParams for every network into `grads` given dLoss/dActions.
  virtual void backward(const ActorTape& tape, const Matrix& action_grad, std::vector<Vector>& grads) const = 0;

  virtual std::vector<Mlp*> networks() = 0;
  virtual std::vector<const Mlp*> networks() const = 0;
  std::size_t parameter_count() const;

 protected:
  Actor(int state_dim, Vector lb, Vector ub);

  int state_dim_;
  Vector lb_;
  Vector ub_;
};

/// One network reads the whole state and emits every action component.
class GlobalActor final : public Actor {
 public:
  GlobalActor(int state_dim, Vector lb, Vector ub, std::vector<int> hidden, std::mt19937_64& rng);

  ActorKind kind() const override { return ActorKind::kGlobal; }
  std::unique_ptr<Actor> clone() const override { return std::make_unique<GlobalActor>(*this); }
  Matrix act_batch(const Matrix& states, ActorTape* tape) const override;
  void backward(const ActorTape& tape, const Matrix& action_grad, std::vector<Vector>& grads) const override;
  std::vector<Mlp*> networks() override { return {&net_}; }
  std::vector<const Mlp*> networks() const override { return {&net_}; }

  const Mlp& net() const { return net_; }

 private:
  Mlp net_;
};

/// One sub-policy per action component, each reading only the state columns
/// its graph row permits (ascending order). A row with no inputs gets a
/// single constant-zero input so its bias still sets the output.
class LocalActor final : public Actor {
 public:
  LocalActor(int state_dim, Vector lb, Vector ub, const attribution::ConnectionGraph& graph, std::vector<int> hidden,
             std::mt19937_64& rng);

  ActorKind kind() const override { return ActorKind::kLocal; }
  std::unique_ptr<Actor> clone() const override { return std::make_unique<LocalActor>(*this); }
  Matrix act_batch(const Matrix& states, ActorTape* tape) const override;
  void backward(const ActorTape& tape, const Matrix& action_grad, std::vector<Vector>& grads) const override;
  std::vector<Mlp*> networks() override;
  std::vector<const Mlp*> networks() const override;

  const attribution::ConnectionGraph& graph() const { return graph_; }
  const std::vector<int>& inputs_of(int action) const { return inputs_.at(static_cast<std::size_t>(action)); }
  const Mlp& sub_policy(int action) const { return nets_.at(static_cast<std::size_t>(action)); }
  Mlp& sub_policy(int action) { return nets_.at(static_cast<std::size_t>(action)); }

 private:
  attribution::ConnectionGraph graph_;
  std::vector<std::vector<int>> inputs_;
  std::vector<Mlp> nets_;
};

/// a == 0 everywhere: the plain constant-gain compliance controller.
class ConstantActor final : public Actor {
 public:
  ConstantActor(int state_dim, Vector lb, Vector ub);

  ActorKind kind() const override { return ActorKind::kConstant; }
  std::unique_ptr<Actor> clone() const override { return std::make_unique<ConstantActor>(*this); }
  Matrix act_batch(const Matrix& states, ActorTape* tape) const override;
  void backward(const ActorTape&, const Matrix&, std::vector<Vector>&) const override {}
  std::vector<Mlp*> networks() override { return {}; }
  std::vector<const Mlp*> networks() const override { return {}; }

 private:
  Vector value_;
};

/// {s_j | G(i, j) = 1} in ascending j; a single 0 when the row is empty.
Vector decompose(const Vector& state, const attribution::ConnectionGraph& graph, int action);

/// Stacks per-component outputs in component order, clamped to the box.
Vector integrate(const std::vector<double>& components, const Vector& lb, const Vector& ub);

}  // namespace lcrl::agents
