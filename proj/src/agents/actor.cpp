#include "lcrl/agents/actor.hpp"

#include <stdexcept>

namespace lcrl::agents {

std::string to_string(ActorKind kind) {
  switch (kind) {
    case ActorKind::kGlobal: return "gcrl";
    case ActorKind::kLocal: return "lcrl";
    case ActorKind::kConstant: return "constant";
  }
  return "gcrl";
}

ActorKind actor_kind_from_string(const std::string& text) {
  if (text == "gcrl") return ActorKind::kGlobal;
  if (text == "lcrl") return ActorKind::kLocal;
  if (text == "constant") return ActorKind::kConstant;
  throw std::invalid_argument("agent kind must be gcrl, lcrl or constant, got '" + text + "'");
}

Actor::Actor(int state_dim, Vector lb, Vector ub) : state_dim_(state_dim), lb_(std::move(lb)), ub_(std::move(ub)) {
  if (state_dim_ < 1) throw std::invalid_argument("actor state dim must be >= 1");
  if (lb_.size() < 1 || lb_.size() != ub_.size()) throw DimensionError("actor bounds have mismatched sizes");
  if (!(lb_.array() < ub_.array()).all()) throw std::invalid_argument("actor bounds need lb < ub");
}

Vector Actor::act(const Vector& state) const {
  require_size(state, state_dim_, "actor input");
  return act_batch(Matrix(state), nullptr).col(0);
}

std::size_t Actor::parameter_count() const {
  std::size_t total = 0;
  for (const Mlp* net : networks()) total += net->parameter_count();
  return total;
}

namespace {

std::vector<int> with_io(int in, const std::vector<int>& hidden, int out) {
  std::vector<int> sizes{in};
  sizes.insert(sizes.end(), hidden.begin(), hidden.end());
  sizes.push_back(out);
  return sizes;
}

}  // namespace

GlobalActor::GlobalActor(int state_dim, Vector lb, Vector ub, std::vector<int> hidden, std::mt19937_64& rng)
    : Actor(state_dim, std::move(lb), std::move(ub)) {
  net_ = Mlp::boxed(with_io(state_dim_, hidden, action_dim()), lb_, ub_);
  net_.initialize(rng);
}

Matrix GlobalActor::act_batch(const Matrix& states, ActorTape* tape) const {
  if (tape) {
    tape->nets.resize(1);
    return net_.forward(states, &tape->nets[0]);
  }
  return net_.forward(states, nullptr);
}

void GlobalActor::backward(const ActorTape& tape, const Matrix& action_grad, std::vector<Vector>& grads) const {
  if (grads.size() != 1) throw DimensionError("global actor expects one gradient vector");
  net_.backward(tape.nets.at(0), action_grad, &grads[0]);
}

LocalActor::LocalActor(int state_dim, Vector lb, Vector ub, const attribution::ConnectionGraph& graph,
                       std::vector<int> hidden, std::mt19937_64& rng)
    : Actor(state_dim, std::move(lb), std::move(ub)), graph_(graph) {
  graph_.validate();
  if (graph_.action_dim() != action_dim() || graph_.state_dim() != state_dim_) {
    throw DimensionError("connection graph is " + std::to_string(graph_.action_dim()) + " x " +
                         std::to_string(graph_.state_dim()) + ", actor needs " + std::to_string(action_dim()) +
                         " x " + std::to_string(state_dim_));
  }
  for (int i = 0; i < action_dim(); ++i) {
    inputs_.push_back(graph_.inputs_of(i));
    const int width = inputs_.back().empty() ? 1 : static_cast<int>(inputs_.back().size());
    Vector lo(1), hi(1);
    lo[0] = lb_[i];
    hi[0] = ub_[i];
    nets_.push_back(Mlp::boxed(with_io(width, hidden, 1), lo, hi));
    nets_.back().initialize(rng);
  }
}

Matrix LocalActor::act_batch(const Matrix& states, ActorTape* tape) const {
  if (states.rows() != state_dim_) throw DimensionError("local actor input has wrong row count");
  const Eigen::Index batch = states.cols();
  Matrix actions(action_dim(), batch);
  if (tape) tape->nets.resize(nets_.size());
  for (std::size_t i = 0; i < nets_.size(); ++i) {
    const auto& cols = inputs_[i];
    Matrix local;
    if (cols.empty()) {
      local = Matrix::Zero(1, batch);
    } else {
      local.resize(static_cast<Eigen::Index>(cols.size()), batch);
      for (std::size_t k = 0; k < cols.size(); ++k) local.row(static_cast<Eigen::Index>(k)) = states.row(cols[k]);
    }
    actions.row(static_cast<Eigen::Index>(i)) = nets_[i].forward(local, tape ? &tape->nets[i] : nullptr);
  }
  return actions;
}

void LocalActor::backward(const ActorTape& tape, const Matrix& action_grad, std::vector<Vector>& grads) const {
  if (grads.size() != nets_.size()) throw DimensionError("local actor gradient count mismatch");
  for (std::size_t i = 0; i < nets_.size(); ++i) {
    nets_[i].backward(tape.nets.at(i), action_grad.row(static_cast<Eigen::Index>(i)), &grads[i]);
  }
}

std::vector<Mlp*> LocalActor::networks() {
  std::vector<Mlp*> out;
  for (auto& n : nets_) out.push_back(&n);
  return out;
}

std::vector<const Mlp*> LocalActor::networks() const {
  std::vector<const Mlp*> out;
  for (const auto& n : nets_) out.push_back(&n);
  return out;
}

ConstantActor::ConstantActor(int state_dim, Vector lb, Vector ub) : Actor(state_dim, std::move(lb), std::move(ub)) {
  value_ = Vector::Zero(action_dim()).cwiseMax(lb_).cwiseMin(ub_);
}

Matrix ConstantActor::act_batch(const Matrix& states, ActorTape*) const {
  if (states.rows() != state_dim_) throw DimensionError("constant actor input has wrong row count");
  return value_.replicate(1, states.cols());
}

Vector decompose(const Vector& state, const attribution::ConnectionGraph& graph, int action) {
  require_size(state, graph.state_dim(), "decompose state");
  const auto cols = graph.inputs_of(action);
  if (cols.empty()) return Vector::Zero(1);
  Vector out(static_cast<Eigen::Index>(cols.size()));
  for (std::size_t k = 0; k < cols.size(); ++k) out[static_cast<Eigen::Index>(k)] = state[cols[k]];
  return out;
}

Vector integrate(const std::vector<double>& components, const Vector& lb, const Vector& ub) {
  const auto n = static_cast<Eigen::Index>(components.size());
  require_size(lb, n, "integrate lower bounds");
  require_size(ub, n, "integrate upper bounds");
  Vector a = Eigen::Map<const Vector>(components.data(), n);
  return a.cwiseMax(lb).cwiseMin(ub);
}

}  // namespace lcrl::agents
