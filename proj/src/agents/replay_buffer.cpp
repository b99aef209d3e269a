#include "lcrl/agents/replay_buffer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lcrl::agents {

ReplayBuffer::ReplayBuffer(std::size_t capacity, int state_dim, int action_dim, std::uint64_t seed)
    : capacity_(capacity), state_dim_(state_dim), action_dim_(action_dim), rng_(seed) {
  if (capacity_ == 0) throw std::invalid_argument("replay buffer capacity must be >= 1");
  if (state_dim < 1 || action_dim < 1) throw std::invalid_argument("replay buffer dims must be >= 1");
}

void ReplayBuffer::add(const Transition& t) {
  require_size(t.state, state_dim_, "transition state");
  require_size(t.next_state, state_dim_, "transition next state");
  require_size(t.action, action_dim_, "transition action");
  if (!t.state.allFinite() || !t.next_state.allFinite() || !t.action.allFinite() || !std::isfinite(t.reward)) {
    throw std::invalid_argument("transition has non-finite entries");
  }
  if (states_.cols() == 0) {
    // Grow in chunks so small experiments do not pay for the full capacity.
    const auto initial = static_cast<Eigen::Index>(std::min<std::size_t>(capacity_, 4096));
    states_.resize(state_dim_, initial);
    next_states_.resize(state_dim_, initial);
    actions_.resize(action_dim_, initial);
    rewards_.resize(initial);
    dones_.resize(initial);
  }
  const auto slot = static_cast<Eigen::Index>(cursor_);
  if (slot >= states_.cols()) {
    const auto grown = static_cast<Eigen::Index>(std::min<std::size_t>(capacity_, 2 * states_.cols()));
    states_.conservativeResize(Eigen::NoChange, grown);
    next_states_.conservativeResize(Eigen::NoChange, grown);
    actions_.conservativeResize(Eigen::NoChange, grown);
    rewards_.conservativeResize(grown);
    dones_.conservativeResize(grown);
  }
  states_.col(slot) = t.state;
  actions_.col(slot) = t.action;
  rewards_[slot] = t.reward;
  next_states_.col(slot) = t.next_state;
  dones_[slot] = t.done ? 1.0 : 0.0;
  cursor_ = (cursor_ + 1) % capacity_;
  size_ = std::min(size_ + 1, capacity_);
}

std::vector<std::size_t> ReplayBuffer::sample_indices(std::size_t batch_size) {
  if (size_ == 0) throw std::logic_error("cannot sample from an empty replay buffer");
  std::uniform_int_distribution<std::size_t> pick(0, size_ - 1);
  std::vector<std::size_t> idx(batch_size);
  for (auto& k : idx) k = pick(rng_);
  return idx;
}

Batch ReplayBuffer::sample(std::size_t batch_size) { return gather(sample_indices(batch_size)); }

Batch ReplayBuffer::gather(const std::vector<std::size_t>& indices) const {
  const auto b = static_cast<Eigen::Index>(indices.size());
  Batch out{Matrix(state_dim_, b), Matrix(action_dim_, b), Vector(b), Matrix(state_dim_, b), Vector(b)};
  for (Eigen::Index c = 0; c < b; ++c) {
    const std::size_t k = indices[static_cast<std::size_t>(c)];
    if (k >= size_) throw std::out_of_range("replay index out of range");
    const auto col = static_cast<Eigen::Index>(k);
    out.states.col(c) = states_.col(col);
    out.actions.col(c) = actions_.col(col);
    out.rewards[c] = rewards_[col];
    out.next_states.col(c) = next_states_.col(col);
    out.dones[c] = dones_[col];
  }
  return out;
}

Transition ReplayBuffer::at(std::size_t index) const {
  if (index >= size_) throw std::out_of_range("replay index out of range");
  const auto col = static_cast<Eigen::Index>(index);
  return {states_.col(col), actions_.col(col), rewards_[col], next_states_.col(col), dones_[col] > 0.5};
}

}  // namespace lcrl::agents
