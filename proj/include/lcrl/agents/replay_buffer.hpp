#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "lcrl/numerics/dense.hpp"

namespace lcrl::agents {

struct Transition {
  Vector state;
  Vector action;
  double reward = 0.0;
  Vector next_state;
  bool done = false;
};

/// Minibatch with one transition per column.
struct Batch {
  Matrix states;
  Matrix actions;
  Vector rewards;
  Matrix next_states;
  Vector dones;  // 1.0 for terminal transitions

  Eigen::Index size() const { return states.cols(); }
};

/// Fixed-capacity ring of transitions with seeded uniform sampling.
class ReplayBuffer {
 public:
  ReplayBuffer(std::size_t capacity, int state_dim, int action_dim, std::uint64_t seed);

  void add(const Transition& t);
  std::size_t size() const { return size_; }
  std::size_t capacity() const { return capacity_; }

  std::vector<std::size_t> sample_indices(std::size_t batch_size);
  Batch sample(std::size_t batch_size);
  Batch gather(const std::vector<std::size_t>& indices) const;
  Transition at(std::size_t index) const;

 private:
  std::size_t capacity_;
  int state_dim_;
  int action_dim_;
  std::size_t size_ = 0;
  std::size_t cursor_ = 0;
  Matrix states_;
  Matrix actions_;
  Vector rewards_;
  Matrix next_states_;
  Vector dones_;
  std::mt19937_64 rng_;
};

}  // namespace lcrl::agents
