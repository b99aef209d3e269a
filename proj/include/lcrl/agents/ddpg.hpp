#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <vector>

#include "lcrl/agents/actor.hpp"
#include "lcrl/agents/replay_buffer.hpp"
#include "lcrl/numerics/adam.hpp"

namespace lcrl::agents {

struct DdpgConfig {
  double gamma = 0.99;
  double tau = 1e-3;
  double actor_lr = 1e-3;
  double critic_lr = 1e-2;
  int batch_size = 64;
  std::size_t buffer_capacity = 100000;
  std::vector<int> global_hidden{64, 64};
  std::vector<int> local_hidden{32, 32};
  std::vector<int> critic_hidden{64, 64};
  double exploration_fraction = 0.2;  // initial sigma = fraction * (ub - lb) / 2
  double exploration_decay = 0.995;   // per episode
};

struct Losses {
  double critic = 0.0;
  double actor = 0.0;
};

/// Actor-critic agent with target networks. The critic always reads the full
/// (state, action) pair; only the actor architecture varies.
class DdpgAgent {
 public:
  DdpgAgent(std::unique_ptr<Actor> actor, DdpgConfig config, std::uint64_t seed);
  DdpgAgent(const DdpgAgent& other);
  DdpgAgent& operator=(const DdpgAgent&) = delete;

  const Actor& actor() const { return *actor_; }
  const Actor& target_actor() const { return *target_actor_; }
  Actor& actor() { return *actor_; }
  const Mlp& critic() const { return critic_; }
  Mlp& critic() { return critic_; }
  const Mlp& target_critic() const { return target_critic_; }
  const DdpgConfig& config() const { return config_; }

  /// Policy output plus per-component Gaussian noise, clamped to the box.
  Vector select_action(const Vector& state, bool explore);
  double exploration_sigma_scale() const { return noise_scale_; }
  /// Decays the exploration scale by the configured factor.
  void end_episode();

  Vector q_values(const Matrix& states, const Matrix& actions) const;

  /// One critic step, one actor step, then a soft target update.
  /// Throws DivergenceError on a non-finite loss.
  Losses update(const Batch& batch);

  /// theta_target <- tau * theta + (1 - tau) * theta_target for all networks.
  void soft_update(double tau);

  void set_networks(const Actor& actor, const Mlp& critic, const Actor& target_actor, const Mlp& target_critic);

 private:
  std::unique_ptr<Actor> actor_;
  std::unique_ptr<Actor> target_actor_;
  Mlp critic_;
  Mlp target_critic_;
  DdpgConfig config_;
  std::vector<Adam> actor_opt_;
  Adam critic_opt_;
  std::mt19937_64 noise_rng_;
  double noise_scale_ = 1.0;
};

/// Builds the actor for the requested architecture; `graph` is required for kLocal.
std::unique_ptr<Actor> make_actor(ActorKind kind, int state_dim, const Vector& lb, const Vector& ub,
                                  const DdpgConfig& config, const attribution::ConnectionGraph* graph,
                                  std::mt19937_64& rng);

}  // namespace lcrl::agents
