#include "lcrl/agents/ddpg.hpp"

#include <cmath>
#include <stdexcept>

namespace lcrl::agents {
namespace {

std::vector<int> critic_sizes(int in, const std::vector<int>& hidden) {
  std::vector<int> sizes{in};
  sizes.insert(sizes.end(), hidden.begin(), hidden.end());
  sizes.push_back(1);
  return sizes;
}

Matrix stack(const Matrix& top, const Matrix& bottom) {
  Matrix out(top.rows() + bottom.rows(), top.cols());
  out << top, bottom;
  return out;
}

void blend(Vector& target, const Vector& online, double tau) { target = tau * online + (1.0 - tau) * target; }

}  // namespace

DdpgAgent::DdpgAgent(std::unique_ptr<Actor> actor, DdpgConfig config, std::uint64_t seed)
    : actor_(std::move(actor)), config_(std::move(config)), noise_rng_(seed) {
  if (!actor_) throw std::invalid_argument("ddpg needs an actor");
  if (!(config_.tau > 0.0 && config_.tau <= 1.0)) throw std::invalid_argument("ddpg: tau must be in (0, 1]");
  if (!(config_.gamma >= 0.0 && config_.gamma < 1.0)) throw std::invalid_argument("ddpg: gamma must be in [0, 1)");
  if (config_.batch_size < 1) throw std::invalid_argument("ddpg: batch_size must be >= 1");
  std::mt19937_64 init_rng(seed ^ 0xc2b2ae3d27d4eb4fULL);
  critic_ = Mlp::linear(critic_sizes(actor_->state_dim() + actor_->action_dim(), config_.critic_hidden));
  critic_.initialize(init_rng);
  target_actor_ = actor_->clone();
  target_critic_ = critic_;
  for (const Mlp* net : actor_->networks()) {
    actor_opt_.emplace_back(static_cast<Eigen::Index>(net->parameter_count()), AdamConfig{config_.actor_lr});
  }
  critic_opt_ = Adam(static_cast<Eigen::Index>(critic_.parameter_count()), AdamConfig{config_.critic_lr});
}

DdpgAgent::DdpgAgent(const DdpgAgent& other)
    : actor_(other.actor_->clone()),
      target_actor_(other.target_actor_->clone()),
      critic_(other.critic_),
      target_critic_(other.target_critic_),
      config_(other.config_),
      actor_opt_(other.actor_opt_),
      critic_opt_(other.critic_opt_),
      noise_rng_(other.noise_rng_),
      noise_scale_(other.noise_scale_) {}

Vector DdpgAgent::select_action(const Vector& state, bool explore) {
  Vector a = actor_->act(state);
  if (!explore) return a;
  const Vector& lb = actor_->lb();
  const Vector& ub = actor_->ub();
  std::normal_distribution<double> unit(0.0, 1.0);
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const double sigma = config_.exploration_fraction * 0.5 * (ub[i] - lb[i]) * noise_scale_;
    a[i] += sigma * unit(noise_rng_);
  }
  return a.cwiseMax(lb).cwiseMin(ub);
}

void DdpgAgent::end_episode() { noise_scale_ *= config_.exploration_decay; }

Vector DdpgAgent::q_values(const Matrix& states, const Matrix& actions) const {
  return critic_.forward(stack(states, actions), nullptr).row(0).transpose();
}

Losses DdpgAgent::update(const Batch& batch) {
  const Eigen::Index b = batch.size();
  if (b == 0) throw std::invalid_argument("ddpg update needs a non-empty batch");
  const double inv_b = 1.0 / static_cast<double>(b);

  // Critic: regress Q(s, a) toward r + gamma (1 - done) Q'(s', pi'(s')).
  const Matrix next_actions = target_actor_->act_batch(batch.next_states, nullptr);
  const Matrix next_q = target_critic_.forward(stack(batch.next_states, next_actions), nullptr);
  const Vector target = batch.rewards.array() + config_.gamma * (1.0 - batch.dones.array()) * next_q.row(0).transpose().array();

  MlpTape critic_tape;
  const Matrix q = critic_.forward(stack(batch.states, batch.actions), &critic_tape);
  const Matrix residual = q - target.transpose();
  Losses losses;
  losses.critic = residual.squaredNorm() * inv_b;
  if (!std::isfinite(losses.critic)) throw DivergenceError("critic loss is not finite");
  Vector critic_grad = Vector::Zero(static_cast<Eigen::Index>(critic_.parameter_count()));
  critic_.backward(critic_tape, 2.0 * inv_b * residual, &critic_grad);
  critic_opt_.step(critic_.parameters(), critic_grad);

  // Actor: ascend Q(s, pi(s)); the critic only supplies dQ/da here.
  ActorTape actor_tape;
  const Matrix policy_actions = actor_->act_batch(batch.states, &actor_tape);
  MlpTape q_tape;
  const Matrix q_pi = critic_.forward(stack(batch.states, policy_actions), &q_tape);
  losses.actor = -q_pi.sum() * inv_b;
  if (!std::isfinite(losses.actor)) throw DivergenceError("actor loss is not finite");
  const Matrix input_grad = critic_.backward(q_tape, Matrix::Constant(1, b, -inv_b), nullptr);
  const Matrix action_grad = input_grad.bottomRows(actor_->action_dim());

  auto nets = actor_->networks();
  std::vector<Vector> grads;
  for (const Mlp* net : nets) grads.push_back(Vector::Zero(static_cast<Eigen::Index>(net->parameter_count())));
  actor_->backward(actor_tape, action_grad, grads);
  for (std::size_t k = 0; k < nets.size(); ++k) actor_opt_[k].step(nets[k]->parameters(), grads[k]);

  soft_update(config_.tau);
  return losses;
}

void DdpgAgent::soft_update(double tau) {
  auto online = actor_->networks();
  auto target = target_actor_->networks();
  for (std::size_t k = 0; k < online.size(); ++k) blend(target[k]->parameters(), online[k]->parameters(), tau);
  blend(target_critic_.parameters(), critic_.parameters(), tau);
}

void DdpgAgent::set_networks(const Actor& actor, const Mlp& critic, const Actor& target_actor,
                             const Mlp& target_critic) {
  if (actor.parameter_count() != actor_->parameter_count() || critic.parameter_count() != critic_.parameter_count()) {
    throw DimensionError("ddpg: replacement networks have a different architecture");
  }
  actor_ = actor.clone();
  target_actor_ = target_actor.clone();
  critic_ = critic;
  target_critic_ = target_critic;
}

std::unique_ptr<Actor> make_actor(ActorKind kind, int state_dim, const Vector& lb, const Vector& ub,
                                  const DdpgConfig& config, const attribution::ConnectionGraph* graph,
                                  std::mt19937_64& rng) {
  switch (kind) {
    case ActorKind::kGlobal: return std::make_unique<GlobalActor>(state_dim, lb, ub, config.global_hidden, rng);
    case ActorKind::kLocal:
      if (!graph) throw std::invalid_argument("lcrl actor needs a connection graph");
      return std::make_unique<LocalActor>(state_dim, lb, ub, *graph, config.local_hidden, rng);
    case ActorKind::kConstant: return std::make_unique<ConstantActor>(state_dim, lb, ub);
  }
  throw std::invalid_argument("unknown actor kind");
}

}  // namespace lcrl::agents
