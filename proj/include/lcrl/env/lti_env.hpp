#pragma once

#include <random>

#include "lcrl/env/environment.hpp"

namespace lcrl::env {

struct LtiParams {
  Matrix E;  // m x m
  Matrix F;  // m x n
  double noise_std = 0.0;
  Vector init_range;  // empty -> ones
  Vector action_lb;   // empty -> -1
  Vector action_ub;   // empty -> +1
  int max_steps = 50;
};

/// s' = E s + F a (+ optional Gaussian process noise), reward -||s'||.
class LtiEnv final : public Environment {
 public:
  static constexpr std::string_view kKind = "lti";

  explicit LtiEnv(LtiParams params);

  std::string_view kind() const override { return kKind; }
  const EnvSpec& spec() const override { return spec_; }
  Vector default_init_range() const override { return params_.init_range; }

  Vector reset(std::uint64_t seed, const Vector& init_range) override;
  using Environment::reset;
  StepResult step(const Vector& action) override;
  Vector observe() const override { return state_; }

  Snapshot snapshot() const override;
  void restore(const Snapshot& token) override;
  std::unique_ptr<Environment> clone() const override { return std::make_unique<LtiEnv>(*this); }

  const LtiParams& params() const { return params_; }
  const Vector& state() const { return state_; }
  void set_state(const Vector& s);

 private:
  struct State {
    Vector state;
    std::mt19937_64 rng;
    int steps;
    bool done;
  };

  LtiParams params_;
  EnvSpec spec_;
  Vector state_;
  std::mt19937_64 rng_;
  int steps_ = 0;
  bool done_ = false;
};

}  // namespace lcrl::env
