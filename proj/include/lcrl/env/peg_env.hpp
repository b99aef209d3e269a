#pragma once

#include <array>
#include <random>

#include <json.hpp>

#include "lcrl/env/environment.hpp"

namespace lcrl::env {

// Pose components: x, y, z (mm) and alpha, beta, gamma (deg).
// Wrench components: Fx, Fy, Fz, Mx, My, Mz.
using Vec6 = Eigen::Matrix<double, 6, 1>;

enum class DepthPenalty {
  kProgress,   // 1 - (per-step advance / planned advance): penalizes falling behind the plan
  kRemaining,  // (L - z) / L: penalizes remaining distance to target depth
};

/// Quasi-static square peg-in-hole surrogate under adaptive compliance control.
struct PegParams {
  double clearance = 0.05;
  double tip_offset = 0.05;  // L_tip: lateral tip travel per unit rotation command
  double k_force = 1.0;
  double k_moment = 0.5;
  double k_jam_force = 0.5;
  double k_torsion = 1.0;
  double jam_factor = 0.5;
  double sensor_noise = 0.01;

  double target_depth = 30.0;
  int insertion_steps = 50;  // planned advance per step = target_depth / insertion_steps

  Vec6 compliance = (Vec6() << 5e-3, 5e-3, 5e-5, 1e-3, 1e-3, 1e-3).finished();
  // Converts compliance-controller output into pose increments per axis.
  Vec6 kinematic_scale = (Vec6() << 1.0, 1.0, 1000.0, 10.0, 10.0, 10.0).finished();
  Vec6 reference_wrench = Vec6::Zero();

  Vec6 init_range = (Vec6() << 0.2, 0.2, 0.2, 0.5, 0.5, 0.5).finished();
  Vec6 action_lb = (Vec6() << -1, -1, -1, -1, -1, -1).finished();
  Vec6 action_ub = (Vec6() << 2, 2, 2, 4, 4, 4).finished();

  double h_z = 1.0;
  double h_f = 0.1;
  double h_m = 1.0;
  double r_s = 2.0;
  DepthPenalty depth_penalty = DepthPenalty::kProgress;
  double force_limit = 5.0;  // on the normalized wrench infinity norm

  int max_steps = 80;

  // Pose scales (5x init range, z by target depth) then wrench scales (10x typical contact).
  Eigen::Matrix<double, 12, 1> state_scale =
      (Eigen::Matrix<double, 12, 1>() << 1.0, 1.0, 30.0, 2.5, 2.5, 2.5, 1.5, 1.5, 1.5, 0.75, 0.75, 5.0)
          .finished();

  void validate() const;
  Vec6 planned_advance() const;
};

void to_json(nlohmann::json& j, const PegParams& p);
// Missing keys keep their defaults; unknown keys are rejected.
void from_json(const nlohmann::json& j, PegParams& p);

/// Contact wrench at a pose, without sensor noise.
Vec6 contact_wrench(const PegParams& params, const Vec6& pose);

/// Translational penetration used to slow insertion.
double jam_level(const PegParams& params, const Vec6& pose);

class PegEnv final : public Environment {
 public:
  static constexpr std::string_view kKind = "peg";
  static constexpr int kStateDim = 12;
  static constexpr int kActionDim = 6;

  explicit PegEnv(PegParams params = {});

  std::string_view kind() const override { return kKind; }
  const EnvSpec& spec() const override { return spec_; }
  Vector default_init_range() const override { return params_.init_range; }

  /// Pose drawn uniformly within +-init_range (z starts at 0).
  Vector reset(std::uint64_t seed, const Vector& init_range) override;
  using Environment::reset;
  /// Starts from an exact pose error (z forced to 0).
  Vector reset_to_pose(std::uint64_t seed, const Vec6& pose);

  StepResult step(const Vector& action) override;
  Vector observe() const override;

  Snapshot snapshot() const override;
  void restore(const Snapshot& token) override;
  std::unique_ptr<Environment> clone() const override { return std::make_unique<PegEnv>(*this); }

  const PegParams& params() const { return params_; }
  const Vec6& pose() const { return pose_; }
  const Vec6& true_wrench() const { return wrench_; }
  const Vec6& measured_wrench() const { return measured_; }
  /// Diagonal of K = diag(a * K_hat) + K_hat used by the last step.
  const Vec6& last_gains() const { return gains_; }
  int steps() const { return steps_; }
  bool done() const { return done_; }

 private:
  struct State {
    Vec6 pose, wrench, measured, gains;
    std::mt19937_64 rng;
    int steps;
    bool done;
    bool within_limit;
  };

  void sense();
  double wrench_inf_norm_normalized() const;

  PegParams params_;
  EnvSpec spec_;
  Vec6 pose_ = Vec6::Zero();
  Vec6 wrench_ = Vec6::Zero();
  Vec6 measured_ = Vec6::Zero();
  Vec6 gains_ = Vec6::Zero();
  std::mt19937_64 rng_;
  int steps_ = 0;
  bool done_ = false;
  bool within_limit_ = true;
};

}  // namespace lcrl::env
