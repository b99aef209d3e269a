#pragma once

#include <any>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>

#include "lcrl/numerics/dense.hpp"

namespace lcrl::env {

struct EnvSpec {
  int state_dim = 0;
  int action_dim = 0;
  Vector action_lb;
  Vector action_ub;
  Vector state_scale;  // observed state = raw state / state_scale
  int max_steps = 0;

  void validate() const;
};

struct StepResult {
  Vector state;
  double reward = 0.0;
  bool done = false;
  bool success = false;
  bool truncated = false;  // ended by the step budget rather than the task
};

/// Opaque copy of an environment's full internal state, including its noise generator.
class Snapshot {
 public:
  Snapshot() = default;
  Snapshot(std::string kind, std::any payload) : kind_(std::move(kind)), payload_(std::move(payload)) {}

  const std::string& kind() const { return kind_; }
  bool empty() const { return !payload_.has_value(); }

  template <typename T>
  const T& as(std::string_view expected_kind) const {
    if (kind_ != expected_kind) {
      throw std::invalid_argument("snapshot of kind '" + kind_ + "' cannot restore a '" +
                                  std::string(expected_kind) + "' environment");
    }
    return std::any_cast<const T&>(payload_);
  }

 private:
  std::string kind_;
  std::any payload_;
};

class Environment {
 public:
  virtual ~Environment() = default;

  virtual std::string_view kind() const = 0;
  virtual const EnvSpec& spec() const = 0;

  /// Default half-widths of the initial-state box.
  virtual Vector default_init_range() const = 0;

  /// Draws an initial state uniformly within +-init_range and reseeds the noise stream.
  virtual Vector reset(std::uint64_t seed, const Vector& init_range) = 0;
  Vector reset(std::uint64_t seed) { return reset(seed, default_init_range()); }

  /// Advances one control step. The action must lie inside the action box.
  virtual StepResult step(const Vector& action) = 0;

  /// Current normalized observation.
  virtual Vector observe() const = 0;

  virtual Snapshot snapshot() const = 0;
  virtual void restore(const Snapshot& token) = 0;
  virtual std::unique_ptr<Environment> clone() const = 0;

 protected:
  void check_action(const Vector& action) const;
};

// Splits one seed into statistically independent child seeds (splitmix64).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace lcrl::env
