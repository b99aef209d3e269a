#pragma once

#include <cstdint>
#include <string>

#include "lcrl/env/environment.hpp"

namespace lcrl::attribution {

enum class Cs3Mode {
  kResample,    // a fresh a2 at every step
  kHoldAction,  // one a2 per trajectory
};

std::string to_string(Cs3Mode mode);
Cs3Mode cs3_mode_from_string(const std::string& text);

struct Cs3Options {
  int sampling_times = 200;
  int horizon = 0;  // 0 -> state dimension
  Cs3Mode mode = Cs3Mode::kResample;
  double subset_probability = 0.5;
  std::uint64_t seed = 0;
  int threads = 1;
  // Mixed into the stream that draws the background subset and a1 only.
  std::uint64_t background_salt = 0;
};

/// phi(i, j): mean over repeats of sum_t |s_j^A(t+1) - s_j^B(t+1)|.
struct Cs3Matrix {
  Matrix phi;  // n x m, one row per action component
  int sampling_times = 0;
  int horizon = 0;
  Cs3Mode mode = Cs3Mode::kResample;
  double subset_probability = 0.5;
};

/// Paired-rollout estimate over every (action, state) pair.
///
/// Each repeat resets a clone of `env`, draws a random subset of the other
/// action components, then steps two copies of the reset clone: copy A with
/// a1 + a2, copy B with a1 alone, where a1 lives on the subset and a2 on
/// component i. Both copies carry the same noise generator state, so the
/// difference reflects only the action component. Repeats are seeded
/// individually and summed in index order, so the result does not depend on
/// `threads`.
Cs3Matrix estimate_cs3(const env::Environment& env, const Cs3Options& options);

/// Contribution of one repeat (row i, repeat index st) to phi.
Vector cs3_repeat(const env::Environment& env, int action, int repeat, const Cs3Options& options);

}  // namespace lcrl::attribution
