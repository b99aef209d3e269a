#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "lcrl/env/lti_env.hpp"
#include "lcrl/env/peg_env.hpp"

namespace lcrl::env {

// Peg presets: "sim-group1", "sim-group2", "experiment-table3".
// LTI presets: "lti-coupled3" (alias "paper-eq10"), "lti-identity3".
std::vector<std::string> preset_names();
bool is_peg_preset(const std::string& name);
bool is_lti_preset(const std::string& name);

PegParams peg_preset(const std::string& name);
LtiParams lti_preset(const std::string& name);

/// Random sparse system with entries in [0.1, 1] placed with the given density.
LtiParams random_sparse_lti(int m, int n, double density, std::uint64_t seed);

std::unique_ptr<Environment> make_environment(const std::string& preset);

}  // namespace lcrl::env
