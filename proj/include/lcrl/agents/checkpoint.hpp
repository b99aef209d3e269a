#pragma once

#include <memory>
#include <optional>
#include <string>

#include <json.hpp>

#include "lcrl/agents/ddpg.hpp"

namespace lcrl::agents {

inline constexpr int kCheckpointSchemaVersion = 1;

nlohmann::json mlp_to_json(const Mlp& net);
Mlp mlp_from_json(const nlohmann::json& j);

nlohmann::json actor_to_json(const Actor& actor);
std::unique_ptr<Actor> actor_from_json(const nlohmann::json& j);

/// Layer sizes plus flat parameter arrays for actor, critic and both targets.
nlohmann::json checkpoint_to_json(const DdpgAgent& agent, const std::optional<std::string>& config_hash = std::nullopt);
/// Constant controllers carry no networks.
nlohmann::json constant_checkpoint_json(const Actor& actor, const std::optional<std::string>& config_hash = std::nullopt);

/// The online actor stored in a checkpoint.
std::unique_ptr<Actor> load_policy(const nlohmann::json& checkpoint);
/// Full agent (networks and targets; optimizer moments start fresh).
DdpgAgent load_agent(const nlohmann::json& checkpoint, const DdpgConfig& config, std::uint64_t seed);

}  // namespace lcrl::agents
