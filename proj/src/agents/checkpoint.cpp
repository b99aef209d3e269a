#include "lcrl/agents/checkpoint.hpp"

#include <stdexcept>

#include "lcrl/attribution/export.hpp"

namespace lcrl::agents {

nlohmann::json mlp_to_json(const Mlp& net) {
  nlohmann::json j{{"layer_sizes", net.layer_sizes()},
                   {"output", net.output_activation() == OutputActivation::kLinear ? "linear" : "boxed_tanh"},
                   {"params", vector_to_json(net.parameters())}};
  if (net.output_activation() == OutputActivation::kBoxedTanh) {
    j["out_lb"] = vector_to_json(net.out_lb());
    j["out_ub"] = vector_to_json(net.out_ub());
  }
  return j;
}

Mlp mlp_from_json(const nlohmann::json& j) {
  const auto sizes = j.at("layer_sizes").get<std::vector<int>>();
  const auto output = j.at("output").get<std::string>();
  Mlp net;
  if (output == "linear") {
    net = Mlp::linear(sizes);
  } else if (output == "boxed_tanh") {
    net = Mlp::boxed(sizes, vector_from_json(j.at("out_lb")), vector_from_json(j.at("out_ub")));
  } else {
    throw std::invalid_argument("checkpoint: unknown output activation '" + output + "'");
  }
  const Vector params = vector_from_json(j.at("params"));
  if (static_cast<std::size_t>(params.size()) != net.parameter_count()) {
    throw DimensionError("checkpoint: parameter count does not match layer sizes");
  }
  net.set_parameters(params);
  return net;
}

nlohmann::json actor_to_json(const Actor& actor) {
  nlohmann::json nets = nlohmann::json::array();
  for (const Mlp* net : actor.networks()) nets.push_back(mlp_to_json(*net));
  nlohmann::json j{{"kind", to_string(actor.kind())},
                   {"state_dim", actor.state_dim()},
                   {"action_lb", vector_to_json(actor.lb())},
                   {"action_ub", vector_to_json(actor.ub())},
                   {"networks", nets}};
  if (const auto* local = dynamic_cast<const LocalActor*>(&actor)) {
    j["graph"] = attribution::graph_to_json(local->graph());
  }
  return j;
}

namespace {

std::vector<int> hidden_of(const Mlp& net) {
  const auto& sizes = net.layer_sizes();
  return {sizes.begin() + 1, sizes.end() - 1};
}

void copy_parameters(Actor& actor, const std::vector<Mlp>& nets) {
  auto targets = actor.networks();
  if (targets.size() != nets.size()) throw DimensionError("checkpoint: network count does not match actor");
  for (std::size_t k = 0; k < nets.size(); ++k) {
    if (targets[k]->layer_sizes() != nets[k].layer_sizes()) {
      throw DimensionError("checkpoint: layer sizes do not match the actor architecture");
    }
    targets[k]->set_parameters(nets[k].parameters());
  }
}

}  // namespace

std::unique_ptr<Actor> actor_from_json(const nlohmann::json& j) {
  const ActorKind kind = actor_kind_from_string(j.at("kind").get<std::string>());
  const int state_dim = j.at("state_dim").get<int>();
  const Vector lb = vector_from_json(j.at("action_lb"));
  const Vector ub = vector_from_json(j.at("action_ub"));
  std::vector<Mlp> nets;
  for (const auto& n : j.at("networks")) nets.push_back(mlp_from_json(n));
  std::mt19937_64 unused(0);
  std::unique_ptr<Actor> actor;
  switch (kind) {
    case ActorKind::kConstant: return std::make_unique<ConstantActor>(state_dim, lb, ub);
    case ActorKind::kGlobal:
      if (nets.size() != 1) throw DimensionError("checkpoint: global actor needs exactly one network");
      actor = std::make_unique<GlobalActor>(state_dim, lb, ub, hidden_of(nets[0]), unused);
      break;
    case ActorKind::kLocal: {
      if (nets.empty()) throw DimensionError("checkpoint: local actor has no networks");
      const auto graph = attribution::graph_from_json(j.at("graph"));
      actor = std::make_unique<LocalActor>(state_dim, lb, ub, graph, hidden_of(nets[0]), unused);
      break;
    }
  }
  copy_parameters(*actor, nets);
  return actor;
}

nlohmann::json checkpoint_to_json(const DdpgAgent& agent, const std::optional<std::string>& config_hash) {
  nlohmann::json j{{"schema_version", kCheckpointSchemaVersion},
                   {"agent", to_string(agent.actor().kind())},
                   {"actor", actor_to_json(agent.actor())},
                   {"target_actor", actor_to_json(agent.target_actor())},
                   {"critic", mlp_to_json(agent.critic())},
                   {"target_critic", mlp_to_json(agent.target_critic())}};
  if (config_hash) j["config_hash"] = *config_hash;
  return j;
}

nlohmann::json constant_checkpoint_json(const Actor& actor, const std::optional<std::string>& config_hash) {
  nlohmann::json j{{"schema_version", kCheckpointSchemaVersion},
                   {"agent", to_string(actor.kind())},
                   {"actor", actor_to_json(actor)}};
  if (config_hash) j["config_hash"] = *config_hash;
  return j;
}

std::unique_ptr<Actor> load_policy(const nlohmann::json& checkpoint) {
  const int version = checkpoint.at("schema_version").get<int>();
  if (version != kCheckpointSchemaVersion) {
    throw std::invalid_argument("checkpoint: unsupported schema_version " + std::to_string(version));
  }
  return actor_from_json(checkpoint.at("actor"));
}

DdpgAgent load_agent(const nlohmann::json& checkpoint, const DdpgConfig& config, std::uint64_t seed) {
  auto actor = load_policy(checkpoint);
  if (actor->kind() == ActorKind::kConstant) throw std::invalid_argument("checkpoint: constant controller has no agent");
  auto target = actor_from_json(checkpoint.at("target_actor"));
  const Mlp critic = mlp_from_json(checkpoint.at("critic"));
  const Mlp target_critic = mlp_from_json(checkpoint.at("target_critic"));
  DdpgConfig cfg = config;
  cfg.critic_hidden = hidden_of(critic);
  DdpgAgent agent(actor->clone(), cfg, seed);
  agent.set_networks(*actor, critic, *target, target_critic);
  return agent;
}

}  // namespace lcrl::agents
