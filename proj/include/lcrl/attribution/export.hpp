#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lcrl/attribution/graph.hpp"

namespace lcrl::attribution {

// Column labels s1..sm / row labels a1..an when none are supplied.
std::vector<std::string> default_labels(const std::string& prefix, int count);
std::vector<std::string> peg_state_labels();
std::vector<std::string> peg_action_labels();

struct MatrixLabels {
  std::vector<std::string> rows;
  std::vector<std::string> cols;
};

/// CSV with a leading "# config_hash=..." line when a hash is given, a header
/// row of state labels and one row per action component.
std::string matrix_to_csv(const Matrix& values, const MatrixLabels& labels,
                          const std::optional<std::string>& config_hash = std::nullopt);
std::string graph_to_csv(const ConnectionGraph& graph, const MatrixLabels& labels,
                         const std::optional<std::string>& config_hash = std::nullopt);

nlohmann::json cs3_to_json(const Cs3Matrix& cs3);
Cs3Matrix cs3_from_json(const nlohmann::json& j);

nlohmann::json graph_to_json(const ConnectionGraph& graph);
ConnectionGraph graph_from_json(const nlohmann::json& j);

}  // namespace lcrl::attribution
