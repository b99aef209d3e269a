#include "lcrl/attribution/export.hpp"

#include <sstream>
#include <stdexcept>

namespace lcrl::attribution {

std::vector<std::string> default_labels(const std::string& prefix, int count) {
  std::vector<std::string> out;
  for (int k = 1; k <= count; ++k) out.push_back(prefix + std::to_string(k));
  return out;
}

std::vector<std::string> peg_state_labels() {
  return {"x", "y", "z", "alpha", "beta", "gamma", "Fx", "Fy", "Fz", "Mx", "My", "Mz"};
}

std::vector<std::string> peg_action_labels() {
  return {"dx", "dy", "dz", "dalpha", "dbeta", "dgamma"};
}

namespace {

template <typename Mat, typename Fmt>
std::string table_csv(const Mat& values, const MatrixLabels& labels, const std::optional<std::string>& hash,
                      Fmt fmt) {
  const auto rows = labels.rows.empty() ? default_labels("a", static_cast<int>(values.rows())) : labels.rows;
  const auto cols = labels.cols.empty() ? default_labels("s", static_cast<int>(values.cols())) : labels.cols;
  if (static_cast<Eigen::Index>(rows.size()) != values.rows() ||
      static_cast<Eigen::Index>(cols.size()) != values.cols()) {
    throw DimensionError("csv labels do not match matrix shape");
  }
  std::ostringstream out;
  if (hash) out << "# config_hash=" << *hash << '\n';
  out << "action";
  for (const auto& c : cols) out << ',' << c;
  out << '\n';
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    out << rows[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < values.cols(); ++j) out << ',' << fmt(values(i, j));
    out << '\n';
  }
  return out.str();
}

}  // namespace

std::string matrix_to_csv(const Matrix& values, const MatrixLabels& labels,
                          const std::optional<std::string>& config_hash) {
  return table_csv(values, labels, config_hash, [](double v) { return format_double(v); });
}

std::string graph_to_csv(const ConnectionGraph& graph, const MatrixLabels& labels,
                         const std::optional<std::string>& config_hash) {
  return table_csv(graph.G, labels, config_hash, [](int v) { return std::to_string(v); });
}

nlohmann::json cs3_to_json(const Cs3Matrix& cs3) {
  return {{"phi", matrix_to_json(cs3.phi)},
          {"sampling_times", cs3.sampling_times},
          {"horizon", cs3.horizon},
          {"mode", to_string(cs3.mode)},
          {"subset_probability", cs3.subset_probability}};
}

Cs3Matrix cs3_from_json(const nlohmann::json& j) {
  Cs3Matrix out;
  out.phi = matrix_from_json(j.at("phi"));
  out.sampling_times = j.at("sampling_times").get<int>();
  out.horizon = j.at("horizon").get<int>();
  out.mode = cs3_mode_from_string(j.at("mode").get<std::string>());
  out.subset_probability = j.value("subset_probability", 0.5);
  return out;
}

nlohmann::json graph_to_json(const ConnectionGraph& graph) {
  return {{"G", int_matrix_to_json(graph.G)},
          {"threshold", graph.threshold},
          {"source", to_string(graph.source)},
          {"zero_columns", graph.zero_columns}};
}

ConnectionGraph graph_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("G")) throw std::invalid_argument("graph json: missing field 'G'");
  ConnectionGraph g;
  g.G = int_matrix_from_json(j.at("G"));
  g.threshold = j.value("threshold", 0.1);
  g.source = graph_source_from_string(j.value("source", std::string("file")));
  g.zero_columns = j.value("zero_columns", std::vector<int>{});
  g.validate();
  return g;
}

}  // namespace lcrl::attribution
