#include "lcrl/attribution/graph.hpp"

#include <stdexcept>

namespace lcrl::attribution {

std::string to_string(GraphSource source) {
  switch (source) {
    case GraphSource::kEmpirical: return "empirical";
    case GraphSource::kAnalytic: return "analytic";
    case GraphSource::kFile: return "file";
  }
  return "empirical";
}

GraphSource graph_source_from_string(const std::string& text) {
  if (text == "empirical") return GraphSource::kEmpirical;
  if (text == "analytic") return GraphSource::kAnalytic;
  if (text == "file") return GraphSource::kFile;
  throw std::invalid_argument("graph source must be empirical, analytic or file, got '" + text + "'");
}

std::vector<int> ConnectionGraph::inputs_of(int action) const {
  if (action < 0 || action >= action_dim()) throw std::out_of_range("graph row out of range");
  std::vector<int> cols;
  for (int j = 0; j < state_dim(); ++j) {
    if (G(action, j) != 0) cols.push_back(j);
  }
  return cols;
}

void ConnectionGraph::validate() const {
  if (G.size() == 0) throw std::invalid_argument("connection graph is empty");
  if (!((G.array() == 0) || (G.array() == 1)).all()) {
    throw std::invalid_argument("connection graph entries must be 0 or 1");
  }
}

ConnectionGraph ConnectionGraph::full(int action_dim, int state_dim) {
  ConnectionGraph g;
  g.G = IntMatrix::Ones(action_dim, state_dim);
  g.threshold = 0.0;
  g.source = GraphSource::kFile;
  return g;
}

ConnectionGraph build_graph(const Matrix& phi, double threshold) {
  if (!(threshold > 0.0)) throw std::invalid_argument("build_graph: threshold must be > 0");
  if (phi.size() == 0) throw DimensionError("build_graph: empty phi");
  if (!phi.allFinite() || (phi.array() < 0.0).any()) {
    throw std::invalid_argument("build_graph: phi must be finite and nonnegative");
  }
  const Eigen::Index n = phi.rows();
  ConnectionGraph g;
  g.G = IntMatrix::Zero(n, phi.cols());
  g.threshold = threshold;
  g.source = GraphSource::kEmpirical;
  for (Eigen::Index j = 0; j < phi.cols(); ++j) {
    const double column_sum = phi.col(j).sum();
    if (column_sum == 0.0) {
      g.zero_columns.push_back(static_cast<int>(j));
      continue;
    }
    const double cut = threshold * (column_sum / static_cast<double>(n));
    for (Eigen::Index i = 0; i < n; ++i) g.G(i, j) = phi(i, j) >= cut ? 1 : 0;
  }
  return g;
}

NormalizedCs3 normalize_cs3(const Matrix& phi) {
  NormalizedCs3 out;
  out.values = Matrix::Zero(phi.rows(), phi.cols());
  for (Eigen::Index j = 0; j < phi.cols(); ++j) {
    const double peak = phi.col(j).maxCoeff();
    if (peak > 0.0) {
      out.values.col(j) = phi.col(j) / peak;
    } else {
      out.zero_columns.push_back(static_cast<int>(j));
    }
  }
  return out;
}

}  // namespace lcrl::attribution
