#pragma once

#include <string>
#include <vector>

#include "lcrl/attribution/cs3.hpp"

namespace lcrl::attribution {

enum class GraphSource { kEmpirical, kAnalytic, kFile };

std::string to_string(GraphSource source);
GraphSource graph_source_from_string(const std::string& text);

/// Binary n x m mask; row i lists the state components action component i reads.
struct ConnectionGraph {
  IntMatrix G;
  double threshold = 0.1;
  GraphSource source = GraphSource::kEmpirical;
  // State columns that no action component reaches (all-zero phi or H column).
  std::vector<int> zero_columns;

  int action_dim() const { return static_cast<int>(G.rows()); }
  int state_dim() const { return static_cast<int>(G.cols()); }
  std::vector<int> inputs_of(int action) const;
  bool same_pattern(const ConnectionGraph& other) const { return G == other.G; }
  void validate() const;

  static ConnectionGraph full(int action_dim, int state_dim);
};

/// G(i, j) = 1 iff phi(i, j) >= T * mean_k phi(k, j).
ConnectionGraph build_graph(const Matrix& phi, double threshold);
inline ConnectionGraph build_graph(const Cs3Matrix& cs3, double threshold) {
  return build_graph(cs3.phi, threshold);
}

struct NormalizedCs3 {
  Matrix values;
  std::vector<int> zero_columns;
};

/// Divides each column by its maximum; all-zero columns stay zero and are reported.
NormalizedCs3 normalize_cs3(const Matrix& phi);

}  // namespace lcrl::attribution
