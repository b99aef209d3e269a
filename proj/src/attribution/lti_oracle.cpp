#include "lcrl/attribution/lti_oracle.hpp"

#include <string>

namespace lcrl::attribution {

Matrix analytic_H(const Matrix& E, const Matrix& F) {
  const Eigen::Index m = E.rows();
  if (m < 1 || E.cols() != m) throw DimensionError("analytic_H: E must be square");
  if (F.rows() != m) {
    throw DimensionError("analytic_H: F has " + std::to_string(F.rows()) + " rows, E is " + std::to_string(m) +
                         " x " + std::to_string(m));
  }
  Matrix power = Matrix::Identity(m, m);
  Matrix partial = Matrix::Identity(m, m);  // E^t + ... + I
  Matrix H = Matrix::Zero(m, F.cols());
  for (Eigen::Index t = 0; t < m; ++t) {
    if (t > 0) {
      power = E * power;
      partial += power;
    }
    H += (partial * F).cwiseAbs();
  }
  return H;
}

ConnectionGraph graph_from_H(const Matrix& H, double tolerance) {
  ConnectionGraph g;
  g.G = IntMatrix::Zero(H.cols(), H.rows());
  g.threshold = tolerance;
  g.source = GraphSource::kAnalytic;
  for (Eigen::Index j = 0; j < H.rows(); ++j) {
    bool reached = false;
    for (Eigen::Index i = 0; i < H.cols(); ++i) {
      if (std::abs(H(j, i)) > tolerance) {
        g.G(i, j) = 1;
        reached = true;
      }
    }
    if (!reached) g.zero_columns.push_back(static_cast<int>(j));
  }
  return g;
}

}  // namespace lcrl::attribution
