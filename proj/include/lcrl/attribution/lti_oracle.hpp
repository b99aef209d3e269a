#pragma once

#include "lcrl/attribution/graph.hpp"

namespace lcrl::attribution {

inline constexpr double kAnalyticZeroTolerance = 1e-12;

/// H = sum_{t=0}^{m-1} |(E^t + ... + E + I) F|, an m x n matrix.
///
/// H(j, i) is the accumulated influence of action component i on state
/// component j over m steps when a2 is held, so the graph uses its transpose.
Matrix analytic_H(const Matrix& E, const Matrix& F);

/// G(i, j) = 1 iff |H(j, i)| > tolerance.
ConnectionGraph graph_from_H(const Matrix& H, double tolerance = kAnalyticZeroTolerance);

}  // namespace lcrl::attribution
