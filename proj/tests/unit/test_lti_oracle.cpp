#include <gtest/gtest.h>

#include "lcrl/attribution/cs3.hpp"
#include "lcrl/attribution/lti_oracle.hpp"
#include "lcrl/env/presets.hpp"

namespace lcrl::attribution {
namespace {

// Boolean reachability: which states can action i have touched within m steps?
IntMatrix propagate_supports(const Matrix& E, const Matrix& F) {
  const auto m = E.rows(), n = F.cols();
  IntMatrix G = IntMatrix::Zero(n, m);
  for (Eigen::Index i = 0; i < n; ++i) {
    std::vector<bool> reach(static_cast<std::size_t>(m), false);
    for (Eigen::Index j = 0; j < m; ++j) reach[j] = F(j, i) != 0.0;
    std::vector<bool> seen = reach;
    for (Eigen::Index t = 1; t < m; ++t) {
      std::vector<bool> next(static_cast<std::size_t>(m), false);
      for (Eigen::Index j = 0; j < m; ++j) {
        next[j] = F(j, i) != 0.0;
        for (Eigen::Index k = 0; k < m; ++k) next[j] = next[j] || (E(j, k) != 0.0 && reach[k]);
      }
      reach = next;
      for (Eigen::Index j = 0; j < m; ++j) seen[j] = seen[j] || reach[j];
    }
    for (Eigen::Index j = 0; j < m; ++j) G(i, j) = seen[j] ? 1 : 0;
  }
  return G;
}

TEST(LtiOracle, CoupledPresetValues) {
  const auto p = env::lti_preset("lti-coupled3");
  Matrix expected(3, 3);
  expected << 2, 2, 0, 0, 6, 0, 0, 0, 6;
  EXPECT_EQ(analytic_H(p.E, p.F), expected);
}

TEST(LtiOracle, CoupledPresetGraphReadsActionRows) {
  // Action 2 reaches state 1 through E(1, 2); action 1 never reaches state 2.
  const auto p = env::lti_preset("lti-coupled3");
  IntMatrix expected(3, 3);
  expected << 1, 0, 0, 1, 1, 0, 0, 0, 1;
  EXPECT_EQ(graph_from_H(analytic_H(p.E, p.F)).G, expected);
}

TEST(LtiOracle, DecoupledSystem) {
  for (int m : {1, 3, 6}) {
    const Matrix H = analytic_H(Matrix::Zero(m, m), Matrix::Identity(m, m));
    EXPECT_EQ(H, Matrix::Identity(m, m) * m);
    EXPECT_EQ(graph_from_H(H).G, IntMatrix::Identity(m, m));
  }
}

TEST(LtiOracle, MatchesSupportPropagation) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto p = env::random_sparse_lti(5, 4, 0.3, seed);
    EXPECT_EQ(graph_from_H(analytic_H(p.E, p.F)).G, propagate_supports(p.E, p.F)) << "seed " << seed;
  }
}

TEST(LtiOracle, HoldModeEstimateConvergesToH) {
  // With a2 held, phi(i, j) = H(j, i) * E|a2| exactly in expectation.
  const auto p = env::random_sparse_lti(4, 3, 0.4, 17);
  env::LtiEnv e(p);
  Cs3Options o;
  o.sampling_times = 4000;
  o.mode = Cs3Mode::kHoldAction;
  o.seed = 1;
  const auto c = estimate_cs3(e, o);
  const Matrix expected = 0.5 * analytic_H(p.E, p.F).transpose();
  EXPECT_LT((c.phi - expected).cwiseAbs().maxCoeff(), 0.05 * std::max(1.0, expected.maxCoeff()));
}

TEST(LtiOracle, RectangularShapes) {
  const auto p = env::random_sparse_lti(5, 2, 0.5, 3);
  const Matrix H = analytic_H(p.E, p.F);
  EXPECT_EQ(H.rows(), 5);
  EXPECT_EQ(H.cols(), 2);
  const auto g = graph_from_H(H);
  EXPECT_EQ(g.G.rows(), 2);
  EXPECT_EQ(g.G.cols(), 5);
  EXPECT_EQ(g.source, GraphSource::kAnalytic);
}

TEST(LtiOracle, DimensionMismatchThrows) {
  EXPECT_THROW(analytic_H(Matrix::Zero(3, 3), Matrix::Zero(2, 2)), DimensionError);
  EXPECT_THROW(analytic_H(Matrix::Zero(3, 2), Matrix::Zero(3, 2)), DimensionError);
}

}  // namespace
}  // namespace lcrl::attribution
