#include <gtest/gtest.h>

#include "lcrl/attribution/cs3.hpp"
#include "lcrl/attribution/graph.hpp"
#include "lcrl/attribution/lti_oracle.hpp"
#include "lcrl/env/presets.hpp"

namespace lcrl::attribution {
namespace {

Cs3Matrix run(const env::Environment& e, int st, Cs3Mode mode = Cs3Mode::kResample, std::uint64_t seed = 0,
              int threads = 1) {
  Cs3Options o;
  o.sampling_times = st;
  o.mode = mode;
  o.seed = seed;
  o.threads = threads;
  return estimate_cs3(e, o);
}

TEST(Cs3, DecoupledSystemHasDiagonalAttribution) {
  env::LtiEnv e(env::lti_preset("lti-identity3"));
  const auto c = run(e, 200);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      if (i == j) {
        EXPECT_GT(c.phi(i, j), 0.1);
      } else {
        EXPECT_EQ(c.phi(i, j), 0.0);
      }
    }
  }
}

TEST(Cs3, CoupledSystemZeroEntriesAreExactlyZero) {
  // Action 1 never reaches state 2 (E has no path from state 1 to state 2),
  // while action 2 does reach state 1.
  env::LtiEnv e(env::lti_preset("lti-coupled3"));
  const auto c = run(e, 300);
  EXPECT_EQ(c.phi(0, 1), 0.0);
  EXPECT_GT(c.phi(1, 0), 0.1);
  EXPECT_EQ(c.phi(2, 0), 0.0);
  EXPECT_EQ(c.phi(0, 2), 0.0);
}

TEST(Cs3, HoldModeMatchesClosedForm) {
  // Holding a2 for the whole trajectory: phi = H(j, i) * E|a2| = 2 * 0.5.
  env::LtiEnv e(env::lti_preset("lti-coupled3"));
  const auto c = run(e, 4000, Cs3Mode::kHoldAction, 3);
  EXPECT_NEAR(c.phi(0, 0), 1.0, 0.03);
  EXPECT_NEAR(c.phi(2, 2), 3.0, 0.09);  // H33 = 6
}

TEST(Cs3, IndependentOfThreadCount) {
  env::PegEnv e;
  const auto a = run(e, 40, Cs3Mode::kResample, 9, 1);
  const auto b = run(e, 40, Cs3Mode::kResample, 9, 4);
  EXPECT_EQ(a.phi, b.phi);
}

TEST(Cs3, SeedChangesEstimateButNotPattern) {
  env::PegEnv e;
  const auto a = run(e, 200, Cs3Mode::kResample, 1);
  const auto b = run(e, 200, Cs3Mode::kResample, 2);
  EXPECT_NE(a.phi, b.phi);
  EXPECT_TRUE(build_graph(a, 0.1).same_pattern(build_graph(b, 0.1)));
}

TEST(Cs3, BackgroundActionCancelsOnLinearSystem) {
  // Changing only the stream that draws the subset and a1 leaves every
  // paired difference untouched on a noise-free linear system.
  env::LtiEnv e(env::lti_preset("lti-coupled3"));
  Cs3Options o;
  o.sampling_times = 1;
  o.seed = 5;
  for (int i = 0; i < 3; ++i) {
    for (int rep = 0; rep < 20; ++rep) {
      o.background_salt = 0;
      const Vector base = cs3_repeat(e, i, rep, o);
      o.background_salt = 0xabcdef;
      const Vector salted = cs3_repeat(e, i, rep, o);
      EXPECT_LT((base - salted).cwiseAbs().maxCoeff(), 1e-12);
    }
  }
}

TEST(Cs3, ScaleEquivariantInDynamics) {
  // Scaling F by c scales every paired difference (hence phi) by c.
  env::LtiParams p = env::lti_preset("lti-coupled3");
  env::LtiEnv e1(p);
  p.F *= 3.0;
  env::LtiEnv e3(p);
  const auto a = run(e1, 50), b = run(e3, 50);
  EXPECT_LT((b.phi - 3.0 * a.phi).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Cs3, HorizonDefaultsToStateDimension) {
  env::LtiEnv e(env::lti_preset("lti-coupled3"));
  const auto c = run(e, 5);
  EXPECT_EQ(c.horizon, 3);
  EXPECT_EQ(c.sampling_times, 5);
  EXPECT_EQ(c.phi.rows(), 3);
}

TEST(Cs3, NonnegativeAndFinite) {
  env::PegEnv e;
  const auto c = run(e, 30);
  EXPECT_TRUE(c.phi.allFinite());
  EXPECT_GE(c.phi.minCoeff(), 0.0);
}

TEST(Cs3, RejectsBadOptions) {
  env::LtiEnv e(env::lti_preset("lti-coupled3"));
  Cs3Options o;
  o.sampling_times = 0;
  EXPECT_THROW(estimate_cs3(e, o), std::invalid_argument);
  o.sampling_times = 1;
  o.subset_probability = 1.5;
  EXPECT_THROW(estimate_cs3(e, o), std::invalid_argument);
}

TEST(Cs3, ModeStrings) {
  EXPECT_EQ(cs3_mode_from_string(to_string(Cs3Mode::kHoldAction)), Cs3Mode::kHoldAction);
  EXPECT_THROW(cs3_mode_from_string("sometimes"), std::invalid_argument);
}

}  // namespace
}  // namespace lcrl::attribution
