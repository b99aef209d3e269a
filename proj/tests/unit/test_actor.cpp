#include <gtest/gtest.h>

#include <cstring>
#include <random>

#include "lcrl/agents/actor.hpp"

namespace lcrl::agents {
namespace {

attribution::ConnectionGraph peg_graph() {
  attribution::ConnectionGraph g;
  g.G.resize(6, 12);
  g.G << 1, 0, 1, 0, 0, 0, 1, 0, 1, 0, 1, 0,  //
      0, 1, 1, 0, 0, 0, 0, 1, 1, 1, 0, 0,     //
      0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0,     //
      0, 1, 0, 1, 0, 0, 0, 1, 1, 1, 0, 0,     //
      1, 0, 0, 0, 1, 0, 1, 0, 1, 0, 1, 0,     //
      0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 1;
  return g;
}

Vector peg_lb() { return -Vector::Ones(6); }
Vector peg_ub() {
  Vector ub(6);
  ub << 2, 2, 2, 4, 4, 4;
  return ub;
}

Vector iota(int n) {
  Vector s(n);
  for (int k = 0; k < n; ++k) s[k] = k + 1;
  return s;
}

TEST(Decompose, PicksGraphColumns) {
  attribution::ConnectionGraph g;
  g.G = IntMatrix::Zero(1, 12);
  g.G(0, 0) = 1;
  g.G(0, 2) = 1;
  Vector expected(2);
  expected << 1, 3;
  EXPECT_EQ(decompose(iota(12), g, 0), expected);
}

TEST(Decompose, FullRowGivesWholeState) {
  const auto g = attribution::ConnectionGraph::full(2, 5);
  EXPECT_EQ(decompose(iota(5), g, 1), iota(5));
}

TEST(Decompose, PegTranslationRow) {
  // dx reads (x, z, Fx, Fz, My).
  Vector expected(5);
  expected << 1, 3, 7, 9, 11;
  EXPECT_EQ(decompose(iota(12), peg_graph(), 0), expected);
  Vector torsion(2);
  torsion << 6, 12;
  EXPECT_EQ(decompose(iota(12), peg_graph(), 5), torsion);
}

TEST(Decompose, EmptyRowGivesSingleZero) {
  attribution::ConnectionGraph g;
  g.G = IntMatrix::Zero(1, 3);
  EXPECT_EQ(decompose(iota(3), g, 0), Vector::Zero(1));
}

TEST(Integrate, ZeroComponentsGiveZeroAction) {
  EXPECT_EQ(integrate({0, 0, 0}, -Vector::Ones(3), Vector::Ones(3)), Vector::Zero(3));
}

TEST(Integrate, ClampsToBox) {
  const Vector a = integrate({-5, 9, 0.5}, -Vector::Ones(3), Vector::Constant(3, 2.0));
  Vector expected(3);
  expected << -1, 2, 0.5;
  EXPECT_EQ(a, expected);
}

TEST(LocalActor, MaskedInputsNeverChangeOutput) {
  std::mt19937_64 rng(1);
  const auto g = peg_graph();
  LocalActor actor(12, peg_lb(), peg_ub(), g, {16, 16}, rng);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    Vector s(12);
    for (auto& v : s) v = normal(rng);
    const Vector a = actor.act(s);
    for (int j = 0; j < 12; ++j) {
      Vector t = s;
      t[j] += 5.0;
      const Vector b = actor.act(t);
      for (int i = 0; i < 6; ++i) {
        if (g.G(i, j) == 0) {
          EXPECT_EQ(std::memcmp(&a[i], &b[i], sizeof(double)), 0);
        }
      }
    }
  }
}

TEST(LocalActor, ConnectedInputsDoChangeOutput) {
  std::mt19937_64 rng(2);
  LocalActor actor(12, peg_lb(), peg_ub(), peg_graph(), {16}, rng);
  const Vector s = Vector::Zero(12);
  Vector t = s;
  t[0] = 1.0;  // x feeds dx and dbeta
  const Vector a = actor.act(s), b = actor.act(t);
  EXPECT_NE(a[0], b[0]);
  EXPECT_NE(a[4], b[4]);
}

TEST(LocalActor, SubPolicyReadsDecomposedState) {
  std::mt19937_64 rng(3);
  const auto g = peg_graph();
  LocalActor actor(12, peg_lb(), peg_ub(), g, {8}, rng);
  EXPECT_EQ(actor.inputs_of(1), (std::vector<int>{1, 2, 7, 8, 9}));
  const Vector s = Vector::Random(12);
  const Vector a = actor.act(s);
  for (int i = 0; i < 6; ++i) {
    EXPECT_EQ(actor.sub_policy(i).input_size(), static_cast<int>(g.inputs_of(i).size()));
    EXPECT_DOUBLE_EQ(a[i], actor.sub_policy(i).forward(decompose(s, g, i))[0]);
  }
}

TEST(LocalActor, FullGraphMatchesPerComponentGlobalNets) {
  // With every edge present each component sees the whole state: copying a
  // sub-policy into a single-output global net gives the same component.
  std::mt19937_64 rng(4);
  const auto g = attribution::ConnectionGraph::full(3, 5);
  const Vector lb = -Vector::Ones(3), ub = Vector::Constant(3, 2.0);
  LocalActor local(5, lb, ub, g, {7}, rng);
  const Vector s = Vector::Random(5);
  const Vector a = local.act(s);
  for (int i = 0; i < 3; ++i) {
    GlobalActor single(5, lb.segment(i, 1), ub.segment(i, 1), {7}, rng);
    single.networks()[0]->set_parameters(local.sub_policy(i).parameters());
    EXPECT_DOUBLE_EQ(single.act(s)[0], a[i]);
  }
}

TEST(LocalActor, BatchMatchesSingle) {
  std::mt19937_64 rng(5);
  LocalActor actor(12, peg_lb(), peg_ub(), peg_graph(), {8, 8}, rng);
  const Matrix states = Matrix::Random(12, 6);
  const Matrix batch = actor.act_batch(states, nullptr);
  for (int c = 0; c < 6; ++c) EXPECT_LT((batch.col(c) - actor.act(states.col(c))).cwiseAbs().maxCoeff(), 1e-15);
}

// Numerical check of dL/dtheta for L = sum(w .* act_batch(x)).
double actor_grad_error(Actor& actor, const Matrix& x, const Matrix& w) {
  ActorTape tape;
  actor.act_batch(x, &tape);
  std::vector<Vector> grads;
  for (const Mlp* net : actor.networks()) grads.push_back(Vector::Zero(static_cast<Eigen::Index>(net->parameter_count())));
  actor.backward(tape, w, grads);
  double worst = 0.0;
  auto nets = actor.networks();
  for (std::size_t n = 0; n < nets.size(); ++n) {
    Vector fd(grads[n].size());
    for (Eigen::Index k = 0; k < fd.size(); ++k) {
      const double keep = nets[n]->parameters()(k);
      nets[n]->parameters()(k) = keep + 1e-5;
      const double up = (actor.act_batch(x, nullptr).array() * w.array()).sum();
      nets[n]->parameters()(k) = keep - 1e-5;
      const double down = (actor.act_batch(x, nullptr).array() * w.array()).sum();
      nets[n]->parameters()(k) = keep;
      fd(k) = (up - down) / 2e-5;
    }
    worst = std::max(worst, (fd - grads[n]).norm() / std::max(1e-12, fd.norm()));
  }
  return worst;
}

TEST(LocalActor, GradientsMatchFiniteDifferences) {
  std::mt19937_64 rng(6);
  LocalActor actor(12, peg_lb(), peg_ub(), peg_graph(), {6}, rng);
  EXPECT_LT(actor_grad_error(actor, Matrix::Random(12, 3), Matrix::Random(6, 3)), 1e-4);
}

TEST(GlobalActor, GradientsMatchFiniteDifferences) {
  std::mt19937_64 rng(7);
  GlobalActor actor(12, peg_lb(), peg_ub(), {6, 5}, rng);
  EXPECT_LT(actor_grad_error(actor, Matrix::Random(12, 3), Matrix::Random(6, 3)), 1e-4);
}

TEST(GlobalActor, OutputsInsideBox) {
  std::mt19937_64 rng(8);
  GlobalActor actor(12, peg_lb(), peg_ub(), {64, 64}, rng);
  const Matrix a = actor.act_batch(Matrix::Random(12, 50) * 100.0, nullptr);
  for (Eigen::Index c = 0; c < a.cols(); ++c) {
    EXPECT_TRUE((a.col(c).array() >= peg_lb().array()).all());
    EXPECT_TRUE((a.col(c).array() <= peg_ub().array()).all());
  }
}

TEST(ConstantActor, ZeroClampedIntoBox) {
  Vector lb(2), ub(2);
  lb << 0.5, -1;
  ub << 1, 1;
  ConstantActor actor(3, lb, ub);
  Vector expected(2);
  expected << 0.5, 0;
  EXPECT_EQ(actor.act(Vector::Random(3)), expected);
  EXPECT_EQ(actor.parameter_count(), 0u);
}

TEST(Actor, KindStrings) {
  EXPECT_EQ(actor_kind_from_string("lcrl"), ActorKind::kLocal);
  EXPECT_EQ(to_string(ActorKind::kGlobal), "gcrl");
  EXPECT_THROW(actor_kind_from_string("ppo"), std::invalid_argument);
}

TEST(Actor, GraphShapeChecked) {
  std::mt19937_64 rng(9);
  EXPECT_THROW(LocalActor(12, peg_lb(), peg_ub(), attribution::ConnectionGraph::full(5, 12), {4}, rng), DimensionError);
}

}  // namespace
}  // namespace lcrl::agents
