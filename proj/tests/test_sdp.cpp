#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "mecsdr/oracle.hpp"
#include "mecsdr/sdp.hpp"
#include "support/generators.hpp"

namespace mecsdr {
namespace {

using testing::random_decision;
using testing::random_instance;
using testing::reference_instance;

double trace(const SymMatrix& a, const SymMatrix& z) { return a.inner(z); }

SdpProblem one_block(std::size_t n) {
  SdpProblem p;
  p.block_sizes = {n};
  return p;
}

TEST(Homogenize, ObjectiveIsTraceAgainstLift) {
  std::mt19937_64 rng(1);
  const Instance inst = random_instance(rng, 3, 2);
  const QcqpForm f = build_qcqp(inst);
  const HomogenizedProblem h = homogenize(f);
  const Eigen::VectorXd y = encode(f, random_decision(rng, inst));
  EXPECT_NEAR(trace(h.b0, lift(y)), eval_objective(f, y), 1e-12 * (1 + std::abs(eval_objective(f, y))));
}

TEST(Homogenize, BinarySlotsVanishOnFeasiblePoint) {
  std::mt19937_64 rng(2);
  const Instance inst = random_instance(rng, 3, 2);
  const QcqpForm f = build_qcqp(inst);
  const HomogenizedProblem h = homogenize(f);
  const SymMatrix z = lift(encode(f, random_decision(rng, inst)));
  ASSERT_EQ(h.k_eq.size(), f.layout.q());
  for (const SymMatrix& k : h.k_eq) EXPECT_NEAR(trace(k, z), 0.0, 1e-15);
  EXPECT_EQ(trace(h.corner, z), 1.0);
}

TEST(Homogenize, GammaRangeTrace) {
  const QcqpForm f = build_qcqp(reference_instance());
  const HomogenizedProblem h = homogenize(f);
  const SymMatrix z = lift(encode(f, {Assignment({1}), 0.3}));
  EXPECT_NEAR(trace(h.k_ineq, z), -0.21, 1e-15);
}

TEST(Homogenize, LinearRowsMatchQcqp) {
  std::mt19937_64 rng(3);
  const Instance inst = random_instance(rng, 4, 3);
  const QcqpForm f = build_qcqp(inst);
  const HomogenizedProblem h = homogenize(f);
  const Eigen::VectorXd y = encode(f, random_decision(rng, inst));
  const SymMatrix z = lift(y);
  for (std::size_t r = 0; r < h.h.size(); ++r) EXPECT_NEAR(trace(h.h[r], z), f.a3.row(r).dot(y), 1e-12);
  for (std::size_t r = 0; r < h.j.size(); ++r) EXPECT_NEAR(trace(h.j[r], z), f.a4.row(r).dot(y), 1e-12);
  for (std::size_t r = 0; r < h.g.size(); ++r) EXPECT_NEAR(trace(h.g[r], z), 1.0, 1e-15);
}

TEST(Homogenize, ZeroLatencyWeightAddsUpperBound) {
  Instance inst = reference_instance();
  EXPECT_TRUE(homogenize(build_qcqp(inst)).extra.empty());
  inst.lambda_t = 0.0;
  const HomogenizedProblem h = homogenize(build_qcqp(inst));
  ASSERT_EQ(h.extra.size(), 1u);
  EXPECT_EQ(h.extra[0].sense, Sense::kLessEqual);
  EXPECT_NEAR(h.extra[0].rhs, 5.66, 1e-12);
}

TEST(ToStandardForm, CountsForSingleTaskSingleCap) {
  const HomogenizedProblem h = homogenize(build_qcqp(reference_instance()));
  StandardFormOptions plain;
  plain.bound_latency_slot = false;
  const SdpProblem p = to_standard_form(h, plain);
  EXPECT_EQ(p.num_constraints(), 8u);
  EXPECT_EQ(p.num_slacks(), 4u);
  EXPECT_EQ(p.block_sizes[0], 5u);
  // The default adds the latency-square bound with its own slack.
  const SdpProblem bounded = to_standard_form(h);
  EXPECT_EQ(bounded.num_constraints(), 9u);
  EXPECT_EQ(bounded.num_slacks(), 5u);
  EXPECT_EQ(bounded.labels.back(), "latency_square_bound");
}

TEST(ToStandardForm, PinnedGammaAddsEquality) {
  HomogenizedProblem h = homogenize(build_qcqp(reference_instance()));
  const std::size_t before = to_standard_form(h).num_constraints();
  pin_gamma_zero(h);
  const SdpProblem p = to_standard_form(h);
  EXPECT_EQ(p.num_constraints(), before + 1);
  EXPECT_EQ(p.num_slacks(), to_standard_form(homogenize(build_qcqp(reference_instance()))).num_slacks());
}

TEST(StandardFormText, RoundTripIsExact) {
  std::mt19937_64 rng(4);
  const SdpProblem p = to_standard_form(homogenize(build_qcqp(random_instance(rng, 3, 2))));
  std::stringstream ss;
  write_standard_form(ss, p);
  const SdpProblem back = read_standard_form(ss);
  ASSERT_EQ(back.block_sizes, p.block_sizes);
  ASSERT_EQ(back.rhs, p.rhs);
  ASSERT_EQ(back.labels, p.labels);
  ASSERT_EQ(back.dense_scaling, p.dense_scaling);
  ASSERT_EQ(back.constraints.size(), p.constraints.size());
  for (std::size_t i = 0; i < p.constraints.size(); ++i) {
    ASSERT_EQ(back.constraints[i].size(), p.constraints[i].size());
    for (std::size_t e = 0; e < p.constraints[i].size(); ++e) {
      EXPECT_EQ(back.constraints[i][e].value, p.constraints[i][e].value);
      EXPECT_EQ(back.constraints[i][e].row, p.constraints[i][e].row);
    }
  }
  std::stringstream again;
  write_standard_form(again, back);
  std::stringstream first;
  write_standard_form(first, p);
  EXPECT_EQ(again.str(), first.str());
}

TEST(StandardFormText, RejectsGarbage) {
  std::stringstream bad("not-a-dump 1\n");
  EXPECT_THROW(read_standard_form(bad), std::runtime_error);
  std::stringstream truncated("mecsdr-sdp 1\nblocks 1 2\nscaling 0\nconstraints 1\ncost 0\n");
  EXPECT_THROW(read_standard_form(truncated), std::runtime_error);
}

TEST(Solve, SmallestEigenvalueProblem) {
  SdpProblem p = one_block(2);
  p.cost = {{0, 0, 0, 1.0}, {0, 1, 1, 2.0}};
  p.constraints = {{{0, 0, 0, 1.0}, {0, 1, 1, 1.0}}};
  p.rhs = {1.0};
  p.labels = {"trace"};
  const SdpSolution s = solve(p);
  EXPECT_EQ(s.status, SdpStatus::kOptimal);
  EXPECT_NEAR(s.objective, 1.0, 1e-6);
  EXPECT_NEAR(s.z(0, 0), 1.0, 1e-6);
  EXPECT_NEAR(s.z(1, 1), 0.0, 1e-6);
}

TEST(Solve, ScalarProblem) {
  SdpProblem p = one_block(1);
  p.cost = {{0, 0, 0, 3.0}};
  p.constraints = {{{0, 0, 0, 2.0}}};
  p.rhs = {4.0};
  p.labels = {"c"};
  const SdpSolution s = solve(p);
  EXPECT_EQ(s.status, SdpStatus::kOptimal);
  EXPECT_NEAR(s.objective, 6.0, 1e-6);
  EXPECT_NEAR(s.z(0, 0), 2.0, 1e-6);
}

TEST(Solve, TriangleMaxCut) {
  // maximize sum_{i<j} (1 - Z_ij) / 2 with unit diagonal, written as a minimization.
  SdpProblem p = one_block(3);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < i; ++j) p.cost.push_back({0, i, j, 0.25});
    p.constraints.push_back({{0, i, i, 1.0}});
    p.rhs.push_back(1.0);
    p.labels.push_back("diag" + std::to_string(i));
  }
  const SdpSolution s = solve(p);
  EXPECT_EQ(s.status, SdpStatus::kOptimal);
  EXPECT_NEAR(1.5 - s.objective, 2.25, 1e-6);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < i; ++j) EXPECT_NEAR(s.z(i, j), -0.5, 1e-6);
  }
}

TEST(Solve, MatchesIndependentSolverOnFourTasks) {
  // Optimum of the unbounded, unscaled relaxation from an external conic
  // solver (Clarabel via cvxpy) on a dump of this instance: 3.815330228.
  Instance inst;
  inst.device = {4e8, 0.8, 1.258, 1.181, 300.0, 1.5e-10};
  inst.caps = {{2e9, 7e5, 8e5}, {2.2e9, 6e5, 9e5}};
  inst.tasks.assign(4, {4e6, 8e5, 1.32e9});
  const HomogenizedProblem h = homogenize(build_qcqp(inst));
  const SdpSolution s = solve(to_standard_form(h));
  EXPECT_EQ(s.status, SdpStatus::kOptimal);
  EXPECT_NEAR(s.objective, 3.815330228, 1e-6);
  StandardFormOptions plain;
  plain.bound_latency_slot = false;
  plain.scale_latency_slot = false;
  EXPECT_NEAR(solve(to_standard_form(h, plain)).objective, 3.815330228, 1e-5);
}

TEST(Solve, ReportedZSatisfiesOriginalConstraints) {
  std::mt19937_64 rng(5);
  const Instance inst = random_instance(rng, 3, 2);
  const HomogenizedProblem h = homogenize(build_qcqp(inst));
  const SdpSolution s = solve(to_standard_form(h));
  ASSERT_EQ(s.status, SdpStatus::kOptimal);
  EXPECT_NEAR(trace(h.corner, s.z), 1.0, 1e-6);
  for (const SymMatrix& g : h.g) EXPECT_NEAR(trace(g, s.z), 1.0, 1e-6);
  for (const SymMatrix& a : h.h) EXPECT_LE(trace(a, s.z), 1e-5);
  EXPECT_NEAR(trace(h.b0, s.z), s.objective, 1e-6 * (1 + std::abs(s.objective)));
  EXPECT_GE(eigh(s.z).values(0), -1e-7);
}

TEST(RankOneCheck, OuterProductAndIdentity) {
  Eigen::VectorXd v(3);
  v << 1, -2, 0.5;
  const RankOneCheck r = rank_one_check(SymMatrix::outer(v));
  EXPECT_TRUE(r.rank_one);
  EXPECT_NEAR(std::abs(r.v1.dot(v.normalized())), 1.0, 1e-12);
  const RankOneCheck id = rank_one_check(SymMatrix::identity(3));
  EXPECT_FALSE(id.rank_one);
  EXPECT_NEAR(id.ratio, 1.0, 1e-12);
}

// Properties.

TEST(SdpProperty, RelaxationBoundsEndpointOptimum) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 25; ++trial) {
    const Instance inst = random_instance(rng, 1 + trial % 5, 1 + trial % 2,
                                          static_cast<RateRange>(trial % 3));
    const SdpSolution s = solve(to_standard_form(homogenize(build_qcqp(inst))));
    ASSERT_EQ(s.status, SdpStatus::kOptimal) << "trial " << trial;
    const double p3 = solve_exact(inst).psi_p3;
    EXPECT_LE(s.objective, p3 + 1e-5 * (1 + std::abs(p3))) << "trial " << trial;
    EXPECT_LE(s.dual_objective, s.objective + 1e-6 * (1 + std::abs(s.objective)));
    EXPECT_LE(std::max({s.primal_residual, s.dual_residual, s.gap}), 1e-7);
  }
}

TEST(SdpProperty, PinnedGammaRelaxationIsNotLower) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 15; ++trial) {
    const Instance inst = random_instance(rng, 1 + trial % 4, 2);
    HomogenizedProblem h = homogenize(build_qcqp(inst));
    const double free_gamma = solve(to_standard_form(h)).objective;
    pin_gamma_zero(h);
    const SdpSolution pinned = solve(to_standard_form(h));
    EXPECT_GE(pinned.objective, free_gamma - 1e-6 * (1 + std::abs(free_gamma)));
    EXPECT_NEAR(pinned.z(YLayout(inst.num_tasks(), 2).gamma_index(), YLayout(inst.num_tasks(), 2).homogeneous_index()),
                0.0, 1e-6);
  }
}

}  // namespace
}  // namespace mecsdr
