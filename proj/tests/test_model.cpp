#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "mecsdr/model.hpp"
#include "support/generators.hpp"

namespace mecsdr {
namespace {

using testing::random_decision;
using testing::random_instance;
using testing::reference_instance;

TEST(GCoeff, LocalLatencyIsCyclesOverLocalRate) {
  EXPECT_NEAR(g_coeff(reference_instance(), 0, 0, 0.0), 3.3, 1e-12);
  EXPECT_NEAR(g_coeff(reference_instance(), 0, 0, 0.7), 3.3, 1e-12);
}

TEST(GCoeff, OffloadedEndpoints) {
  const Instance inst = reference_instance();
  EXPECT_NEAR(g_coeff(inst, 0, 1, 0.0), 5.46, 1e-12);
  EXPECT_NEAR(g_coeff(inst, 0, 1, 1.0), 5.66, 1e-12);
}

TEST(GCoeff, BadIndexThrows) {
  const Instance inst = reference_instance();
  EXPECT_THROW(g_coeff(inst, 1, 0, 0.0), std::out_of_range);
  EXPECT_THROW(g_coeff(inst, 0, 2, 0.0), std::out_of_range);
  EXPECT_THROW(uplink_time(inst, 0, 0), std::out_of_range);
}

TEST(BatchLatency, EmptyCpuIsZero) {
  const Instance inst = reference_instance();
  const auto t = batch_latency(inst, {Assignment::all_local(1), 0.0});
  ASSERT_EQ(t.size(), 2u);
  EXPECT_NEAR(t[0], 3.3, 1e-12);
  EXPECT_EQ(t[1], 0.0);
}

TEST(BatchLatency, SingleOffloadedTask) {
  const auto t = batch_latency(reference_instance(), {Assignment({1}), 0.0});
  EXPECT_EQ(t[0], 0.0);
  EXPECT_NEAR(t[1], 5.46, 1e-12);
}

TEST(Energy, CompressionEnergyHalfCompressed) {
  const EnergyBreakdown e = energy(reference_instance(), {Assignment({1}), 0.5});
  EXPECT_NEAR(e.e_compr, 0.105, 1e-12);
  EXPECT_EQ(e.e_comp, 0.0);
}

TEST(Energy, NoCompressionNoCompressionEnergy) {
  EXPECT_EQ(energy(reference_instance(), {Assignment({1}), 0.0}).e_compr, 0.0);
}

TEST(Energy, LocalOnlyHasNoRadioOrCompressionCost) {
  const EnergyBreakdown e = energy(reference_instance(), {Assignment::all_local(1), 0.9});
  EXPECT_EQ(e.e_tr, 0.0);
  EXPECT_EQ(e.e_compr, 0.0);
  EXPECT_NEAR(e.e_comp, 0.8 * 3.3, 1e-12);
}

TEST(Objective, AllLocalReference) {
  const CostBreakdown c = objective(reference_instance(), {Assignment::all_local(1), 0.0});
  EXPECT_NEAR(c.psi, 2.97, 1e-12);
  EXPECT_NEAR(c.latency, 3.3, 1e-12);
}

TEST(Objective, ZeroLatencyWeight) {
  Instance inst = reference_instance();
  inst.lambda_t = 0.0;
  const Decision d{Assignment({1}), 0.3};
  const CostBreakdown c = objective(inst, d);
  EXPECT_DOUBLE_EQ(c.psi, inst.lambda_e * c.energy);
}

TEST(Validation, RejectsMalformedInput) {
  Instance inst = reference_instance();
  EXPECT_THROW(validate_decision(inst, {Assignment({2}), 0.0}), InvalidDecision);
  EXPECT_THROW(validate_decision(inst, {Assignment({0, 0}), 0.0}), InvalidDecision);
  EXPECT_THROW(validate_decision(inst, {Assignment({0}), 1.5}), InvalidDecision);
  inst.device.r0 = 0.0;
  EXPECT_THROW(inst.validate(), InvalidInstance);
  inst = reference_instance();
  inst.caps[0].c_ul = -1.0;
  EXPECT_THROW(inst.validate(), InvalidInstance);
  inst = reference_instance();
  inst.lambda_t = -0.1;
  EXPECT_THROW(inst.validate(), InvalidInstance);
}

TEST(Assignment, MatrixRoundTrip) {
  const Assignment a({2, 0, 1});
  EXPECT_EQ(Assignment::from_matrix(a.to_matrix(3)), a);
  EXPECT_EQ(a.x(0, 2), 1);
  EXPECT_EQ(a.x(0, 1), 0);
}

// Properties over random instances.

TEST(ModelProperty, LatencyAffineInGamma) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const Instance inst = random_instance(rng, 1 + trial % 8, 1 + trial % 3);
    const Decision d = random_decision(rng, inst);
    const double g = std::uniform_real_distribution<double>(0, 1)(rng);
    const auto t0 = batch_latency(inst, {d.assignment, 0.0});
    const auto t1 = batch_latency(inst, {d.assignment, 1.0});
    const auto tg = batch_latency(inst, {d.assignment, g});
    for (std::size_t k = 0; k < tg.size(); ++k) {
      EXPECT_NEAR(tg[k], (1 - g) * t0[k] + g * t1[k], 1e-12 * (1 + tg[k]));
    }
  }
}

TEST(ModelProperty, ComponentsNonnegativeAndLatencyIsMax) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 300; ++trial) {
    const Instance inst = random_instance(rng, 1 + trial % 8, 1 + trial % 3);
    const CostBreakdown c = objective(inst, random_decision(rng, inst));
    EXPECT_GE(c.e_comp, 0.0);
    EXPECT_GE(c.e_compr, 0.0);
    EXPECT_GE(c.e_tr, 0.0);
    double mx = 0.0;
    for (double t : c.per_cpu_latency) mx = std::max(mx, t);
    EXPECT_EQ(c.latency, mx);
    EXPECT_NEAR(c.psi, inst.lambda_t * c.latency + inst.lambda_e * c.energy, 1e-12 * c.psi);
  }
}

TEST(ModelProperty, DoublingWeightsDoublesCost) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    Instance inst = random_instance(rng, 1 + trial % 6, 1 + trial % 3);
    const Decision d = random_decision(rng, inst);
    inst.lambda_t *= 0.5;
    inst.lambda_e *= 0.5;
    const double psi = objective(inst, d).psi;
    inst.lambda_t *= 2;
    inst.lambda_e *= 2;
    EXPECT_NEAR(objective(inst, d).psi, 2 * psi, 1e-12 * psi);
  }
}

TEST(ModelProperty, FreeCompressionOnlyShrinksUplink) {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 200; ++trial) {
    Instance inst = random_instance(rng, 1 + trial % 6, 1 + trial % 3);
    inst.device.jc = 0.0;
    const Assignment a = testing::random_assignment(rng, inst);
    const double g = std::uniform_real_distribution<double>(0, 1)(rng);
    const auto t0 = batch_latency(inst, {a, 0.0});
    const auto tg = batch_latency(inst, {a, g});
    for (std::size_t k = 1; k < tg.size(); ++k) {
      double uplink = 0.0;
      for (std::size_t i = 0; i < inst.num_tasks(); ++i) uplink += a.x(i, k) * uplink_time(inst, i, k);
      EXPECT_NEAR(t0[k] - tg[k], g * uplink, 1e-12 * (1 + t0[k]));
    }
    EXPECT_EQ(tg[0], t0[0]);
    EXPECT_EQ(energy(inst, {a, g}).e_compr, 0.0);
  }
}

}  // namespace
}  // namespace mecsdr
