// Seeded cross-module properties. Each loop prints nothing on success; a
// failure message carries the trial index so the case can be replayed.

#include <gtest/gtest.h>

#include "generators.hpp"
#include "kantgap/dual.hpp"
#include "kantgap/oracle.hpp"
#include "kantgap/primal.hpp"
#include "kantgap/relaxation.hpp"
#include "support.hpp"

namespace kantgap {
namespace {

using testing::R;
using Cost = ExtendedCost<Rational>;

/// Random finite costs on the finite cells of c; infinite elsewhere.
CostMatrix<Rational> reshuffledCost(testing::Draws& d, const CostMatrix<Rational>& c) {
  CostMatrix<Rational> out = c;
  for (int i = 0; i < c.rows(); ++i)
    for (int j = 0; j < c.cols(); ++j)
      if (c.isFinite(i, j)) out.set(i, j, R(d.between(0, 16), 4));
  return out;
}

TEST(Properties, StrongDualityAndWeakDualityWitness) {
  testing::Draws d(101);
  for (int trial = 0; trial < 120; ++trial) {
    const auto inst = testing::randomInstance(d, 6, 35, MarginalKind::RandomWithZeros);
    const auto P = primal_value(inst.cost, inst.mu, inst.nu);
    const auto sol = dual_value(inst.cost, inst.mu, inst.nu);
    EXPECT_EQ(P, sol.value) << trial;
    if (!P.isFinite()) continue;
    ASSERT_TRUE(sol.coupling.has_value());
    EXPECT_TRUE(sol.coupling->isCouplingOf(inst.mu, inst.nu));
    // Any other finite-cost coupling costs at least the dual objective.
    const auto other = optimal_coupling_at(reshuffledCost(d, inst.cost), inst.mu, inst.nu, R(1));
    EXPECT_LE(sol.pair.objective, cost_of(inst.cost, other)) << trial;
  }
}

TEST(Properties, JFunctionalIgnoresTheCoupling) {
  testing::Draws d(103);
  for (int trial = 0; trial < 80; ++trial) {
    const auto inst = testing::randomInstance(d, 5, 25, MarginalKind::RandomWithZeros);
    const auto sol = dual_value(inst.cost, inst.mu, inst.nu);
    if (!sol.value.isFinite()) continue;
    const auto a = *sol.coupling;
    const auto b = optimal_coupling_at(reshuffledCost(d, inst.cost), inst.mu, inst.nu, R(1));
    EXPECT_EQ(j_functional(sol.pair, a, inst.cost), j_functional(sol.pair, b, inst.cost)) << trial;
    EXPECT_EQ(j_functional(sol.pair, a, inst.cost), sol.value) << trial;
  }
}

TEST(Properties, RelaxedDualSandwich) {
  testing::Draws d(107);
  for (int trial = 0; trial < 60; ++trial) {
    const auto inst = testing::randomInstance(d, 5, 30, MarginalKind::Random);
    const auto P = primal_value(inst.cost, inst.mu, inst.nu);
    if (!P.isFinite()) {
      EXPECT_EQ(testing::codeOf([&] { relaxed_dual_value(inst.cost, inst.mu, inst.nu); }), ErrorCode::NotApplicable);
      continue;
    }
    const auto D = dual_value(inst.cost, inst.mu, inst.nu).value;
    const auto rel = relaxed_dual_value(inst.cost, inst.mu, inst.nu);
    EXPECT_LE(D, rel.value) << trial;
    EXPECT_LE(rel.value, P) << trial;
  }
}

TEST(Properties, CertifiedLevelAttains) {
  testing::Draws d(109);
  for (int trial = 0; trial < 60; ++trial) {
    const auto inst = testing::randomInstance(d, 5, 30, MarginalKind::Random);
    const auto P = primal_value(inst.cost, inst.mu, inst.nu);
    if (!P.isFinite()) continue;
    const auto first = attainment_check(inst.cost, inst.mu, inst.nu, std::vector<Rational>{R(0)});
    ASSERT_TRUE(first.certifiedLevel.has_value());
    const auto report =
        attainment_check(inst.cost, inst.mu, inst.nu, std::vector<Rational>{R(0), *first.certifiedLevel});
    EXPECT_TRUE(report.attained) << trial;
    EXPECT_EQ(report.values.back().value, P) << trial;
  }
}

TEST(Properties, ProfileMatchesOracleOnTinyInstances) {
  testing::Draws d(113);
  for (int trial = 0; trial < 60; ++trial) {
    const auto inst = testing::randomInstance(d, 3, 30, MarginalKind::RandomWithZeros);
    const auto p = solve_profile(inst.cost, inst.mu, inst.nu);
    for (int k = 0; k <= 5; ++k) {
      const Rational m = R(k, 4);
      EXPECT_EQ(evaluate_profile(p, m), oracle::brute_primal(inst.cost, inst.mu, inst.nu, m)) << trial << " " << m;
    }
  }
}

TEST(Properties, PartialValuePlusCompletionBoundsPrimal) {
  testing::Draws d(127);
  for (int trial = 0; trial < 60; ++trial) {
    const auto inst = testing::randomInstance(d, 5, 0, MarginalKind::Random);
    const Rational M = *inst.cost.maxFiniteValue();
    const Rational eps = R(d.between(0, 6), 6);
    const auto P = primal_value(inst.cost, inst.mu, inst.nu);
    const auto Peps = partial_value(inst.cost, inst.mu, inst.nu, eps);
    EXPECT_LE(Peps, P);
    EXPECT_LE(P, Peps + Cost(eps * M)) << trial;
  }
}

TEST(Properties, FloatModeAgreesWithExact) {
  testing::Draws d(131);
  for (int trial = 0; trial < 40; ++trial) {
    const auto inst = testing::randomInstance(d, 6, 25, MarginalKind::Random);
    const auto exact = dual_value(inst.cost, inst.mu, inst.nu).value;
    const auto f = inst.cast<double>();
    const auto approx = dual_value(f.cost, f.mu, f.nu).value;
    ASSERT_EQ(exact.isFinite(), approx.isFinite()) << trial;
    if (exact.isFinite()) EXPECT_NEAR(exact.value().convert_to<double>(), approx.value(), 1e-9) << trial;
  }
}

}  // namespace
}  // namespace kantgap
