#include <gtest/gtest.h>

#include "generators.hpp"
#include "kantgap/flow.hpp"
#include "support.hpp"

namespace kantgap {
namespace {

using testing::codeOf;
using testing::R;
using Cost = ExtendedCost<Rational>;

std::vector<std::pair<Rational, Rational>> points(const TransportProfile<Rational>& p) {
  std::vector<std::pair<Rational, Rational>> out;
  for (const auto& bp : p.breakpoints()) out.emplace_back(bp.mass, bp.cost);
  return out;
}

bool reducedCostsNonnegative(const CostMatrix<Rational>& c, const PotentialPair<Rational>& pot) {
  for (int i = 0; i < c.rows(); ++i)
    for (int j = 0; j < c.cols(); ++j)
      if (c.isFinite(i, j) && c.value(i, j) - pot.u(i) - pot.v(j) < 0) return false;
  return true;
}

TEST(Profile, DiagonalThreeBreakpoints) {
  const auto inst = example_diagonal(3);
  const auto p = solve_profile(inst.cost, inst.mu, inst.nu);
  const std::vector<std::pair<Rational, Rational>> expected{{R(0), R(0)}, {R(2, 3), R(0)}, {R(1), R(1)}};
  EXPECT_EQ(points(p), expected);
  EXPECT_EQ(p.maxMass(), R(1));
}

TEST(Profile, ZeroCostIsFlatUpToSmallerMass) {
  const auto c = CostMatrix<Rational>::constant(2, 3, R(0));
  const auto mu = make_marginal<Rational>(Vector<Rational>{{R(1, 4), R(1, 4)}});
  const auto p = solve_profile(c, mu, uniform_marginal<Rational>(3));
  const std::vector<std::pair<Rational, Rational>> expected{{R(0), R(0)}, {R(1, 2), R(0)}};
  EXPECT_EQ(points(p), expected);
}

TEST(Profile, AllInfiniteHasOnlyOrigin) {
  const auto c = CostMatrix<Rational>::constant(3, 3, Cost::infinity());
  const auto u = uniform_marginal<Rational>(3);
  const auto p = solve_profile(c, u, u);
  EXPECT_EQ(p.breakpoints().size(), 1u);
  EXPECT_EQ(p.maxMass(), R(0));
}

TEST(EvaluateProfile, DiagonalThree) {
  const auto inst = example_diagonal(3);
  const auto p = solve_profile(inst.cost, inst.mu, inst.nu);
  EXPECT_EQ(evaluate_profile(p, R(2, 3)), Cost(R(0)));
  EXPECT_EQ(evaluate_profile(p, R(1)), Cost(R(1)));
  EXPECT_EQ(evaluate_profile(p, R(5, 6)), Cost(R(1, 2)));
  EXPECT_TRUE(evaluate_profile(p, R(101, 100)).isPosInf());
  EXPECT_EQ(codeOf([&] { evaluate_profile(p, R(-1, 10)); }), ErrorCode::NegativeMass);
}

TEST(OptimalCoupling, ZeroMassIsEmpty) {
  const auto inst = example_diagonal(3);
  EXPECT_TRUE(optimal_coupling_at(inst.cost, inst.mu, inst.nu, R(0)).empty());
}

TEST(OptimalCoupling, TwoThirdsSitsBelowDiagonalAtZeroCost) {
  const auto inst = example_diagonal(3);
  const auto pi = optimal_coupling_at(inst.cost, inst.mu, inst.nu, R(2, 3));
  EXPECT_EQ(pi.mass(), R(2, 3));
  EXPECT_EQ(cost_of(inst.cost, pi), Cost(R(0)));
  for (const auto& [cell, mass] : pi.entries()) EXPECT_LT(cell.second, cell.first);
  EXPECT_TRUE(pi.isPartialCouplingOf(inst.mu, inst.nu));
}

TEST(OptimalCoupling, FullMassIsTheDiagonal) {
  const auto inst = example_diagonal(3);
  const auto pi = optimal_coupling_at(inst.cost, inst.mu, inst.nu, R(1));
  const auto diag = Coupling<Rational>::fromDense(Matrix<Rational>(Vector<Rational>::Constant(3, R(1, 3)).asDiagonal()));
  EXPECT_EQ(pi, diag);
  EXPECT_EQ(cost_of(inst.cost, pi), Cost(R(1)));
}

TEST(OptimalCoupling, InfeasibleMass) {
  const auto inst = example_diagonal(3);
  EXPECT_EQ(codeOf([&] { optimal_coupling_at(inst.cost, inst.mu, inst.nu, R(11, 10)); }), ErrorCode::InfeasibleMass);
}

TEST(OptimalCoupling, CostMatchesProfileAtInteriorMasses) {
  testing::Draws d(11);
  for (int trial = 0; trial < 40; ++trial) {
    const auto inst = testing::randomInstance(d, 5, 25, MarginalKind::Random);
    const auto p = solve_profile(inst.cost, inst.mu, inst.nu);
    for (int k = 0; k <= 6; ++k) {
      const Rational m = p.maxMass() * R(k, 6);
      const auto pi = optimal_coupling_at(inst.cost, inst.mu, inst.nu, m);
      EXPECT_EQ(pi.mass(), m);
      EXPECT_EQ(cost_of(inst.cost, pi), evaluate_profile(p, m));
    }
  }
}

TEST(Profile, CertificatesConvexityAndSlackness) {
  testing::Draws d(5);
  for (int trial = 0; trial < 60; ++trial) {
    const auto inst = testing::randomInstance(d, 6, 30, MarginalKind::RandomWithZeros);
    const auto sol = solve_flow(inst.cost, inst.mu, inst.nu);
    const auto& bps = sol.profile.breakpoints();
    for (std::size_t k = 1; k < bps.size(); ++k) {
      EXPECT_LT(bps[k - 1].mass, bps[k].mass);
      EXPECT_LE(bps[k - 1].cost, bps[k].cost);
    }
    const auto slopes = sol.profile.slopes();
    for (std::size_t k = 1; k < slopes.size(); ++k) EXPECT_LT(slopes[k - 1], slopes[k]);
    for (const auto& bp : bps) EXPECT_TRUE(reducedCostsNonnegative(inst.cost, bp.potentials));
    for (const auto& [cell, mass] : sol.coupling.entries())
      EXPECT_EQ(inst.cost.value(cell.first, cell.second), sol.potentials.u(cell.first) + sol.potentials.v(cell.second));
    EXPECT_EQ(sol.mass, sol.profile.maxMass());
    EXPECT_TRUE(sol.saturated);
  }
}

TEST(Profile, RemovingACellNeverLowersTheProfile) {
  testing::Draws d(17);
  for (int trial = 0; trial < 40; ++trial) {
    const auto inst = testing::randomInstance(d, 5, 10, MarginalKind::Random);
    auto restricted = inst.cost;
    const int i = d.between(0, inst.cost.rows() - 1), j = d.between(0, inst.cost.cols() - 1);
    restricted.set(i, j, Cost::infinity());
    const auto before = solve_profile(inst.cost, inst.mu, inst.nu);
    const auto after = solve_profile(restricted, inst.mu, inst.nu);
    for (int k = 0; k <= 8; ++k) {
      const Rational m = before.maxMass() * R(k, 8);
      EXPECT_LE(evaluate_profile(before, m), evaluate_profile(after, m));
    }
  }
}

TEST(Profile, DeterministicAcrossRuns) {
  const auto inst = random_instance(6, 5, 0.2, MarginalKind::Random, 99);
  const auto a = solve_flow(inst.cost, inst.mu, inst.nu);
  const auto b = solve_flow(inst.cost, inst.mu, inst.nu);
  EXPECT_EQ(points(a.profile), points(b.profile));
  EXPECT_EQ(a.coupling, b.coupling);
}

TEST(Profile, FloatModeTracksExact) {
  testing::Draws d(23);
  for (int trial = 0; trial < 30; ++trial) {
    const auto inst = testing::randomInstance(d, 6, 20, MarginalKind::Random);
    const auto exact = solve_profile(inst.cost, inst.mu, inst.nu);
    const auto asDouble = inst.cast<double>();
    const auto approx = solve_profile(asDouble.cost, asDouble.mu, asDouble.nu);
    for (int k = 0; k <= 4; ++k) {
      const Rational m = exact.maxMass() * R(k, 4);
      const auto e = evaluate_profile(exact, m);
      const auto a = evaluate_profile(approx, m.convert_to<double>());
      ASSERT_EQ(e.isFinite(), a.isFinite());
      if (e.isFinite()) EXPECT_NEAR(e.value().convert_to<double>(), a.value(), 1e-9);
    }
  }
}

}  // namespace
}  // namespace kantgap
