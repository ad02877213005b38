// Oracle values pinned first; the solver suites compare against these.

#include <gtest/gtest.h>

#include "kantgap/oracle.hpp"
#include "kantgap/scenarios.hpp"
#include "support.hpp"

namespace kantgap {
namespace {

using oracle::BrutePrimal;
using oracle::brute_capacity;
using oracle::brute_cover;
using oracle::brute_primal;

using testing::R;

TEST(Oracle, DiagonalThreeAcrossMasses) {
  const auto inst = example_diagonal(3);
  const BrutePrimal brute(inst.cost, inst.mu, inst.nu);
  EXPECT_EQ(brute.at(R(0)), ExtendedCost<Rational>(R(0)));
  EXPECT_EQ(brute.at(R(1, 3)), ExtendedCost<Rational>(R(0)));
  EXPECT_EQ(brute.at(R(2, 3)), ExtendedCost<Rational>(R(0)));
  EXPECT_EQ(brute.at(R(5, 6)), ExtendedCost<Rational>(R(1, 2)));
  EXPECT_EQ(brute.at(R(1)), ExtendedCost<Rational>(R(1)));
  EXPECT_TRUE(brute.at(R(101, 100)).isPosInf());
}

TEST(Oracle, DiagonalThreeTruncatedAtTwo) {
  const auto inst = example_diagonal(3);
  EXPECT_EQ(brute_primal(truncate_cost(inst.cost, R(2)), inst.mu, inst.nu, R(1)), ExtendedCost<Rational>(R(2, 3)));
  EXPECT_EQ(brute_primal(truncate_cost(inst.cost, R(3)), inst.mu, inst.nu, R(1)), ExtendedCost<Rational>(R(1)));
  EXPECT_EQ(brute_primal(truncate_cost(inst.cost, R(100)), inst.mu, inst.nu, R(1)), ExtendedCost<Rational>(R(1)));
}

TEST(Oracle, ZeroCostIsZeroAtEveryFeasibleMass) {
  const auto c = CostMatrix<Rational>::constant(3, 2, R(0));
  const auto mu = make_marginal<Rational>(Vector<Rational>{{R(1, 2), R(1, 4), R(1, 4)}});
  const auto nu = make_marginal<Rational>(Vector<Rational>{{R(1, 3), R(1, 3)}});
  const BrutePrimal brute(c, mu, nu);
  for (int k = 0; k <= 8; ++k) EXPECT_EQ(brute.at(R(k, 12)), ExtendedCost<Rational>(R(0))) << k;
  EXPECT_TRUE(brute.at(R(3, 4)).isPosInf());
}

TEST(Oracle, AllInfiniteShipsNothing) {
  const auto c = CostMatrix<Rational>::constant(2, 2, ExtendedCost<Rational>::infinity());
  const BrutePrimal brute(c, uniform_marginal<Rational>(2), uniform_marginal<Rational>(2));
  EXPECT_EQ(brute.at(R(0)), ExtendedCost<Rational>(R(0)));
  EXPECT_TRUE(brute.at(R(1, 100)).isPosInf());
}

TEST(Oracle, PrimalRejectsLargeInstances) {
  const auto inst = example_diagonal(5);
  try {
    BrutePrimal brute(inst.cost, inst.mu, inst.nu);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InstanceTooLarge);
  }
}

TEST(Oracle, CoverValues) {
  const auto u3 = uniform_marginal<Rational>(3);
  EXPECT_EQ(brute_cover(CellSet::diagonal(3), u3, u3), R(1));
  EXPECT_EQ(brute_cover(CellSet(3, 3), u3, u3), R(0));

  const auto mu = make_marginal<Rational>(Vector<Rational>{{R(1, 3), R(2, 3)}});
  const auto nu = make_marginal<Rational>(Vector<Rational>{{R(1, 2), R(1, 2)}});
  EXPECT_EQ(brute_cover(CellSet::fromCells(2, 2, {{0, 1}}), mu, nu), R(1, 3));
}

TEST(Oracle, CoverOfInfiniteCellsOnDiagonalExample) {
  const auto inst = example_diagonal(3);
  EXPECT_EQ(brute_cover(CellSet(!inst.cost.finiteMask()), inst.mu, inst.nu), R(2, 3));
}

TEST(Oracle, CapacityValues) {
  const auto u3 = uniform_marginal<Rational>(3);
  EXPECT_EQ(brute_capacity(CellSet::diagonal(3), u3), R(1, 2));
  EXPECT_EQ(brute_capacity(CellSet::full(3, 3), u3), R(1, 2));
  EXPECT_EQ(brute_capacity(CellSet(3, 3), u3), R(0));
}

}  // namespace
}  // namespace kantgap
