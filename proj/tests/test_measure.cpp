#include <gtest/gtest.h>

#include "kantgap/measure.hpp"
#include "kantgap/scenarios.hpp"
#include "support.hpp"

namespace kantgap {
namespace {

using testing::R;
using testing::codeOf;
using Cost = ExtendedCost<Rational>;

TEST(DiscreteSpace, ValidatesSizeAndLabels) {
  EXPECT_EQ(codeOf([] { DiscreteSpace s(0); }), ErrorCode::InvalidSpace);
  EXPECT_EQ(codeOf([] { DiscreteSpace s(2, {"a", "a"}); }), ErrorCode::InvalidSpace);
  EXPECT_EQ(codeOf([] { DiscreteSpace s(2, {"a"}); }), ErrorCode::LengthMismatch);
  const DiscreteSpace s(2, {"left", "right"});
  EXPECT_EQ(s.label(1), "right");
  EXPECT_EQ(DiscreteSpace(3).label(2), "2");
}

TEST(Marginal, UniformIsProbability) {
  const auto m = make_marginal<Rational>(DiscreteSpace(3), Vector<Rational>{{R(1, 3), R(1, 3), R(1, 3)}});
  EXPECT_EQ(m.mass(), R(1));
  EXPECT_TRUE(m.isProbability());
}

TEST(Marginal, SubProbability) {
  const auto m = make_marginal<Rational>(DiscreteSpace(3), Vector<Rational>{{R(1, 3), R(1, 3), R(0)}});
  EXPECT_EQ(m.mass(), R(2, 3));
  EXPECT_FALSE(m.isProbability());
  EXPECT_TRUE(m.dominatedBy(uniform_marginal<Rational>(3)));
}

TEST(Marginal, RejectsNegativeWeightAndLengthMismatch) {
  EXPECT_EQ(codeOf([] { make_marginal<Rational>(DiscreteSpace(2), Vector<Rational>{{R(-1), R(2)}}); }),
            ErrorCode::NegativeWeight);
  EXPECT_EQ(codeOf([] { make_marginal<Rational>(DiscreteSpace(3), Vector<Rational>{{R(1), R(2)}}); }),
            ErrorCode::LengthMismatch);
}

TEST(Marginal, CastToDouble) {
  const auto m = uniform_marginal<Rational>(4).cast<double>();
  EXPECT_DOUBLE_EQ(m(2), 0.25);
  EXPECT_TRUE(m.isProbability());
}

TEST(Extended, ArithmeticAndOrder) {
  const Cost inf = Cost::infinity();
  EXPECT_TRUE((Cost(R(1)) + inf).isPosInf());
  EXPECT_LT(Cost(R(5)), inf);
  EXPECT_LT(Cost::negInfinity(), Cost(R(-5)));
  EXPECT_EQ(inf.scaledBy(R(0)), Cost(R(0)));
  EXPECT_EQ(Cost::negInfinity().scaledBy(R(0)), Cost(R(0)));
  EXPECT_TRUE(inf.scaledBy(R(1, 2)).isPosInf());
  EXPECT_THROW(inf + Cost::negInfinity(), std::domain_error);
  EXPECT_EQ(inf.toString(), "inf");
  EXPECT_EQ(Cost::negInfinity().toString(), "-inf");
  EXPECT_EQ(Cost(R(2, 4)).toString(), "1/2");
}

TEST(CostMatrix, SetRejectsNegativeAndMinusInfinity) {
  CostMatrix<Rational> c(1, 1);
  EXPECT_THROW(c.set(0, 0, R(-1)), Error);
  EXPECT_THROW(c.set(0, 0, Cost::negInfinity()), Error);
  c.set(0, 0, Cost::infinity());
  EXPECT_FALSE(c.isFinite(0, 0));
  EXPECT_TRUE(c.anyInfinite());
  EXPECT_FALSE(c.maxFiniteValue().has_value());
}

TEST(CostOf, ZeroCostGivesZero) {
  const auto c = CostMatrix<Rational>::constant(2, 3, R(0));
  const auto pi = product_coupling(uniform_marginal<Rational>(2), uniform_marginal<Rational>(3), R(1));
  EXPECT_EQ(cost_of(c, pi), Cost(R(0)));
}

TEST(CostOf, DiagonalCouplingOnDiagonalExample) {
  const auto inst = example_diagonal(3);
  const auto pi = Coupling<Rational>::fromDense(Matrix<Rational>(Vector<Rational>::Constant(3, R(1, 3)).asDiagonal()));
  EXPECT_EQ(cost_of(inst.cost, pi), Cost(R(1)));
}

TEST(CostOf, PositiveMassOnInfiniteCellIsInfinite) {
  const auto inst = example_diagonal(3);
  const auto pi = Coupling<Rational>(3, 3, {{{0, 2}, R(1, 10)}});
  EXPECT_TRUE(cost_of(inst.cost, pi).isPosInf());
}

TEST(CostOf, ZeroMassOnInfiniteCellContributesNothing) {
  const auto inst = example_diagonal(2);
  Matrix<Rational> dense = Matrix<Rational>::Zero(2, 2);
  dense(1, 0) = R(1, 2);
  const auto pi = Coupling<Rational>::fromDense(dense);
  EXPECT_EQ(pi.entries().size(), 1u);
  EXPECT_EQ(cost_of(inst.cost, pi), Cost(R(0)));
}

TEST(CostOf, ShapeMismatch) {
  EXPECT_EQ(codeOf([] { cost_of(CostMatrix<Rational>(2, 2), Coupling<Rational>(2, 3)); }),
            ErrorCode::DimensionMismatch);
}

TEST(Coupling, DropsZerosAndRejectsNegatives) {
  const auto pi = Coupling<Rational>(2, 2, {{{0, 0}, R(0)}, {{1, 1}, R(1, 2)}});
  EXPECT_EQ(pi.entries().size(), 1u);
  EXPECT_EQ(pi.mass(), R(1, 2));
  EXPECT_THROW((Coupling<Rational>(2, 2, {{{0, 0}, R(-1)}})), Error);
}

TEST(CouplingMarginals, ProductAndDiagonalAndEmpty) {
  const auto mu = make_marginal<Rational>(Vector<Rational>{{R(1, 4), R(3, 4)}});
  const auto nu = make_marginal<Rational>(Vector<Rational>{{R(1, 2), R(1, 6), R(1, 3)}});
  const auto [a, b] = coupling_marginals(product_coupling(mu, nu, R(1)));
  EXPECT_EQ(a, mu);
  EXPECT_EQ(b, nu);

  const auto diag =
      Coupling<Rational>::fromDense(Matrix<Rational>(Vector<Rational>::Constant(3, R(1, 3)).asDiagonal()));
  const auto [d1, d2] = coupling_marginals(diag);
  EXPECT_EQ(d1, uniform_marginal<Rational>(3));
  EXPECT_EQ(d2, uniform_marginal<Rational>(3));

  const auto [z1, z2] = coupling_marginals(Coupling<Rational>(2, 3));
  EXPECT_EQ(z1, zero_marginal<Rational>(2));
  EXPECT_EQ(z2, zero_marginal<Rational>(3));
}

TEST(ProductCoupling, EntriesAndMass) {
  const auto u2 = uniform_marginal<Rational>(2);
  const auto pi = product_coupling(u2, u2, R(1));
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) EXPECT_EQ(pi.at(i, j), R(1, 4));
  EXPECT_EQ(pi.mass(), R(1));
  EXPECT_TRUE(product_coupling(u2, u2, R(0)).empty());
  EXPECT_EQ(codeOf([&] { product_coupling(u2, u2, R(-1)); }), ErrorCode::NegativeScale);
}

TEST(ProductCoupling, DeficitCompletionHasMassEpsilon) {
  const Rational eps = R(1, 5);
  const auto a = make_marginal<Rational>(Vector<Rational>{{R(1, 10), R(1, 10)}});
  const auto b = make_marginal<Rational>(Vector<Rational>{{R(1, 20), R(3, 20)}});
  EXPECT_EQ(product_coupling(a, b, Rational(1 / eps)).mass(), eps);
}

TEST(ProductCoupling, MarginalsScaleByOtherMass) {
  const auto a = make_marginal<Rational>(Vector<Rational>{{R(1, 4), R(1, 4)}});
  const auto b = make_marginal<Rational>(Vector<Rational>{{R(1, 3), R(1, 6), R(1, 6)}});
  const Rational s = R(3, 2);
  const auto [x, y] = coupling_marginals(product_coupling(a, b, s));
  EXPECT_EQ(x.weights(), Vector<Rational>(s * b.mass() * a.weights()));
  EXPECT_EQ(y.weights(), Vector<Rational>(s * a.mass() * b.weights()));
}

TEST(TruncateCost, IdempotentConstantAndZero) {
  const auto inst = example_diagonal(3);
  EXPECT_EQ(truncate_cost(inst.cost, inst.cost), inst.cost);
  const auto two = truncate_cost(inst.cost, R(2));
  EXPECT_EQ(two(0, 1), Cost(R(2)));
  EXPECT_EQ(two(0, 2), Cost(R(2)));
  EXPECT_EQ(two(1, 2), Cost(R(2)));
  EXPECT_EQ(two(1, 1), Cost(R(1)));
  EXPECT_EQ(two(2, 0), Cost(R(0)));
  EXPECT_EQ(truncate_cost(inst.cost, R(0)), CostMatrix<Rational>::constant(3, 3, R(0)));
}

TEST(TruncateCost, ShapeMismatch) {
  EXPECT_EQ(codeOf([] { truncate_cost(CostMatrix<Rational>(2, 2), CostMatrix<Rational>(3, 2)); }),
            ErrorCode::DimensionMismatch);
}

}  // namespace
}  // namespace kantgap
