#include "kantgap/scenarios.hpp"

#include <random>

namespace kantgap {

namespace {

// Raw mt19937_64 output is fully specified by the standard, unlike the
// std:: distributions, so instances are identical across toolchains.
class SeededDraws {
 public:
  explicit SeededDraws(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t below(std::uint64_t bound) { return engine_() % bound; }
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

Vector<Rational> drawWeights(int n, MarginalKind kind, SeededDraws& draws) {
  Vector<Rational> w(n);
  if (kind == MarginalKind::Uniform) {
    w.setConstant(Rational(1, n));
    return w;
  }
  for (int i = 0; i < n; ++i) {
    const bool zero = kind == MarginalKind::RandomWithZeros && draws.below(4) == 0;
    w(i) = zero ? Rational(0) : Rational(static_cast<long>(1 + draws.below(16)));
  }
  if (w.sum() == 0) w(0) = Rational(1);
  return w / w.sum();
}

}  // namespace

MarginalKind parseMarginalKind(const std::string& name) {
  if (name == "uniform") return MarginalKind::Uniform;
  if (name == "random") return MarginalKind::Random;
  if (name == "random-zeros") return MarginalKind::RandomWithZeros;
  throw Error(ErrorCode::InvalidArgument, "unknown marginal kind '" + name + "'");
}

Instance<Rational> example_diagonal(int n) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "diagonal example needs n >= 1");
  CostMatrix<Rational> c(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (j < i) c.set(i, j, Rational(0));
      else if (j == i) c.set(i, j, Rational(1));
      else c.set(i, j, ExtendedCost<Rational>::infinity());
    }
  return {c, uniform_marginal<Rational>(n), uniform_marginal<Rational>(n)};
}

Instance<Rational> random_instance(int nx, int ny, double infDensity, MarginalKind marginals, std::uint64_t seed) {
  if (nx < 1 || ny < 1) throw Error(ErrorCode::InvalidArgument, "instance sizes must be >= 1");
  if (!(infDensity >= 0.0 && infDensity <= 1.0))
    throw Error(ErrorCode::InvalidArgument, "infDensity must lie in [0, 1]");
  SeededDraws draws(seed);
  CostMatrix<Rational> c(nx, ny);
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j) {
      if (draws.unit() < infDensity) {
        c.set(i, j, ExtendedCost<Rational>::infinity());
        continue;
      }
      const long denominator = 1L << draws.below(7);
      const long numerator = static_cast<long>(draws.below(static_cast<std::uint64_t>(8 * denominator + 1)));
      c.set(i, j, Rational(numerator, denominator));
    }
  Vector<Rational> mu = drawWeights(nx, marginals, draws);
  Vector<Rational> nu = drawWeights(ny, marginals, draws);
  return {c, make_marginal<Rational>(mu), make_marginal<Rational>(nu)};
}

Instance<Rational> closed_inf_band(int n, int bandwidth) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "band instance needs n >= 1");
  if (bandwidth < 0 || bandwidth >= n) throw Error(ErrorCode::InvalidArgument, "bandwidth must lie in [0, n)");
  CostMatrix<Rational> c(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (j - i >= 1 && j - i <= bandwidth) c.set(i, j, ExtendedCost<Rational>::infinity());
  return {c, uniform_marginal<Rational>(n), uniform_marginal<Rational>(n)};
}

}  // namespace kantgap
