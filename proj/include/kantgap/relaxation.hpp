#pragma once

#include <optional>

#include "kantgap/measure.hpp"

namespace kantgap {

/// Densities f = p_X(pi)/mu and g = p_Y(pi)/nu, defined on atoms of positive
/// weight. Zero-weight atoms get density 1 so they drop out of |f - 1|.
template <class Scalar>
std::pair<Vector<Scalar>, Vector<Scalar>> coupling_densities(const Coupling<Scalar>& pi, const Marginal<Scalar>& mu,
                                                             const Marginal<Scalar>& nu) {
  if (pi.rows() != mu.size() || pi.cols() != nu.size())
    throw Error(ErrorCode::DimensionMismatch, "coupling shape does not match the marginals");
  auto density = [](const Vector<Scalar>& sums, const Marginal<Scalar>& m, const char* side) {
    Vector<Scalar> d(m.size());
    for (int i = 0; i < m.size(); ++i) {
      if (isZero<Scalar>(m(i))) {
        if (isPositive<Scalar>(sums(i)))
          throw Error(ErrorCode::DensityUndefined,
                      std::string("coupling charges a zero-weight atom on the ") + side + " side");
        d(i) = Scalar(1);
      } else {
        d(i) = sums(i) / m(i);
      }
    }
    return d;
  };
  return {density(pi.rowSums(), mu, "X"), density(pi.colSums(), nu, "Y")};
}

/// ||d - 1||_{L1(m)}.
template <class Scalar>
Scalar density_deviation(const Vector<Scalar>& d, const Marginal<Scalar>& m) {
  using std::abs;
  Scalar total(0);
  for (int i = 0; i < m.size(); ++i) total += abs(Scalar(d(i) - Scalar(1))) * m(i);
  return total;
}

/// sum_x m(x) d(x) |d(x) - 1|: the mean of |d - 1| under a plan with
/// marginal d*m, times the plan's mass.
template <class Scalar>
Scalar averaged_deviation(const Vector<Scalar>& d, const Marginal<Scalar>& m) {
  using std::abs;
  Scalar total(0);
  for (int i = 0; i < m.size(); ++i) total += abs(Scalar(d(i) - Scalar(1))) * d(i) * m(i);
  return total;
}

/// mass * F(devX/mass, devY/mass), F(a,b) = 1/((1+a)(1+b)). F is convex, so
/// with the averaged deviations this bounds the shrunk mass from below.
/// With the plain L1 deviations it does not: d = (3/5) against mu = (1) and
/// d = (1/9, 5) against nu = (9/10, 1/10) is a counterexample.
template <class Scalar>
Scalar jensen_mass_bound(const Scalar& mass, const Scalar& devX, const Scalar& devY) {
  if (isZero<Scalar>(mass)) return Scalar(0);
  return mass / ((Scalar(1) + devX / mass) * (Scalar(1) + devY / mass));
}

/// Reweights pi by 1/((1+|f(x)-1|)(1+|g(y)-1|)). The result is dominated by
/// pi, has marginals below mu and nu, and keeps at least the Jensen bound
/// with averaged deviations. All three facts are re-checked on every call.
template <class Scalar>
Coupling<Scalar> shrink_to_partial(const Coupling<Scalar>& pi, const Marginal<Scalar>& mu,
                                   const Marginal<Scalar>& nu) {
  using std::abs;
  const auto [f, g] = coupling_densities(pi, mu, nu);
  std::map<Cell, Scalar> shrunk;
  for (const auto& [cell, mass] : pi.entries()) {
    const Scalar factor = Scalar(1) / ((Scalar(1) + abs(Scalar(f(cell.first) - 1))) *
                                       (Scalar(1) + abs(Scalar(g(cell.second) - 1))));
    shrunk.emplace(cell, mass * factor);
  }
  Coupling<Scalar> out(pi.rows(), pi.cols(), std::move(shrunk));

  for (const auto& [cell, mass] : out.entries())
    if (!approxLeq<Scalar>(mass, pi.at(cell.first, cell.second)))
      throw std::logic_error("shrink_to_partial: output not dominated by the input");
  if (!out.isPartialCouplingOf(mu, nu))
    throw std::logic_error("shrink_to_partial: marginals exceed mu or nu");
  const Scalar bound = jensen_mass_bound(pi.mass(), averaged_deviation(f, mu), averaged_deviation(g, nu));
  if (!approxLeq<Scalar>(bound, out.mass()))
    throw std::logic_error("shrink_to_partial: Jensen mass bound violated");
  return out;
}

/// pi = pi_eps + eps^{-1} (mu - mu_eps) ⊗ (nu - nu_eps), where mu_eps and
/// nu_eps are the marginals of pi_eps and eps is the common deficit.
template <class Scalar>
Coupling<Scalar> complete_partial(const Coupling<Scalar>& partial, const Marginal<Scalar>& mu,
                                  const Marginal<Scalar>& nu) {
  if (!partial.isPartialCouplingOf(mu, nu))
    throw Error(ErrorCode::PreconditionViolated, "input is not a partial coupling of (mu, nu)");
  const Scalar deficitX = mu.mass() - partial.mass();
  const Scalar deficitY = nu.mass() - partial.mass();
  if (!approxEq<Scalar>(deficitX, deficitY))
    throw Error(ErrorCode::DeficitMismatch, "mu and nu leave different untransported mass");
  if (isZero<Scalar>(deficitX)) return partial;

  const Vector<Scalar> restX = (mu.weights() - partial.rowSums()).cwiseMax(Scalar(0));
  const Vector<Scalar> restY = (nu.weights() - partial.colSums()).cwiseMax(Scalar(0));
  Matrix<Scalar> dense = partial.toDense() + (restX * restY.transpose()) / deficitX;
  Coupling<Scalar> out = Coupling<Scalar>::fromDense(dense);
  if (ScalarTraits<Scalar>::exact && !out.isCouplingOf(mu, nu))
    throw std::logic_error("complete_partial: result is not a coupling of (mu, nu)");
  return out;
}

/// Completion for a cost bounded by `bound`, asserting
/// cost(pi) <= cost(pi_eps) + eps * bound.
template <class Scalar>
Coupling<Scalar> complete_partial(const Coupling<Scalar>& partial, const Marginal<Scalar>& mu,
                                  const Marginal<Scalar>& nu, const CostMatrix<Scalar>& c, const Scalar& bound) {
  for (int i = 0; i < c.rows(); ++i)
    for (int j = 0; j < c.cols(); ++j)
      if (!c.isFinite(i, j) || c.value(i, j) > bound)
        throw Error(ErrorCode::PreconditionViolated, "cost exceeds the supplied bound");
  Coupling<Scalar> full = complete_partial(partial, mu, nu);
  const Scalar eps = mu.mass() - partial.mass();
  const auto before = cost_of(c, partial);
  const auto after = cost_of(c, full);
  if (!approxLeq(after, before + ExtendedCost<Scalar>(eps * bound)))
    throw std::logic_error("complete_partial: completion cost exceeds cost + eps * M");
  return full;
}

}  // namespace kantgap
