#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "kantgap/flow.hpp"

namespace kantgap {

/// P: cheapest full coupling, i.e. the profile at mass 1. Infinite iff no
/// finite-cost coupling exists.
template <class Scalar>
ExtendedCost<Scalar> primal_value(const CostMatrix<Scalar>& c, const Marginal<Scalar>& mu,
                                  const Marginal<Scalar>& nu) {
  requireProbability(mu, nu);
  return evaluate_profile(solve_profile(c, mu, nu), Scalar(1));
}

/// P^eps: cheapest partial coupling of mass at least 1 - eps. Costs are
/// nonnegative, so the profile is nondecreasing and the minimum over
/// mass >= 1 - eps sits at mass exactly 1 - eps.
template <class Scalar>
ExtendedCost<Scalar> partial_value(const CostMatrix<Scalar>& c, const Marginal<Scalar>& mu,
                                   const Marginal<Scalar>& nu, const Scalar& eps) {
  if (eps < 0 || eps > 1) throw Error(ErrorCode::EpsilonOutOfRange, "epsilon must lie in [0, 1]");
  return evaluate_profile(solve_profile(c, mu, nu), Scalar(1) - eps);
}

/// P^rel as the left limit of the profile at mass 1. The profile is
/// continuous on [0, maxMass], so on a finite space this always coincides
/// with P; a gap only appears along refinement families (see
/// refinement_study).
template <class Scalar>
ExtendedCost<Scalar> relaxed_value(const CostMatrix<Scalar>& c, const Marginal<Scalar>& mu,
                                   const Marginal<Scalar>& nu) {
  requireProbability(mu, nu);
  const TransportProfile<Scalar> profile = solve_profile(c, mu, nu);
  if (approxLess<Scalar>(profile.maxMass(), Scalar(1))) return ExtendedCost<Scalar>::infinity();
  return evaluate_profile(profile, Scalar(1));
}

/// Phi(f, g): cheapest coupling between the rescaled marginals f*mu and g*nu.
template <class Scalar>
ExtendedCost<Scalar> phi_value(const CostMatrix<Scalar>& c, const Marginal<Scalar>& mu, const Marginal<Scalar>& nu,
                               const Vector<Scalar>& f, const Vector<Scalar>& g) {
  requireShape(c, mu, nu);
  if (f.size() != mu.size() || g.size() != nu.size())
    throw Error(ErrorCode::LengthMismatch, "density length differs from its space");
  for (Eigen::Index i = 0; i < f.size(); ++i)
    if (f(i) < 0) throw Error(ErrorCode::NegativeWeight, "density f must be >= 0");
  for (Eigen::Index j = 0; j < g.size(); ++j)
    if (g(j) < 0) throw Error(ErrorCode::NegativeWeight, "density g must be >= 0");
  const Marginal<Scalar> fmu = make_marginal<Scalar>(mu.space(), f.cwiseProduct(mu.weights()));
  const Marginal<Scalar> gnu = make_marginal<Scalar>(nu.space(), g.cwiseProduct(nu.weights()));
  if (!approxEq<Scalar>(fmu.mass(), gnu.mass()))
    throw Error(ErrorCode::NotInV, "f*mu and g*nu carry different mass");
  return evaluate_profile(solve_profile(c, fmu, gnu), fmu.mass());
}

/// Truncation levels must be finite and nondecreasing cellwise.
template <class Scalar>
void requireAscendingLevels(const std::vector<CostMatrix<Scalar>>& levels) {
  for (std::size_t n = 0; n < levels.size(); ++n) {
    const auto& h = levels[n];
    if (h.anyInfinite()) throw Error(ErrorCode::InfiniteLevel, "truncation level " + std::to_string(n) + " is not finite");
    if (n == 0) continue;
    const auto& prev = levels[n - 1];
    if (prev.rows() != h.rows() || prev.cols() != h.cols())
      throw Error(ErrorCode::DimensionMismatch, "truncation levels differ in shape");
    for (int i = 0; i < h.rows(); ++i)
      for (int j = 0; j < h.cols(); ++j)
        if (h.value(i, j) < prev.value(i, j))
          throw Error(ErrorCode::NonMonotoneLevels, "truncation level " + std::to_string(n) + " decreases");
  }
}

template <class Scalar>
struct TruncationPoint {
  std::size_t level;
  ExtendedCost<Scalar> value;
};

/// P_{c∧h_n} for an ascending family h_1 <= h_2 <= ... of finite levels.
template <class Scalar>
std::vector<TruncationPoint<Scalar>> truncation_sweep(const CostMatrix<Scalar>& c, const Marginal<Scalar>& mu,
                                                      const Marginal<Scalar>& nu,
                                                      const std::vector<CostMatrix<Scalar>>& levels) {
  requireAscendingLevels(levels);
  std::vector<TruncationPoint<Scalar>> out;
  for (std::size_t n = 0; n < levels.size(); ++n)
    out.push_back({n, primal_value(truncate_cost(c, levels[n]), mu, nu)});
  return out;
}

/// Constant-level convenience: h_n ≡ M_n.
template <class Scalar>
std::vector<TruncationPoint<Scalar>> truncation_sweep(const CostMatrix<Scalar>& c, const Marginal<Scalar>& mu,
                                                      const Marginal<Scalar>& nu, const std::vector<Scalar>& levels) {
  std::vector<CostMatrix<Scalar>> matrices;
  for (const auto& m : levels) {
    if (m < 0) throw Error(ErrorCode::InvalidArgument, "truncation level must be >= 0");
    matrices.push_back(CostMatrix<Scalar>::constant(c.rows(), c.cols(), m));
  }
  return truncation_sweep(c, mu, nu, matrices);
}

template <class Scalar>
struct PrimalReport {
  ExtendedCost<Scalar> P;
  std::vector<std::pair<Scalar, ExtendedCost<Scalar>>> partials;
  ExtendedCost<Scalar> relaxed;
  Scalar maxMass;
  std::optional<Coupling<Scalar>> witness;
};

/// All primal quantities from a single profile solve.
template <class Scalar>
PrimalReport<Scalar> primal_report(const CostMatrix<Scalar>& c, const Marginal<Scalar>& mu,
                                   const Marginal<Scalar>& nu, const std::vector<Scalar>& epsilons) {
  requireProbability(mu, nu);
  const FlowSolution<Scalar> sol = solve_flow(c, mu, nu);
  const auto& profile = sol.profile;
  PrimalReport<Scalar> report{evaluate_profile(profile, Scalar(1)), {}, ExtendedCost<Scalar>::infinity(),
                              profile.maxMass(), std::nullopt};
  for (const auto& eps : epsilons) {
    if (eps < 0 || eps > 1) throw Error(ErrorCode::EpsilonOutOfRange, "epsilon must lie in [0, 1]");
    report.partials.emplace_back(eps, evaluate_profile(profile, Scalar(1) - eps));
  }
  if (report.P.isFinite()) {
    report.relaxed = report.P;
    report.witness = sol.coupling;
  }
  return report;
}

}  // namespace kantgap
