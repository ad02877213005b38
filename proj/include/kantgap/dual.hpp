#pragma once

#include <map>
#include <optional>
#include <vector>

#include "kantgap/primal.hpp"
#include "kantgap/transport_lp.hpp"

namespace kantgap {

template <class Scalar>
using PotentialVector = std::vector<Extended<Scalar>>;

/// Potentials (phi, psi) with values in [-inf, inf), their objective
/// sum phi*mu + sum psi*nu (with (-inf)*0 = 0) and feasibility against the
/// cost they were checked with.
template <class Scalar>
struct DualPair {
  PotentialVector<Scalar> phi;
  PotentialVector<Scalar> psi;
  Extended<Scalar> objective;
  bool feasible = false;
};

template <class Scalar>
Extended<Scalar> dual_objective(const PotentialVector<Scalar>& phi, const PotentialVector<Scalar>& psi,
                                const Marginal<Scalar>& mu, const Marginal<Scalar>& nu) {
  if (static_cast<int>(phi.size()) != mu.size() || static_cast<int>(psi.size()) != nu.size())
    throw Error(ErrorCode::LengthMismatch, "potential length differs from its marginal");
  Extended<Scalar> total(Scalar(0));
  for (int i = 0; i < mu.size(); ++i) total = total + phi[i].scaledBy(mu(i));
  for (int j = 0; j < nu.size(); ++j) total = total + psi[j].scaledBy(nu(j));
  return total;
}

struct FeasibilityReport {
  bool feasible = true;
  std::optional<Cell> violation;
};

/// Exhaustive check of phi(i) + psi(j) <= c(i,j). Infinite cells and -inf
/// potentials never violate. Reports the first violation in row-major order.
template <class Scalar>
FeasibilityReport verify_feasible(const PotentialVector<Scalar>& phi, const PotentialVector<Scalar>& psi,
                                  const CostMatrix<Scalar>& c) {
  if (static_cast<int>(phi.size()) != c.rows() || static_cast<int>(psi.size()) != c.cols())
    throw Error(ErrorCode::DimensionMismatch, "potentials do not match the cost matrix");
  for (int i = 0; i < c.rows(); ++i) {
    if (phi[i].isNegInf()) continue;
    for (int j = 0; j < c.cols(); ++j) {
      if (!c.isFinite(i, j) || psi[j].isNegInf()) continue;
      if (!approxLeq<Scalar>(phi[i].value() + psi[j].value(), c.value(i, j))) return {false, Cell{i, j}};
    }
  }
  return {};
}

template <class Scalar>
FeasibilityReport verify_feasible(const DualPair<Scalar>& pair, const CostMatrix<Scalar>& c) {
  return verify_feasible(pair.phi, pair.psi, c);
}

template <class Scalar>
DualPair<Scalar> make_dual_pair(PotentialVector<Scalar> phi, PotentialVector<Scalar> psi,
                                const CostMatrix<Scalar>& c, const Marginal<Scalar>& mu,
                                const Marginal<Scalar>& nu) {
  DualPair<Scalar> pair{std::move(phi), std::move(psi), Extended<Scalar>(Scalar(0)), false};
  pair.objective = dual_objective(pair.phi, pair.psi, mu, nu);
  pair.feasible = verify_feasible(pair, c).feasible;
  return pair;
}

/// Farkas certificate for an unbounded dual: dphi(i) + dpsi(j) <= 0 on every
/// finite cell while dphi*mu + dpsi*nu = gain > 0.
template <class Scalar>
struct DualRay {
  Vector<Scalar> dphi;
  Vector<Scalar> dpsi;
  Scalar gain;
};

template <class Scalar>
bool verify_ray(const DualRay<Scalar>& ray, const CostMatrix<Scalar>& c, const Marginal<Scalar>& mu,
                const Marginal<Scalar>& nu) {
  for (int i = 0; i < c.rows(); ++i)
    for (int j = 0; j < c.cols(); ++j)
      if (c.isFinite(i, j) && isPositive<Scalar>(ray.dphi(i) + ray.dpsi(j))) return false;
  const Scalar gain = ray.dphi.dot(mu.weights()) + ray.dpsi.dot(nu.weights());
  return approxEq<Scalar>(gain, ray.gain) && isPositive<Scalar>(gain);
}

template <class Scalar>
struct DualSolution {
  ExtendedCost<Scalar> value;
  DualPair<Scalar> pair;
  /// Optimal full coupling, complementary to `pair`, when D < inf.
  std::optional<Coupling<Scalar>> coupling;
  /// Improving ray when D = inf.
  std::optional<DualRay<Scalar>> ray;
};

namespace detail {

/// Zero-weight atoms get potential 0 when that keeps the pair feasible and
/// -inf otherwise. Neither choice moves the objective.
template <class Scalar>
void normalizeNullAtoms(PotentialVector<Scalar>& phi, PotentialVector<Scalar>& psi, const CostMatrix<Scalar>& c,
                        const Marginal<Scalar>& mu, const Marginal<Scalar>& nu) {
  for (int i = 0; i < mu.size(); ++i) {
    if (!isZero<Scalar>(mu(i))) continue;
    bool zeroFits = true;
    for (int j = 0; j < nu.size() && zeroFits; ++j)
      if (c.isFinite(i, j) && psi[j].isFinite() && !approxLeq<Scalar>(psi[j].value(), c.value(i, j)))
        zeroFits = false;
    phi[i] = zeroFits ? Extended<Scalar>(Scalar(0)) : Extended<Scalar>::negInfinity();
  }
  for (int j = 0; j < nu.size(); ++j) {
    if (!isZero<Scalar>(nu(j))) continue;
    bool zeroFits = true;
    for (int i = 0; i < mu.size() && zeroFits; ++i)
      if (c.isFinite(i, j) && phi[i].isFinite() && !approxLeq<Scalar>(phi[i].value(), c.value(i, j)))
        zeroFits = false;
    psi[j] = zeroFits ? Extended<Scalar>(Scalar(0)) : Extended<Scalar>::negInfinity();
  }
}

}  // namespace detail

/// D together with an optimal feasible pair built from the flow potentials
/// at full mass. Reduced costs are nonnegative on every finite cell, so the
/// pair is feasible everywhere, and it is tight on the optimal coupling.
/// When no finite-cost full coupling exists, D = +inf and a min-cut ray is
/// returned instead.
template <class Scalar>
DualSolution<Scalar> dual_value(const CostMatrix<Scalar>& c, const Marginal<Scalar>& mu,
                                const Marginal<Scalar>& nu) {
  requireProbability(mu, nu);
  const FlowSolution<Scalar> sol = solve_flow(c, mu, nu);

  if (approxLess<Scalar>(sol.mass, Scalar(1))) {
    DualRay<Scalar> ray{Vector<Scalar>::Zero(mu.size()), Vector<Scalar>::Zero(nu.size()), Scalar(0)};
    for (int i = 0; i < mu.size(); ++i)
      if (sol.cutX(i)) ray.dphi(i) = Scalar(1);
    for (int j = 0; j < nu.size(); ++j)
      if (sol.cutY(j)) ray.dpsi(j) = Scalar(-1);
    ray.gain = ray.dphi.dot(mu.weights()) + ray.dpsi.dot(nu.weights());
    PotentialVector<Scalar> zeroPhi(mu.size(), Extended<Scalar>(Scalar(0)));
    PotentialVector<Scalar> zeroPsi(nu.size(), Extended<Scalar>(Scalar(0)));
    return {ExtendedCost<Scalar>::infinity(), make_dual_pair(zeroPhi, zeroPsi, c, mu, nu), std::nullopt, ray};
  }

  PotentialVector<Scalar> phi, psi;
  for (int i = 0; i < mu.size(); ++i) phi.emplace_back(sol.potentials.u(i));
  for (int j = 0; j < nu.size(); ++j) psi.emplace_back(sol.potentials.v(j));
  detail::normalizeNullAtoms(phi, psi, c, mu, nu);
  DualPair<Scalar> pair = make_dual_pair(std::move(phi), std::move(psi), c, mu, nu);
  if (!pair.feasible || !approxEq<Scalar>(pair.objective, ExtendedCost<Scalar>(sol.cost)))
    throw std::logic_error("flow potentials failed to certify the optimal coupling");
  return {pair.objective, std::move(pair), sol.coupling, std::nullopt};
}

/// J_c(phi, psi) = sum over charged cells of (phi(i) + psi(j)) * pi(i,j).
template <class Scalar>
Extended<Scalar> j_functional(const DualPair<Scalar>& pair, const Coupling<Scalar>& pi, const CostMatrix<Scalar>& c) {
  if (!cost_of(c, pi).isFinite())
    throw Error(ErrorCode::PreconditionViolated, "J_c needs a finite-cost coupling");
  const FeasibilityReport report = verify_feasible(pair, c);
  if (!report.feasible) throw Error(ErrorCode::PreconditionViolated, "J_c needs a feasible pair");
  Extended<Scalar> total(Scalar(0));
  for (const auto& [cell, mass] : pi.entries())
    total = total + (pair.phi[cell.first] + pair.psi[cell.second]).scaledBy(mass);
  return total;
}

/// Cells charged by at least one finite-cost full coupling: one exact LP
/// max pi(i,j) per cell. Support cells of every LP optimum are recorded on
/// the way, which lets later cells skip their solve.
template <class Scalar>
Mask chargeable_cells(const CostMatrix<Scalar>& c, const Marginal<Scalar>& mu, const Marginal<Scalar>& nu) {
  requireShape(c, mu, nu);
  Mask chargeable = Mask::Constant(c.rows(), c.cols(), false);
  auto base = detail::fullCouplingLp(c.finiteMask(), mu, nu);
  for (std::size_t k = 0; k < base.cells.size(); ++k) {
    const auto [i, j] = base.cells[k];
    if (chargeable(i, j)) continue;
    auto program = base.program;
    program.objective = Vector<Scalar>::Zero(program.variables());
    program.objective(k) = Scalar(1);
    const lp::Solution<Scalar> sol = lp::solve(program);
    if (sol.status != lp::Status::Optimal) break;  // no finite-cost coupling at all
    for (std::size_t q = 0; q < base.cells.size(); ++q)
      if (isPositive<Scalar>(sol.x(q))) chargeable(base.cells[q].first, base.cells[q].second) = true;
  }
  return chargeable;
}

template <class Scalar>
struct RelaxedDual {
  ExtendedCost<Scalar> value;
  /// Feasible on the chargeable cells (checked against the restricted cost).
  DualPair<Scalar> pair;
  Mask chargeable;
};

/// D^rel: the dual constraint is imposed only on chargeable cells.
/// Satisfies D <= D^rel <= P.
template <class Scalar>
RelaxedDual<Scalar> relaxed_dual_value(const CostMatrix<Scalar>& c, const Marginal<Scalar>& mu,
                                       const Marginal<Scalar>& nu) {
  requireProbability(mu, nu);
  if (approxLess<Scalar>(solve_profile(c, mu, nu).maxMass(), Scalar(1)))
    throw Error(ErrorCode::NotApplicable, "relaxed dual needs a finite-cost full coupling");
  Mask chargeable = chargeable_cells(c, mu, nu);
  CostMatrix<Scalar> restricted = c;
  for (int i = 0; i < c.rows(); ++i)
    for (int j = 0; j < c.cols(); ++j)
      if (!chargeable(i, j)) restricted.set(i, j, ExtendedCost<Scalar>::infinity());
  DualSolution<Scalar> sol = dual_value(restricted, mu, nu);
  return {sol.value, std::move(sol.pair), std::move(chargeable)};
}

template <class Scalar>
struct AttainmentReport {
  bool attained = false;
  std::optional<std::size_t> levelIndex;
  std::optional<Scalar> level;
  ExtendedCost<Scalar> relaxed;
  std::vector<TruncationPoint<Scalar>> values;
  /// Maximizer: the dual pair of the truncated problem at the attaining
  /// level, or of c itself when the grid does not attain.
  std::optional<DualPair<Scalar>> pair;
  /// h(i,j) = (phi(i) + psi(j))_+, zero where a potential is -inf.
  Matrix<Scalar> h;
  /// max h: any level M >= this satisfies P_{c∧M} = P^rel.
  std::optional<Scalar> certifiedLevel;
};

namespace detail {

template <class Scalar>
Matrix<Scalar> positivePartSum(const DualPair<Scalar>& pair) {
  Matrix<Scalar> h = Matrix<Scalar>::Zero(pair.phi.size(), pair.psi.size());
  for (std::size_t i = 0; i < pair.phi.size(); ++i)
    for (std::size_t j = 0; j < pair.psi.size(); ++j) {
      if (!pair.phi[i].isFinite() || !pair.psi[j].isFinite()) continue;
      const Scalar s = pair.phi[i].value() + pair.psi[j].value();
      if (s > 0) h(i, j) = s;
    }
  return h;
}

}  // namespace detail

/// Least level M on an ascending grid with P_{c∧M} = P^rel.
template <class Scalar>
AttainmentReport<Scalar> attainment_check(const CostMatrix<Scalar>& c, const Marginal<Scalar>& mu,
                                          const Marginal<Scalar>& nu, const std::vector<Scalar>& grid) {
  requireProbability(mu, nu);
  AttainmentReport<Scalar> report;
  report.values = truncation_sweep(c, mu, nu, grid);
  report.relaxed = relaxed_value(c, mu, nu);
  if (!report.relaxed.isFinite()) return report;

  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (approxEq(report.values[k].value, report.relaxed)) {
      report.attained = true;
      report.levelIndex = k;
      report.level = grid[k];
      break;
    }
  }
  const DualSolution<Scalar> own = dual_value(c, mu, nu);
  report.certifiedLevel = detail::positivePartSum(own.pair).maxCoeff();
  if (report.attained) {
    DualSolution<Scalar> truncated = dual_value(truncate_cost(c, *report.level), mu, nu);
    // Feasible for c∧M <= c, hence for c, with objective P_{c∧M} = D.
    truncated.pair.feasible = verify_feasible(truncated.pair, c).feasible;
    report.pair = std::move(truncated.pair);
  } else {
    report.pair = own.pair;
  }
  report.h = detail::positivePartSum(*report.pair);
  return report;
}

}  // namespace kantgap
