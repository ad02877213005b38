#pragma once

#include <optional>
#include <vector>

#include "kantgap/flow.hpp"
#include "kantgap/relaxation.hpp"
#include "kantgap/transport_lp.hpp"

namespace kantgap {

/// A subset L of X × Y as a boolean grid.
class CellSet {
 public:
  CellSet(int rows, int cols) : member_(Mask::Constant(rows, cols, false)) {}
  explicit CellSet(Mask member) : member_(std::move(member)) {}

  static CellSet fromCells(int rows, int cols, const std::vector<Cell>& cells) {
    CellSet set(rows, cols);
    for (const auto& [i, j] : cells) {
      if (i < 0 || i >= rows || j < 0 || j >= cols)
        throw Error(ErrorCode::DimensionMismatch, "cell outside the grid");
      set.member_(i, j) = true;
    }
    return set;
  }

  static CellSet diagonal(int n) {
    CellSet set(n, n);
    for (int i = 0; i < n; ++i) set.member_(i, i) = true;
    return set;
  }

  static CellSet full(int rows, int cols) { return CellSet(Mask::Constant(rows, cols, true)); }

  int rows() const { return static_cast<int>(member_.rows()); }
  int cols() const { return static_cast<int>(member_.cols()); }
  bool contains(int i, int j) const { return member_(i, j); }
  void insert(int i, int j) { member_(i, j) = true; }
  bool empty() const { return !member_.any(); }
  const Mask& mask() const { return member_; }

  std::vector<Cell> cells() const {
    std::vector<Cell> out;
    for (int i = 0; i < rows(); ++i)
      for (int j = 0; j < cols(); ++j)
        if (member_(i, j)) out.emplace_back(i, j);
    return out;
  }

  CellSet unite(const CellSet& other) const { return CellSet(member_ || other.member_); }
  bool subsetOf(const CellSet& other) const { return (!member_ || other.member_).all(); }

 private:
  Mask member_;
};

/// Cover A × Y ∪ X × B of a cell set and its weight mu(A) + nu(B).
template <class Scalar>
struct CoverCertificate {
  VectorMask A;
  VectorMask B;
  Scalar value;

  bool covers(const CellSet& L) const {
    for (const auto& [i, j] : L.cells())
      if (!A(i) && !B(j)) return false;
    return true;
  }
};

template <class Scalar>
Scalar maskWeight(const VectorMask& set, const Marginal<Scalar>& m) {
  Scalar total(0);
  for (int i = 0; i < m.size(); ++i)
    if (set(i)) total += m(i);
  return total;
}

template <class Scalar>
void requireShape(const CellSet& L, const Marginal<Scalar>& mu, const Marginal<Scalar>& nu) {
  if (L.rows() != mu.size() || L.cols() != nu.size())
    throw Error(ErrorCode::DimensionMismatch, "cell set shape does not match the marginals");
}

template <class Scalar>
struct MaxMassResult {
  Scalar mass;
  Coupling<Scalar> coupling;
};

/// Largest mass of a partial coupling of (mu, nu) supported inside L.
template <class Scalar>
MaxMassResult<Scalar> max_mass_on(const CellSet& L, const Marginal<Scalar>& mu, const Marginal<Scalar>& nu) {
  requireShape(L, mu, nu);
  CostMatrix<Scalar> c = CostMatrix<Scalar>::constant(L.rows(), L.cols(), ExtendedCost<Scalar>::infinity());
  for (const auto& [i, j] : L.cells()) c.set(i, j, Scalar(0));
  FlowSolution<Scalar> sol = solve_flow(c, mu, nu);
  return {sol.mass, std::move(sol.coupling)};
}

template <class Scalar>
struct CoverResult {
  Scalar value;
  CoverCertificate<Scalar> certificate;
};

/// m(L) = min mu(A) + nu(B) over covers of L. Solved as the LP relaxation
/// x_a + y_b >= 1 on L, 0 <= x, y <= 1, rounded at 1/2 and checked against
/// the maximal sub-coupling mass on L.
template <class Scalar>
CoverResult<Scalar> cover_value(const CellSet& L, const Marginal<Scalar>& mu, const Marginal<Scalar>& nu) {
  requireShape(L, mu, nu);
  const int nx = mu.size(), ny = nu.size();
  lp::LinearProgram<Scalar> program(nx + ny);
  program.objective << mu.weights(), nu.weights();
  for (const auto& [i, j] : L.cells()) {
    Vector<Scalar> row = Vector<Scalar>::Zero(nx + ny);
    row(i) = Scalar(1);
    row(nx + j) = Scalar(1);
    program.addConstraint(row, lp::Sense::GreaterEqual, Scalar(1));
  }
  for (int k = 0; k < nx + ny; ++k) program.addUpperBound(k, Scalar(1));
  const lp::Solution<Scalar> sol = lp::solve(program);
  if (sol.status != lp::Status::Optimal) throw std::logic_error("cover LP must be solvable");

  const Scalar half = Scalar(1) / Scalar(2);
  CoverCertificate<Scalar> cert{VectorMask::Constant(nx, false), VectorMask::Constant(ny, false), Scalar(0)};
  for (int i = 0; i < nx; ++i) cert.A(i) = approxLeq<Scalar>(half, sol.x(i));
  for (int j = 0; j < ny; ++j) cert.B(j) = approxLeq<Scalar>(half, sol.x(nx + j));
  cert.value = maskWeight(cert.A, mu) + maskWeight(cert.B, nu);

  if (!cert.covers(L)) throw std::logic_error("rounded cover misses a cell of L");
  const Scalar dualMass = max_mass_on(L, mu, nu).mass;
  if (!approxEq<Scalar>(cert.value, sol.objective) || !approxEq<Scalar>(cert.value, dualMass))
    throw std::logic_error("cover value disagrees with the LP optimum or the dual mass");
  return {cert.value, std::move(cert)};
}

/// Either null bands M × Y ∪ X × N with mu(M) = nu(N) = 0 covering L, or a
/// full coupling of (mu, nu) charging L.
template <class Scalar>
struct KellererDecomposition {
  bool nullCover = false;
  VectorMask M;
  VectorMask N;
  std::optional<Coupling<Scalar>> witness;
};

template <class Scalar>
KellererDecomposition<Scalar> kellerer_decompose(const CellSet& L, const Marginal<Scalar>& mu,
                                                 const Marginal<Scalar>& nu) {
  requireShape(L, mu, nu);
  MaxMassResult<Scalar> best = max_mass_on(L, mu, nu);
  KellererDecomposition<Scalar> out{false, VectorMask::Constant(mu.size(), false),
                                    VectorMask::Constant(nu.size(), false), std::nullopt};
  if (isZero<Scalar>(best.mass)) {
    out.nullCover = true;
    for (const auto& [i, j] : L.cells()) {
      if (isZero<Scalar>(mu(i))) out.M(i) = true;
      if (isZero<Scalar>(nu(j))) out.N(j) = true;
      if (!out.M(i) && !out.N(j)) throw std::logic_error("null cover misses a cell of L");
    }
    return out;
  }
  // Completing the sub-coupling on L keeps its mass on L.
  out.witness = complete_partial(best.coupling, mu, nu);
  return out;
}

template <class Scalar>
struct CapacityResult {
  Scalar value;
  Vector<Scalar> f;
};

/// gamma(L) = min sum lambda(x) f(x) over 0 <= f <= 1 with f(x) + f(y) >= 1
/// on L. Defined on the square X = Y with one shared marginal.
template <class Scalar>
CapacityResult<Scalar> capacity_value(const CellSet& L, const Marginal<Scalar>& lambda) {
  const int n = lambda.size();
  if (L.rows() != n || L.cols() != n) throw Error(ErrorCode::NotSquare, "capacity is defined on X × X only");
  lp::LinearProgram<Scalar> program(n);
  program.objective = lambda.weights();
  for (const auto& [x, y] : L.cells()) {
    Vector<Scalar> row = Vector<Scalar>::Zero(n);
    row(x) += Scalar(1);
    row(y) += Scalar(1);
    program.addConstraint(row, lp::Sense::GreaterEqual, Scalar(1));
  }
  for (int k = 0; k < n; ++k) program.addUpperBound(k, Scalar(1));
  lp::Solution<Scalar> sol = lp::solve(program);
  if (sol.status != lp::Status::Optimal) throw std::logic_error("capacity LP must be solvable");
  return {sol.objective, std::move(sol.x)};
}

template <class Scalar>
CapacityResult<Scalar> capacity_value(const CellSet& L, const Marginal<Scalar>& mu, const Marginal<Scalar>& nu) {
  if (!(mu == nu)) throw Error(ErrorCode::NotSquare, "capacity needs X = Y with a shared marginal");
  return capacity_value(L, mu);
}

/// Whether pi(L) = 0 for every full coupling: LP max pi(L) over Pi(mu, nu).
template <class Scalar>
bool null_for_all_couplings(const CellSet& L, const Marginal<Scalar>& mu, const Marginal<Scalar>& nu) {
  requireShape(L, mu, nu);
  if (!approxEq<Scalar>(mu.mass(), nu.mass()))
    throw Error(ErrorCode::NotProbability, "mu and nu must carry equal mass");
  auto model = detail::fullCouplingLp(Mask::Constant(mu.size(), nu.size(), true), mu, nu);
  for (std::size_t k = 0; k < model.cells.size(); ++k)
    if (L.contains(model.cells[k].first, model.cells[k].second)) model.program.objective(k) = Scalar(1);
  const lp::Solution<Scalar> sol = lp::solve(model.program);
  if (sol.status != lp::Status::Optimal) throw std::logic_error("full coupling LP must be solvable");
  return isZero<Scalar>(sol.objective);
}

}  // namespace kantgap
