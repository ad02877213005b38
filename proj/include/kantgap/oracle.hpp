#pragma once

#include <vector>

#include "kantgap/kellerer.hpp"

// Brute-force references for tiny instances. Nothing here touches the flow
// solver or the simplex code: these are the ground truth the solvers are
// tested against.
namespace kantgap::oracle {

/// Minimum cost over every basic feasible solution of the fixed-mass partial
/// transportation polytope. Bases are maximal spanning forests of the
/// balanced bipartite graph obtained by adding a dummy row (supply
/// mass(nu) - m) and a dummy column (demand mass(mu) - m). Each basis yields
/// an affine cost on an interval of masses, so one enumeration answers
/// queries at any mass.
class BrutePrimal {
 public:
  static constexpr int kMaxSide = 4;

  BrutePrimal(const CostMatrix<Rational>& c, const Marginal<Rational>& mu, const Marginal<Rational>& nu);

  /// Min cost at shipped mass m; Infinite when no plan of that mass exists.
  ExtendedCost<Rational> at(const Rational& m) const;

  std::size_t basisCount() const { return bases_; }
  std::size_t vertexCount() const { return pieces_.size(); }

  /// Basis pieces, in scaled units (see implementation).
  struct Piece {
    long long lo;
    long long hi;
    long long base;
    long long slope;
    auto operator<=>(const Piece&) const = default;
  };

 private:
  long long massScale_ = 1;
  long long costScale_ = 1;
  std::size_t bases_ = 0;
  std::vector<Piece> pieces_;
};

ExtendedCost<Rational> brute_primal(const CostMatrix<Rational>& c, const Marginal<Rational>& mu,
                                    const Marginal<Rational>& nu, const Rational& m);

/// min mu(A) + nu(B) over all 2^(nx+ny) pairs (A, B) covering L.
Rational brute_cover(const CellSet& L, const Marginal<Rational>& mu, const Marginal<Rational>& nu);

/// gamma(L) by enumerating f in {0, 1/2, 1}^n; the capacity LP is
/// half-integral so its optimum is among these points.
Rational brute_capacity(const CellSet& L, const Marginal<Rational>& lambda);

}  // namespace kantgap::oracle
