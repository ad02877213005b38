#pragma once

#include <optional>
#include <vector>

#include "kantgap/scalar.hpp"

namespace kantgap::lp {

enum class Sense { LessEqual, GreaterEqual, Equal };
enum class Status { Optimal, Infeasible, Unbounded };

/// optimize  objective^T x  subject to  rows[k]^T x (sense[k]) rhs[k],  x >= 0.
template <class Scalar>
struct LinearProgram {
  Matrix<Scalar> rows;
  Vector<Scalar> rhs;
  std::vector<Sense> senses;
  Vector<Scalar> objective;
  bool maximize = false;

  explicit LinearProgram(int variables)
      : rows(0, variables), rhs(0), objective(Vector<Scalar>::Zero(variables)) {}

  int variables() const { return static_cast<int>(objective.size()); }

  void addConstraint(const Vector<Scalar>& coefficients, Sense sense, const Scalar& bound) {
    const Eigen::Index k = rows.rows();
    rows.conservativeResize(k + 1, Eigen::NoChange);
    rows.row(k) = coefficients.transpose();
    rhs.conservativeResize(k + 1);
    rhs(k) = bound;
    senses.push_back(sense);
  }

  /// Adds x_var <= bound.
  void addUpperBound(int var, const Scalar& bound) {
    Vector<Scalar> e = Vector<Scalar>::Zero(variables());
    e(var) = Scalar(1);
    addConstraint(e, Sense::LessEqual, bound);
  }
};

template <class Scalar>
struct Solution {
  Status status = Status::Infeasible;
  Scalar objective{0};
  Vector<Scalar> x;
};

namespace detail {

/// Dense two-phase tableau simplex with Bland's rule. Exact under Rational,
/// so the returned point is a vertex of the feasible polyhedron.
template <class Scalar>
class Tableau {
 public:
  explicit Tableau(const LinearProgram<Scalar>& lp) : n_(lp.variables()), m_(static_cast<int>(lp.rhs.size())) {
    int slacks = 0, artificials = 0;
    for (int k = 0; k < m_; ++k) {
      const Sense s = normalizedSense(lp, k);
      if (s != Sense::Equal) ++slacks;
      if (s != Sense::LessEqual) ++artificials;
    }
    firstArtificial_ = n_ + slacks;
    cols_ = firstArtificial_ + artificials;
    t_ = Matrix<Scalar>::Zero(m_ + 1, cols_ + 1);
    basis_.assign(m_, -1);

    int slack = n_, artificial = firstArtificial_;
    for (int k = 0; k < m_; ++k) {
      const bool flip = lp.rhs(k) < 0;
      const Scalar sign = flip ? Scalar(-1) : Scalar(1);
      for (int j = 0; j < n_; ++j) t_(k, j) = sign * lp.rows(k, j);
      t_(k, cols_) = sign * lp.rhs(k);
      const Sense s = normalizedSense(lp, k);
      if (s == Sense::LessEqual) {
        t_(k, slack) = Scalar(1);
        basis_[k] = slack++;
      } else {
        if (s == Sense::GreaterEqual) t_(k, slack++) = Scalar(-1);
        t_(k, artificial) = Scalar(1);
        basis_[k] = artificial++;
      }
    }
  }

  Solution<Scalar> solve(const LinearProgram<Scalar>& lp) {
    Solution<Scalar> out;
    // Phase 1: minimize the sum of artificials.
    if (cols_ > firstArtificial_) {
      Vector<Scalar> phase1 = Vector<Scalar>::Zero(cols_);
      for (int j = firstArtificial_; j < cols_; ++j) phase1(j) = Scalar(1);
      setObjective(phase1);
      optimize(cols_);
      if (isPositive<Scalar>(-t_(m_, cols_))) return out;  // Infeasible
      driveOutArtificials();
    }
    // Phase 2, artificials barred from entering.
    Vector<Scalar> cost = Vector<Scalar>::Zero(cols_);
    for (int j = 0; j < n_; ++j) cost(j) = lp.maximize ? Scalar(-lp.objective(j)) : lp.objective(j);
    setObjective(cost);
    if (!optimize(firstArtificial_)) {
      out.status = Status::Unbounded;
      return out;
    }
    out.status = Status::Optimal;
    out.x = Vector<Scalar>::Zero(n_);
    for (int k = 0; k < m_; ++k)
      if (basis_[k] < n_) out.x(basis_[k]) = t_(k, cols_);
    out.objective = lp.objective.dot(out.x);
    return out;
  }

 private:
  static Sense normalizedSense(const LinearProgram<Scalar>& lp, int k) {
    const Sense s = lp.senses[k];
    if (!(lp.rhs(k) < 0) || s == Sense::Equal) return s;
    return s == Sense::LessEqual ? Sense::GreaterEqual : Sense::LessEqual;
  }

  /// Bottom row holds reduced costs; entry (m, cols) holds -objective.
  void setObjective(const Vector<Scalar>& cost) {
    t_.row(m_).setZero();
    for (int j = 0; j < cols_; ++j) t_(m_, j) = cost(j);
    for (int k = 0; k < m_; ++k)
      if (!isZero<Scalar>(cost(basis_[k]))) t_.row(m_) -= cost(basis_[k]) * t_.row(k);
  }

  void pivot(int row, int col) {
    const Scalar p = t_(row, col);
    t_.row(row) /= p;
    for (int k = 0; k <= m_; ++k) {
      if (k == row || isZero<Scalar>(t_(k, col))) continue;
      const Scalar f = t_(k, col);
      t_.row(k) -= f * t_.row(row);
      t_(k, col) = Scalar(0);
    }
    basis_[row] = col;
  }

  /// Bland's rule over columns [0, enterLimit). Returns false if unbounded.
  bool optimize(int enterLimit) {
    while (true) {
      int enter = -1;
      for (int j = 0; j < enterLimit; ++j)
        if (isPositive<Scalar>(-t_(m_, j))) {
          enter = j;
          break;
        }
      if (enter < 0) return true;
      int leave = -1;
      Scalar bestRatio(0);
      for (int k = 0; k < m_; ++k) {
        if (!isPositive<Scalar>(t_(k, enter))) continue;
        Scalar ratio = t_(k, cols_) / t_(k, enter);
        if (leave < 0 || ratio < bestRatio || (ratio == bestRatio && basis_[k] < basis_[leave])) {
          leave = k;
          bestRatio = ratio;
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
  }

  /// Artificials left basic at level zero are pivoted out where possible;
  /// otherwise their row is redundant and they stay at zero.
  void driveOutArtificials() {
    for (int k = 0; k < m_; ++k) {
      if (basis_[k] < firstArtificial_) continue;
      for (int j = 0; j < firstArtificial_; ++j)
        if (!isZero<Scalar>(t_(k, j))) {
          pivot(k, j);
          break;
        }
    }
  }

  int n_;
  int m_;
  int firstArtificial_ = 0;
  int cols_ = 0;
  Matrix<Scalar> t_;
  std::vector<int> basis_;
};

}  // namespace detail

template <class Scalar>
Solution<Scalar> solve(const LinearProgram<Scalar>& lp) {
  detail::Tableau<Scalar> tableau(lp);
  return tableau.solve(lp);
}

}  // namespace kantgap::lp
