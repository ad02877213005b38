#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "kantgap/extended.hpp"

namespace kantgap {

/// A finite space {0, ..., size-1} with optional unique display labels.
class DiscreteSpace {
 public:
  explicit DiscreteSpace(int size, std::vector<std::string> labels = {})
      : size_(size), labels_(std::move(labels)) {
    if (size_ < 1) throw Error(ErrorCode::InvalidSpace, "space size must be >= 1");
    if (!labels_.empty()) {
      if (static_cast<int>(labels_.size()) != size_)
        throw Error(ErrorCode::LengthMismatch, "label count differs from space size");
      std::set<std::string> seen(labels_.begin(), labels_.end());
      if (static_cast<int>(seen.size()) != size_)
        throw Error(ErrorCode::InvalidSpace, "space labels must be unique");
    }
  }

  int size() const { return size_; }
  const std::vector<std::string>& labels() const { return labels_; }
  std::string label(int i) const { return labels_.empty() ? std::to_string(i) : labels_[i]; }

 private:
  int size_;
  std::vector<std::string> labels_;
};

/// Nonnegative weights over a DiscreteSpace. Probability status is a checked
/// predicate: sub-probability marginals are first-class.
template <class Scalar>
class Marginal {
 public:
  Marginal(DiscreteSpace space, Vector<Scalar> weights)
      : space_(std::move(space)), weights_(std::move(weights)) {
    if (weights_.size() != space_.size())
      throw Error(ErrorCode::LengthMismatch, "weight vector length differs from space size");
    for (Eigen::Index i = 0; i < weights_.size(); ++i)
      if (weights_(i) < 0)
        throw Error(ErrorCode::NegativeWeight, "weight " + std::to_string(i) + " is negative");
    mass_ = weights_.sum();
  }

  const DiscreteSpace& space() const { return space_; }
  int size() const { return space_.size(); }
  const Vector<Scalar>& weights() const { return weights_; }
  const Scalar& operator()(int i) const { return weights_(i); }
  const Scalar& mass() const { return mass_; }

  bool isProbability() const { return approxEq<Scalar>(mass_, Scalar(1)); }

  /// Componentwise domination, used for partial couplings.
  bool dominatedBy(const Marginal& other) const {
    if (size() != other.size()) return false;
    for (int i = 0; i < size(); ++i)
      if (!approxLeq<Scalar>(weights_(i), other.weights_(i))) return false;
    return true;
  }

  bool operator==(const Marginal& other) const {
    return size() == other.size() && weights_ == other.weights_;
  }

  template <class To>
  Marginal<To> cast() const {
    static_assert(std::is_same_v<Scalar, Rational>, "casts start from exact data");
    return Marginal<To>(space_, castVector<To>(weights_));
  }

 private:
  DiscreteSpace space_;
  Vector<Scalar> weights_;
  Scalar mass_;
};

template <class Scalar>
Marginal<Scalar> make_marginal(const DiscreteSpace& space, const Vector<Scalar>& weights) {
  return Marginal<Scalar>(space, weights);
}

template <class Scalar>
Marginal<Scalar> make_marginal(const Vector<Scalar>& weights) {
  return Marginal<Scalar>(DiscreteSpace(static_cast<int>(weights.size())), weights);
}

template <class Scalar>
Marginal<Scalar> uniform_marginal(int n) {
  return make_marginal<Scalar>(Vector<Scalar>::Constant(n, Scalar(1) / Scalar(n)));
}

template <class Scalar>
Marginal<Scalar> zero_marginal(int n) {
  return make_marginal<Scalar>(Vector<Scalar>::Zero(n));
}

/// Grid of extended costs: finite values plus a mask of finite cells.
/// Values stored under Infinite cells are kept at zero and never read.
template <class Scalar>
class CostMatrix {
 public:
  CostMatrix() = default;
  CostMatrix(int rows, int cols)
      : values_(Matrix<Scalar>::Zero(rows, cols)), finite_(Mask::Constant(rows, cols, true)) {}

  static CostMatrix fromValues(const Matrix<Scalar>& values) {
    CostMatrix c(static_cast<int>(values.rows()), static_cast<int>(values.cols()));
    for (int i = 0; i < c.rows(); ++i)
      for (int j = 0; j < c.cols(); ++j) c.set(i, j, values(i, j));
    return c;
  }

  static CostMatrix constant(int rows, int cols, const Extended<Scalar>& value) {
    CostMatrix c(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) c.set(i, j, value);
    return c;
  }

  int rows() const { return static_cast<int>(values_.rows()); }
  int cols() const { return static_cast<int>(values_.cols()); }

  bool isFinite(int i, int j) const { return finite_(i, j); }
  /// Finite cell value; zero for Infinite cells.
  const Scalar& value(int i, int j) const { return values_(i, j); }

  Extended<Scalar> operator()(int i, int j) const {
    return finite_(i, j) ? Extended<Scalar>(values_(i, j)) : Extended<Scalar>::infinity();
  }

  void set(int i, int j, const Extended<Scalar>& c) {
    if (c.isNegInf() || (c.isFinite() && c.value() < 0))
      throw Error(ErrorCode::InvalidArgument, "costs must lie in [0, inf]");
    finite_(i, j) = c.isFinite();
    values_(i, j) = c.isFinite() ? c.value() : Scalar(0);
  }

  const Matrix<Scalar>& values() const { return values_; }
  const Mask& finiteMask() const { return finite_; }
  bool anyInfinite() const { return !finite_.all(); }

  std::optional<Scalar> maxFiniteValue() const {
    std::optional<Scalar> best;
    for (int i = 0; i < rows(); ++i)
      for (int j = 0; j < cols(); ++j)
        if (finite_(i, j) && (!best || values_(i, j) > *best)) best = values_(i, j);
    return best;
  }

  bool operator==(const CostMatrix& other) const {
    return rows() == other.rows() && cols() == other.cols() && finite_.cwiseEqual(other.finite_).all() &&
           values_ == other.values_;
  }

  template <class To>
  CostMatrix<To> cast() const {
    static_assert(std::is_same_v<Scalar, Rational>, "casts start from exact data");
    CostMatrix<To> out(rows(), cols());
    for (int i = 0; i < rows(); ++i)
      for (int j = 0; j < cols(); ++j)
        out.set(i, j,
                finite_(i, j) ? Extended<To>(ScalarTraits<To>::fromRational(values_(i, j)))
                              : Extended<To>::infinity());
    return out;
  }

 private:
  Matrix<Scalar> values_;
  Mask finite_;
};

using Cell = std::pair<int, int>;

/// Sparse nonnegative measure on a finite product space. Zero entries are
/// never stored; row/column sums and total mass are cached at construction.
template <class Scalar>
class Coupling {
 public:
  Coupling(int rows, int cols) : rows_(rows), cols_(cols) { recompute(); }

  Coupling(int rows, int cols, std::map<Cell, Scalar> entries)
      : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    for (auto it = entries_.begin(); it != entries_.end();) {
      const auto& [cell, mass] = *it;
      if (cell.first < 0 || cell.first >= rows_ || cell.second < 0 || cell.second >= cols_)
        throw Error(ErrorCode::DimensionMismatch, "coupling entry outside the grid");
      if (mass < 0 && !isZero<Scalar>(mass))
        throw Error(ErrorCode::NegativeWeight, "coupling entries must be nonnegative");
      it = isPositive<Scalar>(mass) ? std::next(it) : entries_.erase(it);
    }
    recompute();
  }

  static Coupling fromDense(const Matrix<Scalar>& dense) {
    std::map<Cell, Scalar> entries;
    for (int i = 0; i < dense.rows(); ++i)
      for (int j = 0; j < dense.cols(); ++j)
        if (dense(i, j) != 0) entries.emplace(Cell{i, j}, dense(i, j));
    return Coupling(static_cast<int>(dense.rows()), static_cast<int>(dense.cols()), std::move(entries));
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  const std::map<Cell, Scalar>& entries() const { return entries_; }
  const Vector<Scalar>& rowSums() const { return rowSums_; }
  const Vector<Scalar>& colSums() const { return colSums_; }
  const Scalar& mass() const { return mass_; }
  bool empty() const { return entries_.empty(); }

  Scalar at(int i, int j) const {
    auto it = entries_.find({i, j});
    return it == entries_.end() ? Scalar(0) : it->second;
  }

  Matrix<Scalar> toDense() const {
    Matrix<Scalar> dense = Matrix<Scalar>::Zero(rows_, cols_);
    for (const auto& [cell, mass] : entries_) dense(cell.first, cell.second) = mass;
    return dense;
  }

  /// rowSums = mu and colSums = nu.
  bool isCouplingOf(const Marginal<Scalar>& mu, const Marginal<Scalar>& nu) const {
    if (mu.size() != rows_ || nu.size() != cols_) return false;
    for (int i = 0; i < rows_; ++i)
      if (!approxEq<Scalar>(rowSums_(i), mu(i))) return false;
    for (int j = 0; j < cols_; ++j)
      if (!approxEq<Scalar>(colSums_(j), nu(j))) return false;
    return true;
  }

  /// rowSums <= mu and colSums <= nu componentwise.
  bool isPartialCouplingOf(const Marginal<Scalar>& mu, const Marginal<Scalar>& nu) const {
    if (mu.size() != rows_ || nu.size() != cols_) return false;
    for (int i = 0; i < rows_; ++i)
      if (!approxLeq<Scalar>(rowSums_(i), mu(i))) return false;
    for (int j = 0; j < cols_; ++j)
      if (!approxLeq<Scalar>(colSums_(j), nu(j))) return false;
    return true;
  }

  bool operator==(const Coupling& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_ && entries_ == other.entries_;
  }

 private:
  void recompute() {
    rowSums_ = Vector<Scalar>::Zero(rows_);
    colSums_ = Vector<Scalar>::Zero(cols_);
    for (const auto& [cell, mass] : entries_) {
      rowSums_(cell.first) += mass;
      colSums_(cell.second) += mass;
    }
    mass_ = rowSums_.sum();
  }

  int rows_;
  int cols_;
  std::map<Cell, Scalar> entries_;
  Vector<Scalar> rowSums_;
  Vector<Scalar> colSums_;
  Scalar mass_;
};

/// Integral of c against pi with the measure-theoretic convention
/// 0 * inf = 0: only positive entries contribute.
template <class Scalar>
ExtendedCost<Scalar> cost_of(const CostMatrix<Scalar>& c, const Coupling<Scalar>& pi) {
  if (c.rows() != pi.rows() || c.cols() != pi.cols())
    throw Error(ErrorCode::DimensionMismatch, "cost matrix and coupling shapes differ");
  Scalar total(0);
  for (const auto& [cell, mass] : pi.entries()) {
    if (!c.isFinite(cell.first, cell.second)) return ExtendedCost<Scalar>::infinity();
    total += c.value(cell.first, cell.second) * mass;
  }
  return total;
}

template <class Scalar>
std::pair<Marginal<Scalar>, Marginal<Scalar>> coupling_marginals(const Coupling<Scalar>& pi) {
  return {make_marginal<Scalar>(pi.rowSums()), make_marginal<Scalar>(pi.colSums())};
}

/// scale * (alpha ⊗ beta).
template <class Scalar>
Coupling<Scalar> product_coupling(const Marginal<Scalar>& alpha, const Marginal<Scalar>& beta,
                                  const Scalar& scale) {
  if (scale < 0) throw Error(ErrorCode::NegativeScale, "product coupling scale must be >= 0");
  const Matrix<Scalar> dense = scale * alpha.weights() * beta.weights().transpose();
  return Coupling<Scalar>::fromDense(dense);
}

/// Cellwise minimum c ∧ h in the extended order.
template <class Scalar>
CostMatrix<Scalar> truncate_cost(const CostMatrix<Scalar>& c, const CostMatrix<Scalar>& h) {
  if (c.rows() != h.rows() || c.cols() != h.cols())
    throw Error(ErrorCode::DimensionMismatch, "cost and truncation level shapes differ");
  CostMatrix<Scalar> out(c.rows(), c.cols());
  for (int i = 0; i < c.rows(); ++i)
    for (int j = 0; j < c.cols(); ++j) out.set(i, j, min(c(i, j), h(i, j)));
  return out;
}

/// c ∧ M for a constant level M.
template <class Scalar>
CostMatrix<Scalar> truncate_cost(const CostMatrix<Scalar>& c, const Scalar& level) {
  return truncate_cost(c, CostMatrix<Scalar>::constant(c.rows(), c.cols(), level));
}

template <class Scalar>
void requireShape(const CostMatrix<Scalar>& c, const Marginal<Scalar>& mu, const Marginal<Scalar>& nu) {
  if (c.rows() != mu.size() || c.cols() != nu.size())
    throw Error(ErrorCode::DimensionMismatch, "cost matrix shape does not match the marginals");
}

template <class Scalar>
void requireProbability(const Marginal<Scalar>& mu, const Marginal<Scalar>& nu) {
  if (!mu.isProbability() || !nu.isProbability())
    throw Error(ErrorCode::NotProbability, "probability marginals required");
}

/// Cost matrix together with its two marginals.
template <class Scalar>
struct Instance {
  CostMatrix<Scalar> cost;
  Marginal<Scalar> mu;
  Marginal<Scalar> nu;

  template <class To>
  Instance<To> cast() const {
    if constexpr (std::is_same_v<To, Scalar>) {
      return *this;
    } else {
      return Instance<To>{cost.template cast<To>(), mu.template cast<To>(), nu.template cast<To>()};
    }
  }
};

}  // namespace kantgap
