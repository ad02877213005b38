#pragma once

#include <compare>
#include <ostream>
#include <string>

#include "kantgap/scalar.hpp"

namespace kantgap {

/// A scalar extended by -inf and +inf. Costs live in [0, inf], dual
/// potentials in [-inf, inf). Infinities are symbolic, never big-M numbers.
template <class Scalar>
class Extended {
 public:
  enum class Kind { NegInf, Finite, PosInf };

  Extended() : kind_(Kind::Finite), value_(0) {}
  Extended(const Scalar& v) : kind_(Kind::Finite), value_(v) {}  // NOLINT
  Extended(int v) : kind_(Kind::Finite), value_(v) {}            // NOLINT

  static Extended infinity() { return Extended(Kind::PosInf); }
  static Extended negInfinity() { return Extended(Kind::NegInf); }

  Kind kind() const { return kind_; }
  bool isFinite() const { return kind_ == Kind::Finite; }
  bool isPosInf() const { return kind_ == Kind::PosInf; }
  bool isNegInf() const { return kind_ == Kind::NegInf; }

  const Scalar& value() const {
    if (!isFinite()) throw std::logic_error("Extended::value() on an infinite value");
    return value_;
  }

  /// inf + (-inf) has no meaning here and throws.
  friend Extended operator+(const Extended& a, const Extended& b) {
    if ((a.isPosInf() && b.isNegInf()) || (a.isNegInf() && b.isPosInf()))
      throw std::domain_error("inf + -inf is undefined");
    if (a.isPosInf() || b.isPosInf()) return infinity();
    if (a.isNegInf() || b.isNegInf()) return negInfinity();
    return Extended(a.value_ + b.value_);
  }

  /// Multiplication by a nonnegative weight with 0 * (+-inf) = 0.
  Extended scaledBy(const Scalar& weight) const {
    if (weight < 0) throw std::domain_error("Extended::scaledBy expects a nonnegative weight");
    if (isZero<Scalar>(weight)) return Extended(Scalar(0));
    if (!isFinite()) return *this;
    return Extended(value_ * weight);
  }

  friend bool operator==(const Extended& a, const Extended& b) {
    if (a.kind_ != b.kind_) return false;
    return !a.isFinite() || a.value_ == b.value_;
  }

  friend std::strong_ordering operator<=>(const Extended& a, const Extended& b) {
    if (a.kind_ != b.kind_) return rank(a.kind_) <=> rank(b.kind_);
    if (!a.isFinite()) return std::strong_ordering::equal;
    if (a.value_ < b.value_) return std::strong_ordering::less;
    if (b.value_ < a.value_) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  std::string toString() const {
    switch (kind_) {
      case Kind::NegInf: return "-inf";
      case Kind::PosInf: return "inf";
      case Kind::Finite: break;
    }
    return formatScalar(value_);
  }

  friend std::ostream& operator<<(std::ostream& os, const Extended& x) {
    return os << x.toString();
  }

 private:
  explicit Extended(Kind k) : kind_(k), value_(0) {}
  static int rank(Kind k) { return k == Kind::NegInf ? 0 : (k == Kind::Finite ? 1 : 2); }

  Kind kind_;
  Scalar value_;
};

template <class Scalar>
using ExtendedCost = Extended<Scalar>;

template <class Scalar>
Extended<Scalar> min(const Extended<Scalar>& a, const Extended<Scalar>& b) {
  return b < a ? b : a;
}

/// Tolerance-aware equality; infinities compare by kind.
template <class Scalar>
bool approxEq(const Extended<Scalar>& a, const Extended<Scalar>& b) {
  if (a.kind() != b.kind()) return false;
  return !a.isFinite() || approxEq<Scalar>(a.value(), b.value());
}

template <class Scalar>
bool approxLeq(const Extended<Scalar>& a, const Extended<Scalar>& b) {
  if (a.isFinite() && b.isFinite()) return approxLeq<Scalar>(a.value(), b.value());
  return a <= b;
}

}  // namespace kantgap
