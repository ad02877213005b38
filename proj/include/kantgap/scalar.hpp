#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/eigen.hpp>
#include <Eigen/Dense>

#include <charconv>
#include <cmath>
#include <string>
#include <string_view>

#include "kantgap/errors.hpp"

namespace kantgap {

/// Exact arithmetic mode. Expression templates are disabled so the type
/// composes with Eigen's own expression machinery.
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;

template <class Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <class Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
using Mask = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;
using VectorMask = Eigen::Array<bool, Eigen::Dynamic, 1>;

/// Parses "p/q", integers and plain decimals ("0.25", "1e-3") into an exact
/// rational.
Rational parseRational(std::string_view text);

template <class Scalar>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
  static constexpr bool exact = true;
  static Rational tolerance() { return Rational(0); }
  static Rational fromRational(const Rational& r) { return r; }
  static Rational parse(std::string_view text) { return parseRational(text); }
  static std::string toString(const Rational& r) { return r.str(); }
  static double toDouble(const Rational& r) { return r.convert_to<double>(); }
};

template <>
struct ScalarTraits<double> {
  static constexpr bool exact = false;
  static double tolerance() { return 1e-9; }
  static double fromRational(const Rational& r) { return r.convert_to<double>(); }
  static double parse(std::string_view text) {
    return parseRational(text).convert_to<double>();
  }
  static std::string toString(double x) {
    if (x == 0.0) return "0";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
  }
  static double toDouble(double x) { return x; }
};

// Tolerance-aware comparisons. In exact mode these are the plain relations.
template <class Scalar>
bool isZero(const Scalar& x) {
  if constexpr (ScalarTraits<Scalar>::exact) {
    return x == 0;
  } else {
    return std::abs(x) <= ScalarTraits<Scalar>::tolerance();
  }
}

template <class Scalar>
bool isPositive(const Scalar& x) {
  return x > ScalarTraits<Scalar>::tolerance();
}

template <class Scalar>
bool approxLeq(const Scalar& a, const Scalar& b) {
  return a <= b + ScalarTraits<Scalar>::tolerance();
}

template <class Scalar>
bool approxEq(const Scalar& a, const Scalar& b) {
  return isZero<Scalar>(a - b);
}

template <class Scalar>
bool approxLess(const Scalar& a, const Scalar& b) {
  return a < b - ScalarTraits<Scalar>::tolerance();
}

template <class Scalar>
std::string formatScalar(const Scalar& x) {
  return ScalarTraits<Scalar>::toString(x);
}

template <class To>
Vector<To> castVector(const Vector<Rational>& v) {
  Vector<To> out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out(i) = ScalarTraits<To>::fromRational(v(i));
  return out;
}

}  // namespace kantgap
