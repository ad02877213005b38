#pragma once

// Seeded generators for property tests. Only raw mt19937_64 output is used,
// so every case is reproducible across standard libraries.

#include <cstdint>
#include <random>

#include "kantgap/kellerer.hpp"
#include "kantgap/scenarios.hpp"

namespace kantgap::testing {

class Draws {
 public:
  explicit Draws(std::uint64_t seed) : engine_(seed * 0x9E3779B97F4A7C15ULL + 1) {}

  int between(int lo, int hi) { return lo + static_cast<int>(engine_() % static_cast<std::uint64_t>(hi - lo + 1)); }
  bool chance(int numerator, int denominator) { return static_cast<int>(engine_() % denominator) < numerator; }
  std::uint64_t raw() { return engine_(); }

  Rational fraction(int maxDen) { return Rational(between(0, maxDen), maxDen); }

 private:
  std::mt19937_64 engine_;
};

inline Instance<Rational> randomInstance(Draws& d, int maxSide, int infPercent, MarginalKind kind) {
  const int nx = d.between(1, maxSide), ny = d.between(1, maxSide);
  return random_instance(nx, ny, infPercent / 100.0, kind, d.raw());
}

inline CellSet randomCellSet(Draws& d, int rows, int cols, int percent) {
  CellSet L(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      if (d.chance(percent, 100)) L.insert(i, j);
  return L;
}

/// Probability marginal with integer weights 0..8 (at least one positive).
inline Marginal<Rational> randomMarginal(Draws& d, int n, bool allowZeros) {
  Vector<Rational> w(n);
  for (int i = 0; i < n; ++i) w(i) = Rational(d.between(allowZeros ? 0 : 1, 8));
  if (w.sum() == 0) w(d.between(0, n - 1)) = Rational(1);
  return make_marginal<Rational>(Vector<Rational>(w / w.sum()));
}

/// A random nonnegative matrix with positive mass, as a coupling.
inline Coupling<Rational> randomPositiveCoupling(Draws& d, int rows, int cols) {
  Matrix<Rational> m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = d.chance(2, 3) ? Rational(d.between(1, 12), 48) : Rational(0);
  if (m.sum() == 0) m(0, 0) = Rational(1, 4);
  return Coupling<Rational>::fromDense(m);
}

}  // namespace kantgap::testing
