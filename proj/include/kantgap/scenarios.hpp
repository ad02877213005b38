#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "kantgap/measure.hpp"

namespace kantgap {

enum class MarginalKind { Uniform, Random, RandomWithZeros };

MarginalKind parseMarginalKind(const std::string& name);

/// Discretized zero-one-infinity cost on n uniform atoms:
/// c(i,j) = 0 for j < i, 1 for j = i, inf for j > i.
Instance<Rational> example_diagonal(int n);

/// Seeded instance. Each cell is Infinite with probability infDensity,
/// otherwise a rational k/2^e in [0, 8] with e <= 6. Marginals are
/// normalized to probability.
Instance<Rational> random_instance(int nx, int ny, double infDensity, MarginalKind marginals, std::uint64_t seed);

/// Uniform n × n instance with cost inf on the band 1 <= j - i <= bandwidth
/// and 0 elsewhere.
Instance<Rational> closed_inf_band(int n, int bandwidth);

template <class Scalar>
using ScenarioFamily = std::function<Instance<Scalar>(int)>;

template <class Scalar>
ScenarioFamily<Scalar> diagonal_family() {
  return [](int n) { return example_diagonal(n).template cast<Scalar>(); };
}

}  // namespace kantgap
