#pragma once

#include <vector>

#include "kantgap/lp.hpp"
#include "kantgap/measure.hpp"

namespace kantgap {

namespace detail {

/// Variables of the full-coupling polytope restricted to finite cells.
template <class Scalar>
struct CouplingLp {
  std::vector<Cell> cells;
  lp::LinearProgram<Scalar> program;
};

template <class Scalar>
CouplingLp<Scalar> fullCouplingLp(const Mask& allowed, const Marginal<Scalar>& mu, const Marginal<Scalar>& nu) {
  std::vector<Cell> cells;
  for (int i = 0; i < mu.size(); ++i)
    for (int j = 0; j < nu.size(); ++j)
      if (allowed(i, j)) cells.emplace_back(i, j);
  lp::LinearProgram<Scalar> program(static_cast<int>(cells.size()));
  for (int i = 0; i < mu.size(); ++i) {
    Vector<Scalar> row = Vector<Scalar>::Zero(program.variables());
    for (std::size_t k = 0; k < cells.size(); ++k)
      if (cells[k].first == i) row(k) = Scalar(1);
    program.addConstraint(row, lp::Sense::Equal, mu(i));
  }
  for (int j = 0; j < nu.size(); ++j) {
    Vector<Scalar> col = Vector<Scalar>::Zero(program.variables());
    for (std::size_t k = 0; k < cells.size(); ++k)
      if (cells[k].second == j) col(k) = Scalar(1);
    program.addConstraint(col, lp::Sense::Equal, nu(j));
  }
  program.maximize = true;
  return {std::move(cells), std::move(program)};
}

}  // namespace detail

}  // namespace kantgap
