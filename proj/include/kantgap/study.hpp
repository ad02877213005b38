#pragma once

#include <string>
#include <vector>

#include "kantgap/dual.hpp"
#include "kantgap/scenarios.hpp"

namespace kantgap {

/// An epsilon grid entry: either a fixed value or k/n relative to the
/// instance size ("1/n").
template <class Scalar>
struct EpsilonSpec {
  Scalar value;
  bool perN = false;

  Scalar resolve(int n) const { return perN ? Scalar(value / Scalar(n)) : value; }
};

/// Parses "1/4", "0.1" or "k/n".
template <class Scalar>
EpsilonSpec<Scalar> parseEpsilonSpec(const std::string& token) {
  const auto slash = token.find('/');
  if (slash != std::string::npos && token.substr(slash + 1) == "n")
    return {ScalarTraits<Scalar>::parse(token.substr(0, slash)), true};
  return {ScalarTraits<Scalar>::parse(token), false};
}

template <class Scalar>
struct StudyRow {
  int n;
  Scalar epsilon;
  Scalar M;
  ExtendedCost<Scalar> P;
  ExtendedCost<Scalar> Peps;
  ExtendedCost<Scalar> Ptrunc;
  ExtendedCost<Scalar> D;
};

/// Double-limit table over a scenario family: one row per (n, eps, M), in
/// parameter order. For the diagonal family P_n = D_n = 1 for every n while
/// P^{1/n}_n = 0, which is how the continuum gap shows up: the limits in
/// n and eps do not commute.
template <class Scalar>
std::vector<StudyRow<Scalar>> refinement_study(const ScenarioFamily<Scalar>& family, const std::vector<int>& nList,
                                               const std::vector<EpsilonSpec<Scalar>>& epsList,
                                               const std::vector<Scalar>& MList) {
  std::vector<StudyRow<Scalar>> rows;
  for (int n : nList) {
    const Instance<Scalar> inst = family(n);
    const TransportProfile<Scalar> profile = solve_profile(inst.cost, inst.mu, inst.nu);
    const ExtendedCost<Scalar> P = evaluate_profile(profile, Scalar(1));
    const ExtendedCost<Scalar> D = dual_value(inst.cost, inst.mu, inst.nu).value;
    std::vector<ExtendedCost<Scalar>> truncated;
    for (const auto& M : MList) truncated.push_back(primal_value(truncate_cost(inst.cost, M), inst.mu, inst.nu));
    for (const auto& spec : epsList) {
      const Scalar eps = spec.resolve(n);
      if (eps < 0 || eps > 1) throw Error(ErrorCode::EpsilonOutOfRange, "epsilon must lie in [0, 1]");
      const ExtendedCost<Scalar> Peps = evaluate_profile(profile, Scalar(1) - eps);
      for (std::size_t k = 0; k < MList.size(); ++k) rows.push_back({n, eps, MList[k], P, Peps, truncated[k], D});
    }
  }
  return rows;
}

}  // namespace kantgap
