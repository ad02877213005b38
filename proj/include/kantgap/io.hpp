#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "kantgap/dual.hpp"
#include "kantgap/kellerer.hpp"
#include "kantgap/study.hpp"

namespace kantgap::io {

using Json = nlohmann::ordered_json;

/// Reads a rational from a JSON string ("p/q", "0.25") or number. Numbers go
/// through their shortest decimal text, so 0.1 reads as 1/10.
Rational rationalFromJson(const Json& value);

/// Like rationalFromJson but also accepts "inf" in any letter case.
ExtendedCost<Rational> costFromJson(const Json& value);

Instance<Rational> parseProblem(const Json& doc);
Instance<Rational> loadProblem(const std::string& path);
Json problemToJson(const Instance<Rational>& inst);

/// A list of [i, j] pairs or a dense rows × cols 0/1 matrix.
CellSet parseCellSet(const Json& doc, int rows, int cols);
CellSet loadCellSet(const std::string& path, int rows, int cols);

Json readJsonFile(const std::string& path);

/// Exact values serialize as "p/q" strings, floating values as numbers.
template <class Scalar>
Json scalarToJson(const Scalar& x) {
  if constexpr (ScalarTraits<Scalar>::exact) {
    return formatScalar(x);
  } else {
    return x == 0 ? 0.0 : x;  // no "-0.0"
  }
}

template <class Scalar>
Json extendedToJson(const Extended<Scalar>& x) {
  if (!x.isFinite()) return x.toString();
  return scalarToJson(x.value());
}

template <class Scalar>
Json dualToJson(const DualPair<Scalar>& pair) {
  Json phi = Json::array(), psi = Json::array();
  for (const auto& p : pair.phi) phi.push_back(extendedToJson(p));
  for (const auto& p : pair.psi) psi.push_back(extendedToJson(p));
  Json out;
  out["phi"] = std::move(phi);
  out["psi"] = std::move(psi);
  out["objective"] = extendedToJson(pair.objective);
  out["feasible"] = pair.feasible;
  return out;
}

template <class Scalar>
Json couplingToJson(const Coupling<Scalar>& pi) {
  Json entries = Json::array();
  for (const auto& [cell, mass] : pi.entries()) entries.push_back({cell.first, cell.second, scalarToJson(mass)});
  return entries;
}

template <class Scalar>
void writeProfileCsv(std::ostream& out, const TransportProfile<Scalar>& profile) {
  out << "mass,cost\n";
  for (const auto& bp : profile.breakpoints()) out << formatScalar(bp.mass) << ',' << formatScalar(bp.cost) << '\n';
}

template <class Scalar>
void writeStudyCsv(std::ostream& out, const std::vector<StudyRow<Scalar>>& rows) {
  out << "n,epsilon,M,P,P_eps,P_trunc,D\n";
  for (const auto& r : rows)
    out << r.n << ',' << formatScalar(r.epsilon) << ',' << formatScalar(r.M) << ',' << r.P.toString() << ','
        << r.Peps.toString() << ',' << r.Ptrunc.toString() << ',' << r.D.toString() << '\n';
}

}  // namespace kantgap::io
