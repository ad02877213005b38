#include "kantgap/io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>

namespace kantgap {

namespace {

[[noreturn]] void badNumber(std::string_view text) {
  throw Error(ErrorCode::ParseError, "not a rational number: '" + std::string(text) + "'");
}

bool allDigits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char ch) { return std::isdigit(ch); });
}

// GMP auto-detects the base from a leading 0, so strip leading zeros.
boost::multiprecision::mpz_int decimal(std::string_view digits) {
  while (digits.size() > 1 && digits.front() == '0') digits.remove_prefix(1);
  return boost::multiprecision::mpz_int{std::string(digits.empty() ? "0" : digits)};
}

boost::multiprecision::mpz_int parseInteger(std::string_view text, std::string_view whole) {
  bool negative = false;
  if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  if (!allDigits(text)) badNumber(whole);
  boost::multiprecision::mpz_int value = decimal(text);
  if (negative) value = -value;
  return value;
}

}  // namespace

Rational parseRational(std::string_view text) {
  const std::string_view whole = text;
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) badNumber(whole);

  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    const auto num = parseInteger(text.substr(0, slash), whole);
    const std::string_view denText = text.substr(slash + 1);
    if (!allDigits(denText)) badNumber(whole);
    const boost::multiprecision::mpz_int den = decimal(denText);
    if (den == 0) throw Error(ErrorCode::ParseError, "zero denominator in '" + std::string(whole) + "'");
    return Rational(num, den);
  }

  // Decimal with optional exponent: [+-]digits[.digits][e[+-]digits]
  long exponent = 0;
  if (const auto e = text.find_first_of("eE"); e != std::string_view::npos) {
    const auto expValue = parseInteger(text.substr(e + 1), whole);
    if (abs(expValue) > 4096) throw Error(ErrorCode::ParseError, "exponent out of range in '" + std::string(whole) + "'");
    exponent = expValue.convert_to<long>();
    text = text.substr(0, e);
  }
  bool negative = false;
  if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  std::string digits;
  if (const auto dot = text.find('.'); dot != std::string_view::npos) {
    const std::string_view intPart = text.substr(0, dot), fracPart = text.substr(dot + 1);
    if ((intPart.empty() && fracPart.empty()) || (!intPart.empty() && !allDigits(intPart)) ||
        (!fracPart.empty() && !allDigits(fracPart)))
      badNumber(whole);
    digits = std::string(intPart) + std::string(fracPart);
    exponent -= static_cast<long>(fracPart.size());
  } else {
    if (!allDigits(text)) badNumber(whole);
    digits = std::string(text);
  }
  Rational value{decimal(digits)};
  const Rational ten(10);
  Rational scale(1);
  for (long k = 0; k < std::abs(exponent); ++k) scale *= ten;
  value = exponent >= 0 ? Rational(value * scale) : Rational(value / scale);
  return negative ? Rational(-value) : value;
}

namespace io {

namespace {

bool isInfToken(const std::string& s) {
  std::string lower(s);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char ch) { return std::tolower(ch); });
  return lower == "inf" || lower == "+inf";
}

std::vector<Json> requireArray(const Json& doc, const char* key, std::size_t size) {
  if (!doc.contains(key) || !doc[key].is_array())
    throw Error(ErrorCode::ParseError, std::string("missing array '") + key + "'");
  if (doc[key].size() != size)
    throw Error(ErrorCode::LengthMismatch, std::string("'") + key + "' has the wrong length");
  return doc[key].get<std::vector<Json>>();
}

int requireSize(const Json& doc, const char* key) {
  if (!doc.contains(key) || !doc[key].is_number_integer())
    throw Error(ErrorCode::ParseError, std::string("missing integer '") + key + "'");
  const int n = doc[key].get<int>();
  if (n < 1) throw Error(ErrorCode::InvalidSpace, std::string("'") + key + "' must be >= 1");
  return n;
}

}  // namespace

Rational rationalFromJson(const Json& value) {
  if (value.is_string()) return parseRational(value.get<std::string>());
  if (value.is_number()) return parseRational(value.dump());
  throw Error(ErrorCode::ParseError, "expected a number, got " + value.dump());
}

ExtendedCost<Rational> costFromJson(const Json& value) {
  if (value.is_string() && isInfToken(value.get<std::string>())) return ExtendedCost<Rational>::infinity();
  return rationalFromJson(value);
}

Instance<Rational> parseProblem(const Json& doc) {
  if (!doc.is_object()) throw Error(ErrorCode::ParseError, "problem must be a JSON object");
  const int nx = requireSize(doc, "nx"), ny = requireSize(doc, "ny");
  Vector<Rational> mu(nx), nu(ny);
  const auto muJson = requireArray(doc, "mu", nx), nuJson = requireArray(doc, "nu", ny);
  for (int i = 0; i < nx; ++i) mu(i) = rationalFromJson(muJson[i]);
  for (int j = 0; j < ny; ++j) nu(j) = rationalFromJson(nuJson[j]);
  const auto rows = requireArray(doc, "cost", nx);
  CostMatrix<Rational> c(nx, ny);
  for (int i = 0; i < nx; ++i) {
    if (!rows[i].is_array() || static_cast<int>(rows[i].size()) != ny)
      throw Error(ErrorCode::DimensionMismatch, "cost row " + std::to_string(i) + " must have ny entries");
    for (int j = 0; j < ny; ++j) c.set(i, j, costFromJson(rows[i][j]));
  }
  return {c, make_marginal<Rational>(mu), make_marginal<Rational>(nu)};
}

Json readJsonFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::ParseError, "invalid JSON in '" + path + "': " + e.what());
  }
}

Instance<Rational> loadProblem(const std::string& path) { return parseProblem(readJsonFile(path)); }

Json problemToJson(const Instance<Rational>& inst) {
  Json doc;
  doc["nx"] = inst.mu.size();
  doc["ny"] = inst.nu.size();
  Json mu = Json::array(), nu = Json::array(), cost = Json::array();
  for (int i = 0; i < inst.mu.size(); ++i) mu.push_back(formatScalar(inst.mu(i)));
  for (int j = 0; j < inst.nu.size(); ++j) nu.push_back(formatScalar(inst.nu(j)));
  for (int i = 0; i < inst.cost.rows(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < inst.cost.cols(); ++j) row.push_back(inst.cost(i, j).toString());
    cost.push_back(std::move(row));
  }
  doc["mu"] = std::move(mu);
  doc["nu"] = std::move(nu);
  doc["cost"] = std::move(cost);
  return doc;
}

CellSet parseCellSet(const Json& doc, int rows, int cols) {
  // {"cells": [[i,j],...]} is always a pair list and {"mask": [[0,1],...]}
  // always dense. A bare array is read as dense when it has the rows x cols
  // shape with 0/1 entries, otherwise as pairs.
  bool forcePairs = false, forceDense = false;
  const Json* body = &doc;
  if (doc.is_object()) {
    forcePairs = doc.contains("cells");
    forceDense = doc.contains("mask");
    if (forcePairs == forceDense) throw Error(ErrorCode::ParseError, "cell set object needs exactly one of 'cells', 'mask'");
    body = forcePairs ? &doc["cells"] : &doc["mask"];
  }
  if (!body->is_array()) throw Error(ErrorCode::ParseError, "cell set must be a JSON array");
  auto isBit = [](const Json& v) { return v.is_number_integer() && (v.get<int>() == 0 || v.get<int>() == 1); };
  const bool denseShape = static_cast<int>(body->size()) == rows &&
                          std::all_of(body->begin(), body->end(), [&](const Json& e) {
                            return e.is_array() && static_cast<int>(e.size()) == cols &&
                                   std::all_of(e.begin(), e.end(), isBit);
                          });
  CellSet L(rows, cols);
  if (forceDense || (!forcePairs && denseShape)) {
    if (!denseShape) throw Error(ErrorCode::DimensionMismatch, "mask must be a rows x cols 0/1 matrix");
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j)
        if ((*body)[i][j].get<int>() == 1) L.insert(i, j);
    return L;
  }
  for (const auto& e : *body) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer())
      throw Error(ErrorCode::ParseError, "cell entries must be [i, j] integer pairs");
    const int i = e[0].get<int>(), j = e[1].get<int>();
    if (i < 0 || i >= rows || j < 0 || j >= cols)
      throw Error(ErrorCode::DimensionMismatch, "cell [" + std::to_string(i) + "," + std::to_string(j) + "] out of range");
    L.insert(i, j);
  }
  return L;
}

CellSet loadCellSet(const std::string& path, int rows, int cols) { return parseCellSet(readJsonFile(path), rows, cols); }

}  // namespace io

}  // namespace kantgap
