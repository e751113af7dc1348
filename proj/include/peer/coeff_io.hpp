#pragma once

// JSON coefficient files, one document per triplet. Numbers may be JSON
// numbers or strings holding a decimal or a "p/q" rational.

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "peer/triplet.hpp"

namespace peer {

namespace detail {

using json = nlohmann::json;

inline double parse_number_text(const std::string& field, const std::string& text) {
  auto to_double = [&](std::string_view sv) {
    double v = 0.0;
    const auto res = std::from_chars(sv.data(), sv.data() + sv.size(), v);
    if (res.ec != std::errc() || res.ptr != sv.data() + sv.size())
      throw ParseError(field, "not a number: \"" + text + "\"");
    return v;
  };
  const auto slash = text.find('/');
  if (slash == std::string::npos) return to_double(text);
  const double p = to_double(std::string_view(text).substr(0, slash));
  const double q = to_double(std::string_view(text).substr(slash + 1));
  if (q == 0.0) throw ParseError(field, "zero denominator");
  return p / q;
}

inline double read_number(const json& j, const std::string& field) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return parse_number_text(field, j.get<std::string>());
  throw ParseError(field, "expected a number or a \"p/q\" string");
}

inline const json& require(const json& j, const std::string& key, const std::string& where = "") {
  const std::string field = where.empty() ? key : where + "." + key;
  if (!j.is_object() || !j.contains(key)) throw ParseError(field, "missing");
  return j.at(key);
}

inline Vec read_vector(const json& j, const std::string& field) {
  if (!j.is_array()) throw ParseError(field, "expected an array");
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = read_number(j[i], field);
  return v;
}

inline Mat read_matrix(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) throw ParseError(field, "expected a nonempty array of rows");
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  Mat m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_array()) throw ParseError(field, "row " + std::to_string(i) + " is not an array");
    if (j[i].size() != cols) throw ValidationError(field + ": ragged rows");
    for (std::size_t k = 0; k < cols; ++k)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = read_number(j[i][k], field);
  }
  return m;
}

inline Laurent read_laurent(const json& j, const std::string& field) {
  if (!j.is_array()) throw ParseError(field, "expected a list of [exponent, coefficient]");
  std::map<int, double> terms;
  for (const auto& term : j) {
    if (!term.is_array() || term.size() != 2 || !term[0].is_number_integer())
      throw ParseError(field, "each term must be [integer exponent, coefficient]");
    terms[term[0].get<int>()] = read_number(term[1], field);
  }
  return Laurent(std::move(terms));
}

inline json write_matrix(const Mat& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    rows.push_back(row);
  }
  return rows;
}

inline json write_laurent(const Laurent& l) {
  json terms = json::array();
  for (const auto& [e, coef] : l.terms()) terms.push_back(json::array({e, coef}));
  return terms;
}

}  // namespace detail

/// Serialize; nlohmann prints doubles in shortest round-trip form, so the
/// import is bit-identical.
inline std::string export_coefficients(const PeerTriplet& t) {
  using detail::json;
  json j;
  j["name"] = t.name;
  j["s"] = t.s;
  j["c"] = std::vector<double>(t.c.data(), t.c.data() + t.c.size());
  j["A0"] = detail::write_matrix(t.A0);
  j["K0"] = detail::write_matrix(t.K0);
  j["A"] = detail::write_matrix(t.A);
  j["K"] = detail::write_matrix(t.K);
  j["AN"] = detail::write_matrix(t.AN);
  j["KN"] = detail::write_matrix(t.KN);
  j["bhat"] = {{"a14", t.bhat.a14},
               {"a41", t.bhat.a41},
               {"b24", detail::write_laurent(t.bhat.b24)},
               {"b34", detail::write_laurent(t.bhat.b34)},
               {"b42", detail::write_laurent(t.bhat.b42)},
               {"b43", detail::write_laurent(t.bhat.b43)},
               {"b44", detail::write_laurent(t.bhat.b44)}};
  j["W"] = detail::write_matrix(t.W);
  j["orders"] = {{"r", t.orders.r}, {"q", t.orders.q}, {"r1", t.orders.r1}, {"qb", t.orders.qb}};
  j["sigma_interval"] = {t.sigma_interval.lo, t.sigma_interval.hi};
  j["alpha_deg"] = t.alpha_deg;
  return j.dump(2);
}

inline PeerTriplet import_coefficients(const std::string& text) {
  using detail::json;
  using detail::require;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("<document>", e.what());
  }
  if (!j.is_object()) throw ParseError("<document>", "expected an object");

  PeerTriplet t;
  const json& name = require(j, "name");
  if (!name.is_string()) throw ParseError("name", "expected a string");
  t.name = name.get<std::string>();
  const json& s = require(j, "s");
  if (!s.is_number_integer() || s.get<int>() < 1) throw ParseError("s", "expected a positive integer");
  t.s = s.get<int>();
  t.c = detail::read_vector(require(j, "c"), "c");

  auto square = [&](const char* key) {
    Mat m = detail::read_matrix(require(j, key), key);
    if (m.rows() != m.cols()) throw ValidationError(std::string(key) + " is not square");
    if (m.rows() != t.s) throw ValidationError(std::string(key) + " does not have size s");
    return m;
  };
  t.A0 = square("A0");
  t.K0 = square("K0");
  t.A = square("A");
  t.K = square("K");
  t.AN = square("AN");
  t.KN = square("KN");
  t.W = square("W");
  if (t.c.size() != t.s) throw ValidationError("c does not have length s");

  const json& bh = require(j, "bhat");
  t.bhat.a14 = detail::read_number(require(bh, "a14", "bhat"), "bhat.a14");
  t.bhat.a41 = detail::read_number(require(bh, "a41", "bhat"), "bhat.a41");
  t.bhat.b24 = detail::read_laurent(require(bh, "b24", "bhat"), "bhat.b24");
  t.bhat.b34 = detail::read_laurent(require(bh, "b34", "bhat"), "bhat.b34");
  t.bhat.b42 = detail::read_laurent(require(bh, "b42", "bhat"), "bhat.b42");
  t.bhat.b43 = detail::read_laurent(require(bh, "b43", "bhat"), "bhat.b43");
  t.bhat.b44 = detail::read_laurent(require(bh, "b44", "bhat"), "bhat.b44");

  const json& ord = require(j, "orders");
  auto order = [&](const char* key) {
    const json& v = require(ord, key, "orders");
    if (!v.is_number_integer()) throw ParseError(std::string("orders.") + key, "expected an integer");
    return v.get<int>();
  };
  t.orders = {order("r"), order("q"), order("r1"), order("qb")};

  const Vec iv = detail::read_vector(require(j, "sigma_interval"), "sigma_interval");
  if (iv.size() != 2) throw ParseError("sigma_interval", "expected [lo, hi]");
  t.sigma_interval = {iv(0), iv(1)};
  if (j.contains("alpha_deg")) t.alpha_deg = detail::read_number(j["alpha_deg"], "alpha_deg");
  return t;
}

inline PeerTriplet load_coefficient_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("<document>", "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return import_coefficients(ss.str());
}

}  // namespace peer
