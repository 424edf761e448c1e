#pragma once

// JSON encoding of scalars, matrices, polynomials and reports. Exact values
// are written as "num/den" strings, binary64 values as JSON numbers.

#include "qips/abszeta.hpp"
#include "qips/ips.hpp"
#include "qips/zeta.hpp"

#include <json.hpp>

#include <complex>
#include <fstream>
#include <stdexcept>
#include <string>

namespace qips::io {

using json = nlohmann::ordered_json;

/// Input that fails validation (bad file, bad syntax, out-of-range values).
class input_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline json to_json(double x) {
  if (!std::isfinite(x)) return nullptr;
  return x;
}
inline json to_json(long double x) { return to_json(static_cast<double>(x)); }
inline json to_json(const Rational& x) { return x.str(); }
inline json to_json(const std::complex<double>& z) { return json::array({to_json(z.real()), to_json(z.imag())}); }

template <class T>
json to_json(const Matrix<T>& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

template <class T>
json to_json(const Polynomial<T>& p) {
  json coeffs = json::array();
  for (const auto& c : p.coeffs()) coeffs.push_back(to_json(c));
  return {{"mode", to_string(scalar_traits<T>::mode)}, {"coeffs", std::move(coeffs)}};
}

template <class T>
json to_json(const RationalFunction<T>& f) {
  return {{"numerator", to_json(f.numerator())}, {"denominator", to_json(f.denominator())}};
}

inline json to_json(const std::vector<int>& v) { return json(v); }

inline json to_json(const ArcSet& arcs, const Graph& graph) {
  json out = json::array();
  for (const auto& a : arcs.arcs())
    out.push_back({graph.labels()[static_cast<std::size_t>(a.origin)], graph.labels()[static_cast<std::size_t>(a.terminus)]});
  return out;
}

template <class T>
json to_json(const MarkovChain<T>& chain) {
  json edges = json::array();
  for (auto [u, v] : chain.graph.edges()) edges.push_back({u, v});
  json prob = json::array();
  for (const auto& p : chain.prob) prob.push_back(to_json(p));
  return {{"vertices", chain.graph.labels()},
          {"edges", std::move(edges)},
          {"arc_order", "lexicographic (origin, terminus)"},
          {"arcs", to_json(chain.arcs, chain.graph)},
          {"probabilities", std::move(prob)}};
}

inline json to_json(const Classification& c) {
  return {{"right_preserving", c.right_preserving}, {"is_pca", c.is_pca}, {"is_qca", c.is_qca}, {"tolerance", c.tolerance}};
}

inline json to_json(const SpectrumReport& s) {
  json pairs = json::array();
  for (const auto& z : s.unit_circle_pairs) pairs.push_back(to_json(z));
  return {{"mu", s.mu_list},
          {"unit_circle_pairs", std::move(pairs)},
          {"minus_one_mult", s.minus_one_mult},
          {"plus_one_mult", s.plus_one_mult},
          {"cancelled_plus_one", s.cancelled}};
}

inline json to_json(const AutomorphyWitness& w) { return {{"C", w.C}, {"D", w.D}}; }

inline json to_json(const CyclotomicForm& f) { return {{"ell", f.ell}, {"m", f.m_list}, {"n", f.n_list}}; }

inline json to_json(const AbsoluteZetaReport& r) {
  json terms = json::array();
  for (const auto& t : r.gamma_terms) terms.push_back({{"shift", to_json(t.shift)}, {"exponent", t.exponent}});
  json out = {{"deg_f", to_json(r.deg_f)}, {"D", r.D}, {"C", r.C}};
  out["critical_s"] = r.critical_s ? to_json(*r.critical_s) : json(nullptr);
  out["gamma_terms"] = std::move(terms);
  out["sine_terms"] = out["gamma_terms"];
  out["omega"] = r.omega;
  return out;
}

/// Scalar from a JSON number or a rational string such as "1/3".
inline Rational rational_from_json(const json& j, const std::string& where) {
  try {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<long long>());
    if (j.is_number()) return parse_rational(j.dump());
  } catch (const std::invalid_argument& e) {
    throw input_error(where + ": " + e.what());
  }
  throw input_error(where + ": expected a number or a rational string");
}

struct ComplexRational {
  Rational re;
  Rational im;
};

/// A local-operator entry: real scalar or [re, im].
inline ComplexRational complex_from_json(const json& j, const std::string& where) {
  if (j.is_array()) {
    if (j.size() != 2) throw input_error(where + ": complex entries are [re, im]");
    return {rational_from_json(j[0], where + "[0]"), rational_from_json(j[1], where + "[1]")};
  }
  return {rational_from_json(j, where), Rational(0)};
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw input_error(path + ": " + e.what());
  }
}

}  // namespace qips::io
