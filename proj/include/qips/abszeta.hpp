#pragma once

// Absolute zeta functions of cyclotomic-shape automorphic forms:
// symbolic expansion into multiple gamma / multiple sine factors, numerical
// evaluation, the Mellin integral Z_f(w, s) and the functional equation.

#include "qips/cyclotomic.hpp"
#include "qips/multiple_gamma.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace qips {

struct GammaTerm {
  /// The factor is Gamma_b(s + shift, omega)^exponent.
  Rational shift;
  int exponent = 1;
  /// Subset I of {1..a} as a bitmask over m_list.
  unsigned subset = 0;
};

struct AbsoluteZetaReport {
  CyclotomicForm form;
  Rational deg_f;
  int D = 0;
  int C = 1;
  std::vector<GammaTerm> gamma_terms;
  std::vector<int> omega;
  /// D/2, present only when C = 1.
  std::optional<Rational> critical_s;

  std::vector<double> omega_values() const { return {omega.begin(), omega.end()}; }
};

/// Expands f = x^{l/2} prod (x^m - 1) / prod (x^n - 1) into
/// zeta_f(s) = prod_I Gamma_b(s - deg f + m(I), n)^{(-1)^|I|} and
/// eps_f(s)  = prod_I S_b(s - deg f + m(I), n)^{(-1)^|I|}.
inline AbsoluteZetaReport expand_absolute_zeta(const CyclotomicForm& form) {
  if (form.ell % 2 != 0) throw std::domain_error("ell must be even");
  if (form.m_list.size() > 20) throw std::domain_error("too many numerator factors to enumerate subsets");
  for (int v : form.m_list)
    if (v <= 0) throw std::domain_error("m entries must be positive");
  for (int v : form.n_list)
    if (v <= 0) throw std::domain_error("n entries must be positive");
  AbsoluteZetaReport r;
  r.form = form;
  const int sum_m = std::accumulate(form.m_list.begin(), form.m_list.end(), 0);
  const int sum_n = std::accumulate(form.n_list.begin(), form.n_list.end(), 0);
  const auto a = static_cast<int>(form.m_list.size());
  const auto b = static_cast<int>(form.n_list.size());
  r.deg_f = Rational(form.ell, 2) + sum_m - sum_n;
  r.D = form.ell + sum_m - sum_n;
  r.C = (a - b) % 2 == 0 ? 1 : -1;
  r.omega = form.n_list;
  if (Rational(r.D) != r.deg_f + Rational(form.ell, 2)) throw identity_violation("D and deg f are inconsistent");
  for (unsigned mask = 0; mask < (1u << a); ++mask) {
    int m_of_i = 0;
    int size = 0;
    for (int i = 0; i < a; ++i)
      if (mask & (1u << i)) {
        m_of_i += form.m_list[static_cast<std::size_t>(i)];
        ++size;
      }
    r.gamma_terms.push_back({Rational(-r.deg_f + m_of_i), size % 2 == 0 ? 1 : -1, mask});
  }
  if (r.gamma_terms.size() != (std::size_t{1} << a)) throw identity_violation("subset enumeration is incomplete");
  if (r.C == 1) r.critical_s = Rational(r.D, 2);
  return r;
}

struct SymbolicFactor {
  Rational argument;
  int exponent = 1;
};

/// zeta_f(s) as Gamma_b factors with concrete arguments.
inline std::vector<SymbolicFactor> zeta_f_factors(const AbsoluteZetaReport& r, const Rational& s) {
  std::vector<SymbolicFactor> out;
  for (const auto& t : r.gamma_terms) out.push_back({Rational(s + t.shift), t.exponent});
  return out;
}

inline std::string format_omega(const std::vector<int>& omega) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < omega.size(); ++i) os << (i ? "," : "") << omega[i];
  os << ")";
  return os.str();
}

/// "Gamma_3(4, (1,4,6)) / Gamma_3(7, (1,4,6))" style rendering.
inline std::string zeta_f_symbolic(const AbsoluteZetaReport& r, const Rational& s) {
  std::string num, den;
  const std::string name = "Gamma_" + std::to_string(r.omega.size());
  for (const auto& f : zeta_f_factors(r, s)) {
    std::string term = name + "(" + f.argument.str() + ", " + format_omega(r.omega) + ")";
    std::string& side = f.exponent > 0 ? num : den;
    side += side.empty() ? term : " * " + term;
  }
  if (num.empty()) num = "1";
  return den.empty() ? num : num + " / " + den;
}

namespace detail {

inline double log_abs_gamma_b(double x, const std::vector<double>& omega) {
  if (omega.empty()) {
    if (x == 0) throw pole_error("Gamma_0 has a pole at 0");
    return -std::log(std::abs(x));
  }
  return log_multiple_gamma(x, omega);
}

}  // namespace detail

/// zeta_f(s) = prod_I Gamma_b(s + shift_I)^{e_I}. Each argument must be
/// positive for b >= 1 (nonzero for b = 0).
inline double evaluate_zeta_f(const AbsoluteZetaReport& r, double s) {
  const auto omega = r.omega_values();
  double log_value = 0.0;
  double sign = 1.0;
  for (const auto& t : r.gamma_terms) {
    const double x = s + to_double(t.shift);
    if (!omega.empty() && !(x > 0))
      throw std::domain_error("Gamma_" + std::to_string(omega.size()) + " argument " + std::to_string(x) +
                              " outside the evaluable window x > 0");
    if (omega.empty() && x < 0) sign = -sign;
    log_value += t.exponent * detail::log_abs_gamma_b(x, omega);
  }
  return sign * std::exp(log_value);
}

/// eps_f(s) = prod_I S_b(s + shift_I)^{e_I}; each argument in (0, |omega|).
inline double epsilon_f(const AbsoluteZetaReport& r, double s) {
  const auto omega = r.omega_values();
  double value = 1.0;
  for (const auto& t : r.gamma_terms) {
    const double sv = multiple_sine(s + to_double(t.shift), omega);
    value *= t.exponent > 0 ? sv : 1.0 / sv;
  }
  return value;
}

struct FunctionalEquationCheck {
  double s = 0.0;
  double lhs = 0.0;  // zeta_f(D - s)^C
  double rhs = 0.0;  // eps_f(s) zeta_f(s)
  double residual = 0.0;
};

/// |zeta_f(D-s)^C - eps_f(s) zeta_f(s)| / |zeta_f(D-s)^C|.
inline FunctionalEquationCheck check_functional_equation(const AbsoluteZetaReport& r, double s) {
  FunctionalEquationCheck c;
  c.s = s;
  const double reflected = evaluate_zeta_f(r, r.D - s);
  c.lhs = r.C == 1 ? reflected : 1.0 / reflected;
  c.rhs = epsilon_f(r, s) * evaluate_zeta_f(r, s);
  c.residual = std::abs(c.lhs - c.rhs) / std::abs(c.lhs);
  return c;
}

/// sum_I (-1)^|I| zeta_b(w, s + shift_I, n).
inline double mellin_subset_sum(const AbsoluteZetaReport& r, double w, double s) {
  const auto omega = r.omega_values();
  double sum = 0.0;
  for (const auto& t : r.gamma_terms) {
    const double x = s + to_double(t.shift);
    if (!(x > 0)) throw std::domain_error("subset-sum argument must be positive");
    sum += t.exponent * multiple_hurwitz_zeta(w, x, omega);
  }
  return sum;
}

inline constexpr double mellin_cutoff = 1e-16;

/// Z_f(w, s) = Gamma(w)^{-1} int_0^inf f(e^t) e^{-st} t^{w-1} dt by tanh-sinh
/// quadrature on [0, T], where T is past the point at which the integrand
/// has decayed below mellin_cutoff of its scale. Needs w > b - a (behaviour
/// at t = 0) and s > deg f (decay at infinity).
inline double mellin_Z(const CyclotomicForm& form, double w, double s) {
  const AbsoluteZetaReport r = expand_absolute_zeta(form);
  const int a = static_cast<int>(form.m_list.size());
  const int b = static_cast<int>(form.n_list.size());
  if (!(w > std::max(0, b - a))) throw std::domain_error("Mellin integral needs w > max(0, b - a)");
  const double deg = to_double(r.deg_f);
  if (!(s > deg)) throw std::domain_error("Mellin integral diverges at infinity unless s > deg f");

  // log f(e^t), with log(e^{kt} - 1) = log(expm1(kt)).
  auto log_f = [&](double t) {
    double v = 0.5 * form.ell * t;
    for (int m : form.m_list) v += std::log(std::expm1(m * t));
    for (int n : form.n_list) v -= std::log(std::expm1(n * t));
    return v;
  };
  auto integrand = [&](double t) {
    if (t <= 0) return 0.0;
    return std::exp(log_f(t) - s * t + (w - 1) * std::log(t));
  };
  // f(e^t) e^{-st} ~ e^{-(s - deg) t} for large t.
  const double rate = s - deg;
  double t_end = 1.0;
  const double scale = std::max(integrand(1.0), std::numeric_limits<double>::min());
  while (integrand(t_end) > mellin_cutoff * scale * 1e-4 || t_end * rate < 40.0) t_end *= 1.5;
  boost::math::quadrature::tanh_sinh<double> quad;
  const double value = quad.integrate(integrand, 0.0, t_end);
  return value / std::tgamma(w);
}

}  // namespace qips
