#pragma once

// Multiple Hurwitz zeta, multiple gamma and multiple sine functions:
//   zeta_r(s, x, w) = sum_{n >= 0} (n . w + x)^{-s}
//   Gamma_r(x, w)   = exp(d/ds zeta_r(s, x, w) at s = 0)
//   S_r(x, w)       = Gamma_r(x, w)^{-1} Gamma_r(|w| - x, w)^{(-1)^r}

#include <boost/math/special_functions/bernoulli.hpp>
#include <boost/math/special_functions/factorials.hpp>

#include <cmath>
#include <complex>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

namespace qips {

class pole_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

inline constexpr double pole_distance = 1e-8;
inline constexpr double euler_maclaurin_tol = 1e-13;
inline constexpr int euler_maclaurin_order = 5;  // Bernoulli terms B_2 .. B_10

namespace detail {

inline double bernoulli_over_factorial(int k) {
  return boost::math::bernoulli_b2n<double>(k) / boost::math::factorial<double>(static_cast<unsigned>(2 * k));
}

template <class S>
double real_of(const S& s) {
  if constexpr (std::is_same_v<S, double>) {
    return s;
  } else {
    return s.real();
  }
}

/// Number of directly summed terms before the Euler-Maclaurin tail, chosen so
/// that the first omitted correction, |B12/12!| prod_j max(|s+j|,1) (w/y)^11,
/// is below euler_maclaurin_tol relative to the leading behaviour.
template <class S>
int shift_count(const S& s, double x, double omega) {
  double growth = std::abs(bernoulli_over_factorial(euler_maclaurin_order + 1));
  for (int j = 0; j < 2 * euler_maclaurin_order + 1; ++j) growth *= std::max(std::abs(s + S(j)), 1.0);
  const double ratio = std::pow(euler_maclaurin_tol / growth, 1.0 / (2 * euler_maclaurin_order + 1));
  const double y_min = omega / ratio;
  const int m = static_cast<int>(std::ceil((y_min - x) / omega));
  return std::max(m, 2);
}

template <class S>
S zeta_recursive(const S& s, double x, std::span<const double> omega) {
  if (omega.empty()) return std::exp(-s * std::log(x));
  const double w = omega.back();
  const auto inner = omega.first(omega.size() - 1);
  if (std::abs(s - S(1)) < 1e-14) throw pole_error("pole of the tail integral at s = 1");
  const int m = shift_count(s, x, w);
  S sum(0);
  for (int n = 0; n < m; ++n) sum += zeta_recursive(s, x + n * w, inner);
  const double y = x + m * w;
  sum += zeta_recursive(S(s - S(1)), y, inner) / ((s - S(1)) * w);
  sum += 0.5 * zeta_recursive(s, y, inner);
  S rising = s;  // (s)_{2k-1}
  double wpow = w;
  for (int k = 1; k <= euler_maclaurin_order; ++k) {
    sum += bernoulli_over_factorial(k) * wpow * rising * zeta_recursive(S(s + S(2 * k - 1)), y, inner);
    rising *= (s + S(2 * k - 1)) * (s + S(2 * k));
    wpow *= w * w;
  }
  return sum;
}

inline void check_omega(std::span<const double> omega) {
  for (double w : omega)
    if (!(w > 0) || !std::isfinite(w)) throw std::domain_error("periods must be positive and finite");
}

}  // namespace detail

/// zeta_r(s, x, omega) by recursive Euler-Maclaurin continuation in the last
/// period. Poles at s = 1, ..., r raise pole_error.
template <class S>
S multiple_hurwitz_zeta(const S& s, double x, std::span<const double> omega) {
  static_assert(std::is_same_v<S, double> || std::is_same_v<S, std::complex<double>>);
  if (!(x > 0) || !std::isfinite(x)) throw std::domain_error("x must be positive");
  detail::check_omega(omega);
  const int r = static_cast<int>(omega.size());
  for (int j = 1; j <= r; ++j)
    if (std::abs(s - S(j)) < pole_distance) throw pole_error("s = " + std::to_string(j) + " is a pole of zeta_" + std::to_string(r));
  // At non-positive integers the recursion meets 0 * pole products that are
  // removable; evaluate on both sides and average.
  const double re = detail::real_of(s);
  const double nearest = std::round(re);
  if (r >= 2 && nearest <= 0 && std::abs(s - S(nearest)) < 1e-6) {
    const double delta = 1e-5;
    return (detail::zeta_recursive(S(S(nearest) + S(delta)), x, omega) +
            detail::zeta_recursive(S(S(nearest) - S(delta)), x, omega)) /
           2.0;
  }
  return detail::zeta_recursive(s, x, omega);
}

inline double multiple_hurwitz_zeta(double s, double x, const std::vector<double>& omega) {
  return multiple_hurwitz_zeta<double>(s, x, std::span<const double>(omega));
}

inline std::complex<double> multiple_hurwitz_zeta(std::complex<double> s, double x, const std::vector<double>& omega) {
  return multiple_hurwitz_zeta<std::complex<double>>(s, x, std::span<const double>(omega));
}

inline constexpr double gamma_step = 1e-4;

/// d/ds zeta_r(s, x, omega) at s = 0: central differences at h and h/2
/// combined by one Richardson step.
inline double log_multiple_gamma(double x, const std::vector<double>& omega) {
  if (!(x > 0)) throw std::domain_error("multiple gamma needs x > 0");
  detail::check_omega(omega);
  const std::span<const double> w(omega);
  auto central = [&](double h) {
    return (detail::zeta_recursive(h, x, w) - detail::zeta_recursive(-h, x, w)) / (2 * h);
  };
  const double d1 = central(gamma_step);
  const double d2 = central(gamma_step / 2);
  return (4 * d2 - d1) / 3;
}

/// Order 0 is 1/x and accepts any nonzero x.
inline double multiple_gamma(double x, const std::vector<double>& omega) {
  if (omega.empty()) {
    if (x == 0) throw pole_error("Gamma_0 has a pole at 0");
    return 1.0 / x;
  }
  return std::exp(log_multiple_gamma(x, omega));
}

/// Defined on the principal window 0 < x < |omega|. Order 0 is the constant
/// Gamma_0(x)^{-1} Gamma_0(-x) = -1.
inline double multiple_sine(double x, const std::vector<double>& omega) {
  detail::check_omega(omega);
  if (omega.empty()) {
    if (x == 0) throw std::domain_error("S_0 is undefined at 0");
    return -1.0;
  }
  const double total = std::accumulate(omega.begin(), omega.end(), 0.0);
  if (!(x > 0 && x < total))
    throw std::domain_error("multiple sine argument " + std::to_string(x) + " outside (0, " + std::to_string(total) + ")");
  const double sign = omega.size() % 2 == 0 ? 1.0 : -1.0;
  return std::exp(-log_multiple_gamma(x, omega) + sign * log_multiple_gamma(total - x, omega));
}

}  // namespace qips
