#include "qips/abszeta.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/polygamma.hpp>
#include <gtest/gtest.h>

#include <random>

using namespace qips;

namespace {

const double pi = boost::math::constants::pi<double>();

Polynomial<Rational> xk_minus_one(int k) { return Polynomial<Rational>::monomial(1, static_cast<std::size_t>(k)) - Polynomial<Rational>::constant(1); }

RationalFunction<Rational> case_one() { return {Polynomial<Rational>::constant(1), xk_minus_one(2) * xk_minus_one(6)}; }

RationalFunction<Rational> case_two() {
  return {xk_minus_one(3), xk_minus_one(1) * xk_minus_one(4) * xk_minus_one(6)};
}

/// zeta_2(3, 10, (2,6)) from the inner Hurwitz sums in closed form,
/// sum_k (-1/16) psi''(5 + 3k), truncated at M and M' = 2M, then
/// extrapolated in 1/M.
double zeta2_case_one_oracle() {
  auto partial = [](int m) {
    double s = 0.0;
    for (int k = m - 1; k >= 0; --k) s += -boost::math::polygamma(2, 5.0 + 3.0 * k) / 16.0;
    return s;
  };
  const int m = 100000;
  return 2 * partial(2 * m) - partial(m);
}

double relative(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST(Cyclotomic, NumberTheory) {
  EXPECT_EQ(euler_phi(1), 1);
  EXPECT_EQ(euler_phi(12), 4);
  EXPECT_EQ(mobius(30), -1);
  EXPECT_EQ(mobius(12), 0);
  EXPECT_EQ(cyclotomic_polynomial(6), (Polynomial<Rational>{1, -1, 1}));
  // x^12 - 1 is the product of Phi_d over d | 12.
  Polynomial<Rational> prod = Polynomial<Rational>::constant(1);
  for (int d : {1, 2, 3, 4, 6, 12}) prod *= cyclotomic_polynomial(d);
  EXPECT_EQ(prod, xk_minus_one(12));
}

TEST(Automorphy, WorkedCaseAndMonomial) {
  EXPECT_EQ(detect_automorphy(case_one()), (AutomorphyWitness{1, -8}));
  EXPECT_EQ(detect_automorphy(case_two()), (AutomorphyWitness{1, -8}));
  EXPECT_EQ(detect_automorphy(RationalFunction<Rational>::polynomial(Polynomial<Rational>::monomial(1, 1))),
            (AutomorphyWitness{1, 2}));
  EXPECT_FALSE(detect_automorphy(RationalFunction<Rational>::polynomial(Polynomial<Rational>{1, 2})).has_value());
  // (x - 1) is anti-reciprocal.
  EXPECT_EQ(detect_automorphy(RationalFunction<Rational>::polynomial(xk_minus_one(1))), (AutomorphyWitness{-1, 1}));
}

TEST(Automorphy, FloatPalindrome) {
  const Polynomial<double> p{1.0, -0.6, 0.2, -0.6, 1.0};
  EXPECT_EQ(detect_automorphy(Polynomial<double>::constant(1.0), p), (AutomorphyWitness{1, -4}));
}

TEST(CyclotomicForm, WorkedCases) {
  const auto one = to_cyclotomic_form(case_one());
  ASSERT_TRUE(one.ok());
  EXPECT_EQ(*one.form, (CyclotomicForm{0, {}, {2, 6}}));
  const auto two = to_cyclotomic_form(case_two());
  ASSERT_TRUE(two.ok());
  EXPECT_EQ(*two.form, (CyclotomicForm{0, {3}, {1, 4, 6}}));
}

TEST(CyclotomicForm, Failures) {
  const RationalFunction<Rational> golden{Polynomial<Rational>::constant(1), Polynomial<Rational>{-1, -1, 1}};
  EXPECT_EQ(to_cyclotomic_form(golden).failure, CyclotomicFailure::not_cyclotomic);
  const RationalFunction<Rational> negated{Polynomial<Rational>::constant(-1), xk_minus_one(2) * xk_minus_one(6)};
  EXPECT_EQ(to_cyclotomic_form(negated).failure, CyclotomicFailure::sign_mismatch);
  const RationalFunction<Rational> scaled{Polynomial<Rational>::constant(2), xk_minus_one(2)};
  EXPECT_EQ(to_cyclotomic_form(scaled).failure, CyclotomicFailure::not_cyclotomic);
}

TEST(CyclotomicForm, RoundTrip) {
  const std::vector<CyclotomicForm> forms{{0, {}, {2, 6}}, {0, {3}, {1, 4, 6}}, {2, {}, {}}, {-4, {5, 5}, {1, 2}},
                                          {6, {12}, {3, 3, 4}}};
  for (const auto& form : forms) {
    const auto out = to_cyclotomic_form(reconstruct(form));
    ASSERT_TRUE(out.ok()) << out.detail;
    auto expect = form;
    std::sort(expect.m_list.begin(), expect.m_list.end());
    std::sort(expect.n_list.begin(), expect.n_list.end());
    EXPECT_EQ(*out.form, expect);
  }
}

TEST(AbsoluteZeta, CaseOne) {
  const auto r = expand_absolute_zeta({0, {}, {2, 6}});
  EXPECT_EQ(r.deg_f, -8);
  EXPECT_EQ(r.D, -8);
  EXPECT_EQ(r.C, 1);
  ASSERT_EQ(r.gamma_terms.size(), 1u);
  EXPECT_EQ(r.gamma_terms[0].shift, 8);
  ASSERT_TRUE(r.critical_s.has_value());
  EXPECT_EQ(*r.critical_s, -4);
  EXPECT_EQ(zeta_f_symbolic(r, *r.critical_s), "Gamma_2(4, (2,6))");
}

TEST(AbsoluteZeta, CaseTwo) {
  const auto r = expand_absolute_zeta({0, {3}, {1, 4, 6}});
  EXPECT_EQ(r.D, -8);
  EXPECT_EQ(r.C, 1);
  ASSERT_EQ(r.gamma_terms.size(), 2u);
  EXPECT_EQ(r.gamma_terms[0].shift, 8);
  EXPECT_EQ(r.gamma_terms[1].shift, 11);
  EXPECT_EQ(r.gamma_terms[1].exponent, -1);
  EXPECT_EQ(zeta_f_symbolic(r, -4), "Gamma_3(4, (1,4,6)) / Gamma_3(7, (1,4,6))");
}

TEST(AbsoluteZeta, MonomialAndOddCase) {
  const auto r = expand_absolute_zeta({2, {}, {}});
  EXPECT_EQ(r.deg_f, 1);
  EXPECT_EQ(r.D, 2);
  EXPECT_DOUBLE_EQ(evaluate_zeta_f(r, 3.0), 0.5);
  EXPECT_DOUBLE_EQ(evaluate_zeta_f(r, 0.0), -1.0);
  const auto odd = expand_absolute_zeta({0, {}, {1}});
  EXPECT_EQ(odd.C, -1);
  EXPECT_FALSE(odd.critical_s.has_value());
  EXPECT_THROW(expand_absolute_zeta({1, {}, {}}), std::domain_error);
}

TEST(MultipleZeta, BaseCases) {
  EXPECT_NEAR(multiple_hurwitz_zeta(2.0, 3.0, std::vector<double>{}), 1.0 / 9, 1e-16);
  EXPECT_NEAR(multiple_hurwitz_zeta(2.0, 1.0, std::vector<double>{1}), pi * pi / 6, 1e-12);
  // Hurwitz value at s = 0 is 1/2 - x.
  EXPECT_NEAR(multiple_hurwitz_zeta(0.0, 0.3, std::vector<double>{1}), 0.2, 1e-12);
  EXPECT_THROW(multiple_hurwitz_zeta(2.0, 1.0, std::vector<double>{1, 2}), pole_error);
  EXPECT_THROW(multiple_hurwitz_zeta(2.0, -1.0, std::vector<double>{1}), std::domain_error);
}

TEST(MultipleZeta, DoubleSumOracle) {
  const double value = multiple_hurwitz_zeta(3.0, 10.0, std::vector<double>{2, 6});
  EXPECT_NEAR(value, zeta2_case_one_oracle(), 1e-8 * value);
}

TEST(MultipleZeta, ScalingProperty) {
  for (double s : {-2.5, 0.5, 2.0, 3.5})
    for (double x : {0.3, 1.7, 4.0}) {
      const double w = 2.5;
      const double lhs = multiple_hurwitz_zeta(s, x, std::vector<double>{w});
      const double rhs = std::pow(w, -s) * multiple_hurwitz_zeta(s, x / w, std::vector<double>{1});
      EXPECT_NEAR(lhs, rhs, 1e-10 * std::max(1.0, std::abs(rhs)));
    }
}

TEST(MultipleZeta, ComplexArgument) {
  const std::complex<double> s(2.0, 0.0);
  const auto z = multiple_hurwitz_zeta(s, 1.0, std::vector<double>{1});
  EXPECT_NEAR(z.real(), pi * pi / 6, 1e-12);
  EXPECT_NEAR(z.imag(), 0.0, 1e-14);
}

TEST(MultipleGamma, OrderZeroAndLerch) {
  EXPECT_DOUBLE_EQ(multiple_gamma(4.0, {}), 0.25);
  EXPECT_NEAR(multiple_gamma(1.0, {1}), 1 / std::sqrt(2 * pi), 1e-8);
  for (double x : {0.5, 1.0, 2.0, 3.7}) EXPECT_NEAR(multiple_gamma(x, {1}) / (std::tgamma(x) / std::sqrt(2 * pi)), 1.0, 1e-7);
  // Period w: w^(x/w - 1/2) Gamma(x/w) / sqrt(2 pi).
  for (double x : {0.4, 1.3, 5.0}) {
    const double w = 2.0;
    const double expected = std::pow(w, x / w - 0.5) * std::tgamma(x / w) / std::sqrt(2 * pi);
    EXPECT_NEAR(multiple_gamma(x, {w}) / expected, 1.0, 1e-7);
  }
}

TEST(MultipleGamma, Ladder) {
  EXPECT_NEAR(multiple_gamma(10, {2, 6}) / (multiple_gamma(4, {2, 6}) / multiple_gamma(4, {2})), 1.0, 1e-7);
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> x(0.1, 5.0), w(0.5, 4.0);
  for (int r = 1; r <= 3; ++r)
    for (int trial = 0; trial < 6; ++trial) {
      std::vector<double> omega;
      for (int i = 0; i < r; ++i) omega.push_back(w(rng));
      const std::vector<double> inner(omega.begin(), omega.end() - 1);
      const double at = x(rng);
      const double lhs = multiple_gamma(at + omega.back(), omega) * multiple_gamma(at, inner);
      EXPECT_NEAR(lhs / multiple_gamma(at, omega), 1.0, 1e-7);
    }
}

TEST(MultipleSine, ClosedFormsAndReflection) {
  EXPECT_NEAR(multiple_sine(1.0, {2}), 2.0, 1e-7);
  for (double x : {0.3, 0.9, 1.6}) EXPECT_NEAR(multiple_sine(x, {2}), 2 * std::sin(pi * x / 2), 1e-7);
  EXPECT_NEAR(std::abs(multiple_sine(4.0, {2, 6})), 1.0, 1e-7);
  EXPECT_NEAR(multiple_sine(4.0, {2, 6}), 1.0, 1e-5);
  EXPECT_NEAR(multiple_sine(3.0, {2, 6}) * multiple_sine(5.0, {2, 6}), 1.0, 1e-7);
  EXPECT_DOUBLE_EQ(multiple_sine(2.0, {}), -1.0);
  EXPECT_THROW(multiple_sine(8.0, {2, 6}), std::domain_error);
}

TEST(Mellin, Monomial) {
  EXPECT_NEAR(mellin_Z({2, {}, {}}, 1.0, 3.0), 0.5, 1e-10);
  EXPECT_NEAR(mellin_Z({2, {}, {}}, 2.5, 4.0), std::pow(3.0, -2.5), 1e-10);
  EXPECT_THROW(mellin_Z({2, {}, {}}, 1.0, 0.5), std::domain_error);
}

TEST(Mellin, CaseOneAgainstDoubleSum) {
  EXPECT_LE(relative(mellin_Z({0, {}, {2, 6}}, 3.0, 2.0), zeta2_case_one_oracle()), 1e-6);
  const auto r = expand_absolute_zeta({0, {}, {2, 6}});
  for (double s : {1.0, 2.0})
    EXPECT_LE(relative(mellin_Z(r.form, 3.0, s), multiple_hurwitz_zeta(3.0, s + 8, std::vector<double>{2, 6})), 1e-6);
}

TEST(Mellin, CaseTwoSubsetSum) {
  const auto r = expand_absolute_zeta({0, {3}, {1, 4, 6}});
  const std::vector<double> w{1, 4, 6};
  const double expected = multiple_hurwitz_zeta(4.0, 11.0, w) - multiple_hurwitz_zeta(4.0, 14.0, w);
  EXPECT_LE(relative(mellin_Z(r.form, 4.0, 3.0), expected), 1e-6);
  EXPECT_LE(relative(mellin_subset_sum(r, 4.0, 3.0), expected), 1e-15);
}

TEST(FunctionalEquation, WorkedCases) {
  const auto one = expand_absolute_zeta({0, {}, {2, 6}});
  const auto two = expand_absolute_zeta({0, {3}, {1, 4, 6}});
  for (const auto* r : {&one, &two})
    for (double s : {-3.0, -5.0}) EXPECT_LE(check_functional_equation(*r, s).residual, 1e-5);
  const auto c = check_functional_equation(one, -3.0);
  EXPECT_NEAR(c.lhs, multiple_gamma(3.0, {2, 6}), 1e-12);
  EXPECT_NEAR(c.rhs, multiple_sine(5.0, {2, 6}) * multiple_gamma(5.0, {2, 6}), 1e-12);
  EXPECT_LE(check_functional_equation(one, -4.0).residual, 1e-5);
}
