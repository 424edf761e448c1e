#include "oracles.hpp"

#include "qips/quantizer.hpp"
#include "qips/zeta.hpp"

#include <gtest/gtest.h>

using namespace qips;

namespace {

template <class T>
MarkovChain<T> dk_chain(const T& p, const T& q, int sites, int component) {
  const auto blocks = split_blocks(global_from_local(build_dk_local(DKParams<T>{p, q}), sites));
  return chain_from_block(build_component_graph(sites, component), component == 0 ? blocks.block0 : blocks.block1,
                          Orientation::column_stochastic);
}

Matrix<double> dense_power(const Matrix<double>& u, int k) {
  Matrix<double> out = Matrix<double>::identity(u.rows());
  for (int i = 0; i < k; ++i) out = u * out;
  return out;
}

}  // namespace

TEST(Coupling, DKComponentOne) {
  const auto c = build_coupling(dk_chain(0.4, 0.2, 2, 0));
  // Arcs: loop(00), (00,10), (10,00), loop(10).
  EXPECT_DOUBLE_EQ(c.k()(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(c.k()(1, 0), 0.0);
  EXPECT_EQ(c.j, (Matrix<double>{{1, 0, 0, 0}, {0, 0, 1, 0}, {0, 1, 0, 0}, {0, 0, 0, 1}}));
}

TEST(Coupling, ProofIdentitiesOnRandomChains) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto chain = oracle::random_chain(3 + trial % 4, rng);
    const auto c = build_coupling(chain);
    const auto k = c.k(), l = c.l();
    EXPECT_LE(max_abs_diff(k.transpose() * k, Matrix<double>::identity(k.cols())), 1e-14);
    EXPECT_LE(max_abs_diff(l.transpose() * l, Matrix<double>::identity(l.cols())), 1e-14);
    EXPECT_LE(max_abs_diff(c.j * k, l), 1e-15);
    EXPECT_LE(max_abs_diff(c.j * l, k), 1e-15);
    EXPECT_EQ(c.j * c.j, Matrix<double>::identity(c.j.rows()));
    EXPECT_EQ(c.j, c.j.transpose());
  }
}

TEST(Quantize, DKComponentOneClosedForm) {
  const double p = 0.3;
  const auto coin = quantize(dk_chain(p, 0.6, 2, 0));
  const double r = 2 * std::sqrt(p * (1 - p));
  const Matrix<double> expected{{1, 0, 0, 0}, {0, 0, -1, 0}, {0, 1 - 2 * p, 0, r}, {0, r, 0, 2 * p - 1}};
  EXPECT_LE(max_abs_diff(coin.u, expected), 1e-15);
  EXPECT_NEAR(coin.u(3, 1), r, 1e-15);
}

TEST(Quantize, ExactWhenSquaresArise) {
  const auto coin = quantize(dk_chain(Rational(1, 2), Rational(0), 2, 0));
  EXPECT_EQ(coin.u(3, 1), 1);
  EXPECT_EQ(unitarity_defect(coin), 0.0);
  EXPECT_THROW(quantize(dk_chain(Rational(1, 3), Rational(1, 2), 2, 0)), inexact_error);
}

TEST(Quantize, SingleVertex) {
  const auto chain = make_chain(Graph({"v"}, {}), std::vector<Rational>{1});
  EXPECT_EQ(quantize(chain).u, (Matrix<Rational>{{1}}));
}

TEST(Quantize, ComponentTwoMatchesEntrywiseOracle) {
  const auto chain = dk_chain(1.0 / 3, 0.5, 2, 1);
  const auto coin = quantize(chain);
  for (std::size_t e = 0; e < chain.arcs.size(); ++e)
    for (std::size_t f = 0; f < chain.arcs.size(); ++f) {
      double expected = 0.0;
      if (chain.arcs[f].terminus == chain.arcs[e].origin)
        expected = 2 * std::sqrt(chain.prob[e] * chain.prob[static_cast<std::size_t>(chain.arcs.inverse(f))]) -
                   (static_cast<int>(f) == chain.arcs.inverse(e) ? 1.0 : 0.0);
      EXPECT_NEAR(coin.u(e, f), expected, 1e-15);
    }
}

TEST(Unitarity, GridSweep) {
  for (int sites : {2, 3})
    for (int i = 0; i <= 10; ++i)
      for (int j = 0; j <= 10; ++j)
        for (int c = 0; c < 2; ++c) EXPECT_LE(unitarity_defect(quantize(dk_chain(i / 10.0, j / 10.0, sites, c))), 1e-12);
  EXPECT_LE(unitarity_defect(quantize(dk_chain(0.5, 0.25, 2, 0))), 1e-15);
}

TEST(Unitarity, DetectsPerturbation) {
  auto coin = quantize(dk_chain(0.5, 0.25, 2, 0));
  coin.u(1, 2) += 1e-3;
  EXPECT_GE(unitarity_defect(coin), 1e-3);
}

TEST(Symmetrize, DKTwoSites) {
  const double p = 0.3, q = 0.8;
  const auto s1 = symmetrize(dk_chain(p, q, 2, 0)).s;
  const auto s2 = symmetrize(dk_chain(p, q, 2, 1)).s;
  EXPECT_LE(max_abs_diff(s1, Matrix<double>{{1, 0}, {0, p}}), 1e-15);
  const double off = std::sqrt(p * (1 - q));
  EXPECT_LE(max_abs_diff(s2, Matrix<double>{{1 - p, off}, {off, q}}), 1e-15);
}

TEST(Symmetrize, ThreeSitesEntryFormula) {
  for (int c = 0; c < 2; ++c) {
    const auto chain = dk_chain(1.0 / 3, 0.5, 3, c);
    const auto m = transition_matrix(chain);
    const auto s = symmetrize(chain).s;
    EXPECT_EQ(s, s.transpose());
    for (std::size_t u = 0; u < 4; ++u)
      for (std::size_t v = 0; v < 4; ++v) EXPECT_NEAR(s(u, v), std::sqrt(m(u, v) * m(v, u)), 1e-15);
  }
  const auto all_loops = chain_from_block(build_component_graph(3), Matrix<double>::identity(4), Orientation::column_stochastic);
  EXPECT_EQ(symmetrize(all_loops).s, Matrix<double>::identity(4));
}

TEST(Walk, FixedLoopAndPowers) {
  const auto coin = quantize(dk_chain(0.4, 0.7, 2, 0));
  const auto out = walk_evolve(coin, WalkState::basis(4, 0), 17);
  EXPECT_NEAR(std::abs(out.amplitudes[0] - 1.0), 0.0, 1e-15);
  const auto same = walk_evolve(coin, WalkState::basis(4, 2), 0);
  EXPECT_EQ(same.amplitudes, WalkState::basis(4, 2).amplitudes);

  const auto coin3 = quantize(dk_chain(0.35, 0.8, 3, 1));
  const auto cube = dense_power(coin3.u, 3);
  for (std::size_t start = 0; start < coin3.u.rows(); ++start) {
    const auto evolved = walk_evolve(coin3, WalkState::basis(coin3.u.rows(), start), 3);
    for (std::size_t r = 0; r < coin3.u.rows(); ++r) EXPECT_LE(std::abs(evolved.amplitudes[r] - cube(r, start)), 1e-13);
  }
  EXPECT_THROW(walk_evolve(coin, WalkState{{1.0, 1.0, 0.0, 0.0}}, 1), std::domain_error);
}

TEST(Charpoly, BlockOne) {
  const Rational p(2, 7);
  EXPECT_EQ(charpoly(Matrix<Rational>{{1, 1 - p}, {0, p}}), (Polynomial<Rational>{-1, 1} * Polynomial<Rational>{-p, 1}));
  EXPECT_EQ(charpoly(Matrix<Rational>::identity(2)), (Polynomial<Rational>{1, -2, 1}));
}

TEST(Charpoly, RandomRationalAgainstCofactor) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> num(-9, 9), den(1, 7);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 3 + static_cast<std::size_t>(trial % 3);
    Matrix<Rational> a(n, n);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) a(r, c) = Rational(num(rng), den(rng));
    const auto exact = charpoly(a);
    EXPECT_EQ(exact, oracle::charpoly_cofactor(a));
    // Float path, rationalized, reproduces the exact polynomial.
    if (n == 3) EXPECT_EQ(rationalize_poly(charpoly(a.cast<double>()), 100000, 1e-8), exact);
  }
}

TEST(ZetaReciprocal, WorkedCaseOne) {
  Polynomial<double> product = Polynomial<double>::constant(1.0);
  for (int c = 0; c < 2; ++c) product *= zeta_reciprocal(quantize(dk_chain(0.5, 0.0, 2, c)));
  const Polynomial<double> expected = Polynomial<double>{1, 0, -1} * Polynomial<double>{1, 0, 0, 0, 0, 0, -1};
  EXPECT_LE(max_coeff_gap(product, expected), 1e-14);
  EXPECT_EQ(rationalize_poly(product), (Polynomial<Rational>{1, 0, -1, 0, 0, 0, -1, 0, 1}));
}

TEST(ZetaReciprocal, IdentityMatrix) {
  EXPECT_EQ(zeta_reciprocal(Matrix<Rational>::identity(5)), (Polynomial<Rational>{1, -1}).pow(5));
}

TEST(ZetaReciprocal, ClosedFormReversed) {
  const double p = 0.3, q = 0.7;
  const auto u = direct_sum(quantize(dk_chain(p, q, 2, 0)).u, quantize(dk_chain(p, q, 2, 1)).u);
  EXPECT_LE(max_coeff_gap(zeta_reciprocal(u), oracle::dk2_charpoly_u(p, q).reversed(8)), 1e-9);
  EXPECT_LE(max_coeff_gap(charpoly_from_reciprocal(zeta_reciprocal(u), 8), charpoly(u)), 1e-12);
}

TEST(Factorization, ComponentOneSymbolic) {
  const Rational p(1, 4);
  const Polynomial<Rational> chi_s = Polynomial<Rational>{-1, 1} * Polynomial<Rational>{-p, 1};
  const auto rhs = factorization_polynomial(2, 1, chi_s);
  const Polynomial<Rational> expected = Polynomial<Rational>{1, -1} * Polynomial<Rational>{1, 1} * Polynomial<Rational>{1, -2 * p, 1};
  EXPECT_EQ(rhs, expected);
  const auto f = factorization_rhs(2, 1, chi_s);
  EXPECT_EQ(f.denominator(), Polynomial<Rational>::constant(1));
  EXPECT_EQ(f.numerator(), expected);
}

TEST(Factorization, SingleVertex) {
  EXPECT_EQ(factorization_polynomial(1, 0, Polynomial<Rational>{-1, 1}), (Polynomial<Rational>{1, -1}));
  EXPECT_THROW(factorization_polynomial(2, 0, Polynomial<Rational>{2, 0, 1}), identity_violation);
}

TEST(Factorization, GridAndThreeSites) {
  for (int i = 0; i <= 4; ++i)
    for (int j = 0; j <= 4; ++j)
      for (int c = 0; c < 2; ++c) EXPECT_LE(verify_factorization(dk_chain(i / 4.0, j / 4.0, 2, c)).max_coefficient_gap, 1e-10);
  for (int c = 0; c < 2; ++c) EXPECT_LE(verify_factorization(dk_chain(1.0 / 3, 0.5, 3, c)).max_coefficient_gap, 1e-9);
  const auto exact = verify_factorization(dk_chain(Rational(1, 2), Rational(0), 2, 0));
  EXPECT_EQ(exact.max_coefficient_gap, 0.0);
}

TEST(Factorization, AllLoops) {
  const auto chain = chain_from_block(build_component_graph(3), Matrix<Rational>::identity(4), Orientation::column_stochastic);
  const auto r = verify_factorization(chain);
  EXPECT_EQ(r.lhs, r.rhs);
  EXPECT_EQ(r.lhs, (Polynomial<Rational>{1, -1}).pow(4 + 6) * (Polynomial<Rational>{1, 1}).pow(6));
}

TEST(Factorization, RandomChains) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 40; ++trial) {
    const auto chain = oracle::random_chain(2 + trial % 7, rng);
    EXPECT_LE(verify_factorization(chain).max_coefficient_gap, 1e-9);
  }
}

TEST(PredictedSpectrum, ComponentOneHalf) {
  const auto chain = dk_chain(0.5, 0.0, 2, 0);
  const auto s = predicted_spectrum(symmetrize(chain), 2, 1);
  EXPECT_EQ(s.cancelled, 1);
  const std::vector<std::complex<double>> expected{{1, 0}, {-1, 0}, {0.5, std::sqrt(3) / 2}, {0.5, -std::sqrt(3) / 2}};
  EXPECT_LE(oracle::multiset_distance(s.eigenvalues(), expected), 1e-12);
}

TEST(PredictedSpectrum, SingleVertex) {
  const auto s = predicted_spectrum(Matrix<double>{{1}}, 1, 0);
  EXPECT_LE(oracle::multiset_distance(s.eigenvalues(), {{1, 0}}), 0.0);
}

TEST(PredictedSpectrum, ThreeSitesComponentTwoAgainstEigensolver) {
  const auto chain = dk_chain(1.0 / 3, 0.5, 3, 1);
  const auto s = predicted_spectrum(symmetrize(chain), 4, 6);
  EXPECT_EQ(s.minus_one_mult, 6);
  EXPECT_EQ(s.plus_one_mult, 2);
  EXPECT_EQ(s.unit_circle_pairs.size(), 8u);
  EXPECT_LE(oracle::multiset_distance(s.eigenvalues(), oracle::eigenvalues(quantize(chain).u)), 1e-9);
}

TEST(PredictedSpectrum, RejectsSpectralRadiusAboveOne) {
  EXPECT_THROW(predicted_spectrum(Matrix<double>{{1.5}}, 1, 0), identity_violation);
}

TEST(SymmetricEigen, MatchesEigen) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  for (int n : {1, 2, 5, 9}) {
    Matrix<double> a(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
    for (int r = 0; r < n; ++r)
      for (int c = 0; c <= r; ++c) a(r, c) = a(c, r) = g(rng);
    std::vector<std::complex<double>> mine;
    for (double x : symmetric_eigenvalues(a)) mine.emplace_back(x, 0.0);
    EXPECT_LE(oracle::multiset_distance(mine, oracle::eigenvalues(a)), 1e-12);
  }
}

TEST(Rationalize, Basics) {
  EXPECT_EQ(rationalize_poly(Polynomial<double>{1.0, -0.5000000001}), (Polynomial<Rational>{1, Rational(-1, 2)}));
  EXPECT_EQ(rationalize(0.3333333333333333), Rational(1, 3));
  EXPECT_THROW(rationalize(std::sqrt(2.0), 1000, 1e-12), std::domain_error);
}

TEST(Palindrome, ReciprocalIsSelfReciprocalUpToSign) {
  for (int i = 0; i <= 10; ++i)
    for (int j = 0; j <= 10; ++j)
      for (int c = 0; c < 2; ++c) {
        const auto r = zeta_reciprocal(quantize(dk_chain(i / 10.0, j / 10.0, 2, c)));
        const auto rev = r.reversed(4);
        const double plus = max_coeff_gap(rev, r), minus = max_coeff_gap(rev * -1.0, r);
        EXPECT_LE(std::min(plus, minus), 1e-12);
      }
}
