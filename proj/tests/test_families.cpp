#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "qosc/families.hpp"
#include "support/expect_error.hpp"
#include "support/oracle.hpp"

namespace qosc {
namespace {

using test::kind_of;
using test::Rational;

TEST(BigQJacobi, RationalFixtureCoefficients) {
  const Rational q(1, 2), c1(1, 4), c2(1, 2), c3(1, 4);
  const Rational d0 = big_q_jacobi_D(q, c1, c2, c3, 0);
  EXPECT_EQ(d0, Rational(49, 62));
  EXPECT_EQ(big_q_jacobi_C(q, c1, c2, c3, 0), Rational(0));
  EXPECT_EQ(Rational(1) - d0, Rational(13, 62));
  EXPECT_EQ(big_q_jacobi_one_minus_D(q, c1, c2, Rational(c3 * q), 0), Rational(13, 62));

  const auto rec = big_q_jacobi({0.5, 0.25, 0.5, 0.25}, 10);
  EXPECT_DOUBLE_EQ(rec.b[0], 13.0 / 62.0);
  for (int n = 1; n < 10; ++n) {
    const Rational b = big_q_jacobi_one_minus_D(q, c1, c2, Rational(c3 * ipow(q, n + 1)), n) - big_q_jacobi_C(q, c1, c2, c3, n);
    const Rational u = big_q_jacobi_D(q, c1, c2, c3, n - 1) * big_q_jacobi_C(q, c1, c2, c3, n);
    const std::size_t i = static_cast<std::size_t>(n);
    EXPECT_NEAR(rec.b[i], test::to_double(b), 1e-14 * std::abs(test::to_double(b)) + 1e-16);
    EXPECT_NEAR(rec.u[i - 1], test::to_double(u), 1e-14 * std::abs(test::to_double(u)));
  }
}

TEST(BigQJacobi, OneMinusDMatchesDirectDifference) {
  const Rational q(3, 5), c1(-2, 7), c2(5, 9), c3(4, 11);
  for (int n = 0; n < 8; ++n) {
    EXPECT_EQ(big_q_jacobi_one_minus_D(q, c1, c2, Rational(c3 * ipow(q, n + 1)), n),
              Rational(1) - big_q_jacobi_D(q, c1, c2, c3, n));
  }
}

TEST(BigQJacobi, ResonantDenominator) {
  // 1 - c1 c2 q^2 = 0 at n = 0.
  EXPECT_EQ(kind_of([] { big_q_jacobi({0.5, 2.0, 2.0, 0.3}, 4); }), ErrorKind::resonance);
}

TEST(AskeyWilson, ZerothDiagonal) {
  const AWParams p{0.6, 0.9, 0.5, 0.4, 0.3};
  const auto rec = askey_wilson(p, 3);
  EXPECT_DOUBLE_EQ(askey_wilson_C(p.q, p.a1, p.a2, p.a3, p.a4, 0), 0.0);
  EXPECT_NEAR(rec.b[0], 0.5 * (p.a1 + 1 / p.a1 - askey_wilson_D(p.q, p.a1, p.a2, p.a3, p.a4, 0)), 1e-15);
}

TEST(AskeyWilson, CoefficientTableAgainstRationalOracle) {
  const Rational q(3, 5), a1(9, 10), a2(1, 2), a3(2, 5), a4(3, 10);
  const auto rec = askey_wilson({0.6, 0.9, 0.5, 0.4, 0.3}, 11);
  for (int n = 0; n <= 10; ++n) {
    const Rational D = askey_wilson_D(q, a1, a2, a3, a4, n);
    const Rational C = askey_wilson_C(q, a1, a2, a3, a4, n);
    const double b = test::to_double((a1 + 1 / a1 - D - C) / 2);
    const std::size_t i = static_cast<std::size_t>(n);
    EXPECT_NEAR(rec.b[i], b, 1e-13) << n;
    if (n == 0) continue;
    const double u = test::to_double(askey_wilson_D(q, a1, a2, a3, a4, n - 1) * C / 4);
    EXPECT_NEAR(rec.u[i - 1], u, 1e-13 * std::abs(u)) << n;
  }
}

TEST(AskeyWilson, RejectsZeroA1) {
  EXPECT_EQ(kind_of([] { askey_wilson({0.6, 0.0, 0.5, 0.4, 0.3}, 4); }), ErrorKind::invalid_parameter);
}

TEST(QHahn, TruncatesAtN) {
  const auto rec = q_hahn({0.5, 0.3, 0.4, 3});
  EXPECT_EQ(rec.size(), 4u);
  EXPECT_EQ(q_hahn_D(0.5, 0.3, 0.4, 3, 3), 0.0);
  ASSERT_TRUE(rec.next_u.has_value());
  EXPECT_EQ(*rec.next_u, 0.0);
}

TEST(QHahn, EqualsBigQJacobiSpecialization) {
  const Rational q(1, 2), c1(3, 10), c2(2, 5);
  for (int N : {3, 4, 6}) {
    const Rational c3 = ipow(q, -N - 1);
    for (int n = 0; n <= N; ++n) {
      EXPECT_EQ(q_hahn_D(q, c1, c2, N, n), big_q_jacobi_D(q, c1, c2, c3, n)) << N << " " << n;
      EXPECT_EQ(q_hahn_C(q, c1, c2, N, n), big_q_jacobi_C(q, c1, c2, c3, n)) << N << " " << n;
    }
  }
}

TEST(QHahn, HalfQSpectrum) {
  const auto rec = q_hahn({0.5, 0.3, 0.4, 3});
  const auto lattice = claimed_spectrum(rec);
  EXPECT_EQ(lattice.kind, LatticeKind::single_exponential);
  EXPECT_EQ(lattice.points, (std::vector<double>{1, 2, 4, 8}));
  EXPECT_TRUE(verify_spectrum(rec, lattice).pass);
}

TEST(QParaKrawtchouk, TruncatesAtN) {
  EXPECT_EQ(q_para_D(0.5, 0.2, 5, 5), 0.0);
  const auto rec = q_para_krawtchouk({0.5, 0.2, 5});
  EXPECT_EQ(rec.size(), 6u);
  ASSERT_TRUE(rec.next_u.has_value());
  EXPECT_EQ(*rec.next_u, 0.0);
}

TEST(QParaKrawtchouk, RequiresOddN) {
  EXPECT_EQ(kind_of([] { q_para_krawtchouk({0.5, 0.2, 4}); }), ErrorKind::invalid_parameter);
}

TEST(QParaKrawtchouk, EqualsBigQJacobiSpecialization) {
  // c1 = c2 = q^(-(N+1)/2); the big q-Jacobi form has a removable 0/0 at the
  // single index where c1 c2 q^(2n+2) (for D) or c1 c2 q^(2n) (for C) is 1.
  const Rational q(1, 2), c3(1, 5);
  for (int N : {3, 5, 7}) {
    const Rational c = ipow(q, -(N + 1) / 2);
    for (int n = 0; n <= N; ++n) {
      if (2 * n + 2 != N + 1) EXPECT_EQ(q_para_D(q, c3, N, n), big_q_jacobi_D(q, c, c, c3, n)) << N << " " << n;
      if (2 * n != N + 1) EXPECT_EQ(q_para_C(q, c3, N, n), big_q_jacobi_C(q, c, c, c3, n)) << N << " " << n;
    }
  }
}

TEST(QParaKrawtchouk, BiExponentialSpectrum) {
  const auto rec = q_para_krawtchouk({0.5, 0.2, 3});
  const auto lattice = claimed_spectrum(rec);
  EXPECT_EQ(lattice.kind, LatticeKind::bi_exponential);
  const std::vector<double> expect{0.05, 0.1, 1.0, 2.0};
  ASSERT_EQ(lattice.points.size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(lattice.points[i], expect[i], 1e-15);
  const auto ev = eigenvalues(rec.jacobi_matrix());
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(ev[i], expect[i], 1e-12 * expect[i]);
}

TEST(VerifySpectrum, DerivedFixturesPass) {
  EXPECT_TRUE(verify_spectrum(q_hahn({0.7, 0.3, 0.4, 5}), claimed_spectrum(q_hahn({0.7, 0.3, 0.4, 5}))).pass);
  const auto para = q_para_krawtchouk({0.6, 0.25, 7});
  EXPECT_TRUE(verify_spectrum(para, claimed_spectrum(para), {1e-12, 1e-8}).pass);
}

TEST(VerifySpectrum, PerturbedLatticeFails) {
  const auto rec = q_hahn({0.7, 0.3, 0.4, 5});
  SpectrumLattice lattice = claimed_spectrum(rec);
  lattice.points[2] *= 1.01;
  EXPECT_FALSE(verify_spectrum(rec, lattice).pass);
}

TEST(VerifySpectrum, SizeMismatch) {
  const auto rec = q_hahn({0.7, 0.3, 0.4, 5});
  SpectrumLattice lattice = claimed_spectrum(rec);
  lattice.points.pop_back();
  EXPECT_EQ(kind_of([&] { verify_spectrum(rec, lattice); }), ErrorKind::spectrum_mismatch);
}

TEST(PairSpectrum, CollisionIsMismatch) {
  const std::vector<double> eigen{1.0, 2.0, 4.0};
  const std::vector<double> lattice{1.0, 1.01, 4.0};
  EXPECT_EQ(kind_of([&] { pair_spectrum(eigen, lattice); }), ErrorKind::spectrum_mismatch);
}

TEST(ClaimedSpectrum, CustomFamilyUnsupported) {
  EXPECT_EQ(kind_of([] { claimed_spectrum(big_q_jacobi({0.5, 0.25, 0.5, 0.25}, 4)); }),
            ErrorKind::unsupported_family);
}

TEST(TraceIdentity, EigenvalueSumEqualsDiagonalSum) {
  std::vector<MonicRecurrence> recs;
  for (int N : {3, 5, 7}) {
    recs.push_back(q_hahn({0.6, 0.3, -0.4, N}));
    recs.push_back(q_para_krawtchouk({0.6, 0.25, N}));
  }
  for (const auto& rec : recs) {
    const auto ev = eigenvalues(rec.jacobi_matrix());
    const double sum_ev = std::accumulate(ev.begin(), ev.end(), 0.0);
    const double sum_b = std::accumulate(rec.b.begin(), rec.b.end(), 0.0);
    EXPECT_NEAR(sum_ev, sum_b, 1e-9 * std::abs(sum_b)) << to_string(rec.family);
  }
}

TEST(EvalMonic, SecondPolynomialUnrolled) {
  const auto rec = big_q_jacobi({0.7, 0.3, 0.4, 0.2}, 5);
  for (double x : {-1.3, 0.2, 2.5}) {
    const double expect = (x - rec.b[1]) * (x - rec.b[0]) - rec.u[0];
    EXPECT_NEAR(eval_monic(rec, 2, x), expect, 1e-14 * (1 + std::abs(expect)));
    EXPECT_EQ(eval_monic(rec, 0, x), 1.0);
    EXPECT_NEAR(eval_monic(rec, 1, x), x - rec.b[0], 1e-15);
  }
  EXPECT_EQ(kind_of([&] { eval_monic(rec, 6, 0.0); }), ErrorKind::out_of_range);
  EXPECT_EQ(kind_of([&] { eval_monic(rec, -1, 0.0); }), ErrorKind::out_of_range);
}

TEST(EvalMonic, LeadingCoefficientIsOne) {
  const auto rec = big_q_jacobi({0.7, 0.3, 0.4, 0.2}, 7);
  for (int n = 0; n <= 6; ++n) {
    EXPECT_NEAR(eval_monic(rec, n, 1e6) / std::pow(1e6, n), 1.0, 1e-4) << n;
  }
}

TEST(MonicPolynomial, ExpansionAgreesWithRecurrence) {
  const auto rec = askey_wilson({0.6, 0.9, 0.5, 0.4, 0.3}, 8);
  for (int n = 0; n <= 8; ++n) {
    const LaurentPoly p = monic_polynomial(rec, n);
    EXPECT_EQ(p.max_degree(), n);
    EXPECT_EQ(p.coeff(n), 1.0);
    for (double x : {-0.8, 0.1, 1.7}) {
      EXPECT_NEAR(p.eval(x), eval_monic(rec, n, x), 1e-12 * (1 + std::abs(eval_monic(rec, n, x))));
    }
  }
}

TEST(StructuredParams, TruncatedFamilies) {
  const StructuredParams h = structured_params(QHahnParams{0.5, 0.3, 0.4, 3});
  EXPECT_EQ(h.c3, 16.0);
  const StructuredParams para = structured_params(QParaParams{0.5, 0.2, 5});
  EXPECT_EQ(para.c1, 8.0);
  EXPECT_EQ(para.c2, 8.0);
  EXPECT_EQ(para.c3, 0.2);
}

}  // namespace
}  // namespace qosc
