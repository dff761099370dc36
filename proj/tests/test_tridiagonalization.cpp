#include <gtest/gtest.h>

#include <cmath>

#include "qosc/algebra.hpp"
#include "qosc/families.hpp"
#include "qosc/tridiagonalization.hpp"
#include "support/expect_error.hpp"
#include "support/oracle.hpp"

namespace qosc {
namespace {

using test::kind_of;

const StructuredParams kGeneric{0.7, 0.3, 0.4, 0.2};

double max_abs_diff(const BandMatrix& x, const BandMatrix& y) {
  double worst = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = 0; j < x.size(); ++j) worst = std::max(worst, std::abs(x(i, j) - y(i, j)));
  }
  return worst;
}

BandMatrix w_by_products(const StructuredParams& p, const WCoeffs& w, std::size_t size) {
  const BandMatrix a = big_q_jacobi(p, size).jacobi_matrix();
  const BandMatrix z = build_Z(p, size).matrix();
  BandMatrix out = w.tau1 * band_mul(z, a);
  out.axpy(w.tau2, band_mul(a, z));
  out.axpy(w.tau3, a);
  out.axpy(w.tau0, BandMatrix::identity(size));
  return out;
}

TEST(BuildZ, FirstEigenvalue) {
  const auto z = build_Z({0.5, 0.25, 0.5, 0.3}, 4);
  EXPECT_DOUBLE_EQ(z.z[0], 17.0 / 16.0);
}

TEST(BuildZ, EntriesAreDistinct) {
  const auto z = build_Z({0.9, 0.3, 0.4, 0.2}, 30);
  for (std::size_t i = 0; i < z.z.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) EXPECT_GT(std::abs(z.z[i] - z.z[j]), 1e-6 * std::abs(z.z[i]));
  }
}

TEST(ZQDifference, MatchesRationalDifferences) {
  using test::Rational;
  const Rational q(3, 7), c1(5, 8), c2(2, 3);
  const StructuredParams p{3.0 / 7.0, 5.0 / 8.0, 2.0 / 3.0, -0.3};
  auto z = [&](int n) { return c1 * c2 * ipow(q, n + 1) + ipow(q, -n); };
  for (int i = 1; i < 14; ++i) {
    for (int j = i - 1; j <= i + 1; ++j) {
      const double exact = test::to_double(Rational(z(j) - q * z(i)));
      EXPECT_LE(std::abs(z_q_difference(p, i, j) - exact), 1e-14 * std::abs(exact)) << i << "," << j;
    }
  }
  EXPECT_EQ(kind_of([&] { z_q_difference(p, 3, 5); }), ErrorKind::invalid_parameter);
}

TEST(BuildBFromA, IsARepresentationWithGeometricBands) {
  const std::size_t size = 14;
  const BandMatrix a = big_q_jacobi(kGeneric, size).jacobi_matrix();
  const BandMatrix b = build_B_from_A(kGeneric, size);
  EXPECT_TRUE(q_commutator_residual(a, b, kGeneric.q, BandMatrix::identity(size)).pass);
  EXPECT_TRUE(classify(a, b, kGeneric.q).fit.pass);
}

TEST(BuildBFromA, SatisfiesAllThreeBigQJacobiRelations) {
  test::Draws draws(201);
  for (int trial = 0; trial < 10; ++trial) {
    const auto report = big_qjacobi_algebra_residuals(draws.structured(), 12);
    EXPECT_TRUE(report.pass()) << trial;
  }
}

TEST(BuildBFromA, RejectsInvalidQ) {
  EXPECT_EQ(kind_of([] { build_B_from_A({1.0, 0.3, 0.4, 0.2}, 6); }), ErrorKind::invalid_parameter);
}

TEST(BuildW, DegenerateCoefficientsGiveA) {
  const BandMatrix w = build_W(kGeneric, {0.0, 0.0, 0.0, 1.0}, 8);
  EXPECT_EQ(max_abs_diff(w, big_q_jacobi(kGeneric, 8).jacobi_matrix()), 0.0);
}

TEST(BuildW, BandsMatchMatrixProducts) {
  test::Draws draws(202);
  for (int trial = 0; trial < 20; ++trial) {
    const StructuredParams p = draws.structured();
    const WCoeffs w{draws.uniform(-1, 1), draws.uniform(-1, 1), draws.uniform(-1, 1), draws.uniform(-1, 1)};
    const std::size_t size = 10;
    const BandMatrix band = build_W(p, w, size);
    const BandMatrix ref = w_by_products(p, w, size);
    // The truncated product loses nothing: Z is diagonal.
    const double scale = norm_inf(ref);
    EXPECT_LE(max_abs_diff(band, ref), 1e-12 * scale) << trial;
  }
}

TEST(BuildW, PencilEmbedding) {
  const std::size_t size = 10;
  const double mu = 0.37;
  const auto r = tridiagonalization_constants(kGeneric);
  BandMatrix lhs = big_q_jacobi(kGeneric, size).jacobi_matrix();
  lhs.axpy(mu, build_B_from_A(kGeneric, size));
  const BandMatrix w = build_W(kGeneric, {mu * r.r0, mu * r.r1, -kGeneric.q * mu * r.r1, 1.0}, size);
  EXPECT_LE(max_abs_diff(lhs, w), 1e-12 * norm_inf(w));
}

TEST(ToMonic, AlreadyMonicIsIdentitySimilarity) {
  const auto rec = big_q_jacobi(kGeneric, 8);
  const MonicReduction m = to_monic(rec.jacobi_matrix());
  for (double d : m.d) EXPECT_EQ(d, 1.0);
  EXPECT_EQ(m.rec.b, rec.b);
  for (std::size_t i = 0; i < rec.u.size(); ++i) EXPECT_NEAR(m.rec.u[i], rec.u[i], 1e-15 * std::abs(rec.u[i]));
}

TEST(ToMonic, PreservesCouplingProducts) {
  const BandMatrix w = BandMatrix::tridiagonal({2.0, -0.5, 4.0}, {1, 2, 3, 4}, {3.0, 1.5, -0.25});
  const MonicReduction m = to_monic(w);
  EXPECT_EQ(m.rec.b, (std::vector<double>{1, 2, 3, 4}));
  EXPECT_NEAR(m.rec.u[0], 6.0, 1e-15);
  EXPECT_NEAR(m.rec.u[1], -0.75, 1e-15);
  EXPECT_NEAR(m.rec.u[2], -1.0, 1e-15);
}

TEST(ToMonic, ZeroSubdiagonalIsRejected) {
  const BandMatrix w = BandMatrix::tridiagonal({1.0, 0.0}, {1, 2, 3}, {1.0, 1.0});
  EXPECT_EQ(kind_of([&] { to_monic(w); }), ErrorKind::not_reducible_to_monic);
}

TEST(AWParameterMap, StatedRelations) {
  const AWParams p{0.6, 0.9, 0.5, 0.5, 0.3};
  const AWEmbedding e = aw_parameter_map(p);
  EXPECT_NEAR(e.w.tau2 / e.w.tau1, -p.q, 1e-15);
  EXPECT_NEAR(e.structured.c1, p.a1 * p.a2 / p.q, 1e-15);
  EXPECT_NEAR(e.structured.c2, p.a3 * p.a4 / p.q, 1e-15);
  EXPECT_NEAR(e.structured.c3, p.a1 * p.a3 / p.q, 1e-15);
  EXPECT_NEAR(p.g(), p.q * p.q * e.structured.c1 * e.structured.c2, 1e-15);
}

TEST(AWMatch, FixtureReproducesAskeyWilson) {
  const AWMatchReport r = aw_match({0.6, 0.9, 0.5, 0.4, 0.3}, 21);
  EXPECT_TRUE(r.pass());
  EXPECT_LE(r.b.max_abs, 1e-9);
  EXPECT_LE(r.u.max_abs, 1e-9);
  EXPECT_EQ(r.reduced.size(), 21u);
}

TEST(AWMatch, RandomDrawsReproduceAskeyWilson) {
  test::Draws draws(203);
  for (int trial = 0; trial < 25; ++trial) {
    const AWMatchReport r = aw_match(draws.askey_wilson(), 21);
    EXPECT_TRUE(r.pass()) << trial << " b " << r.b.max_abs << " u " << r.u.max_abs;
  }
}

TEST(Pencil, ZeroMuIsShiftedA) {
  const BandMatrix c = pencil(kGeneric, {0.0, 0.25}, 8);
  BandMatrix ref = big_q_jacobi(kGeneric, 8).jacobi_matrix();
  ref.axpy(0.25, BandMatrix::identity(8));
  EXPECT_LE(max_abs_diff(c, ref), 1e-15);
}

TEST(Pencil, ClosedFormBandsAgree) {
  test::Draws draws(204);
  for (int trial = 0; trial < 20; ++trial) {
    const StructuredParams p = draws.structured();
    const PencilParams pp{draws.signed_magnitude(0.1, 2.0), draws.uniform(-1, 1)};
    const BandMatrix w = pencil(p, pp, 10);
    EXPECT_LE(max_abs_diff(w, pencil_closed_form(p, pp, 10)), 1e-11 * norm_inf(w)) << trial;
  }
}

TEST(Pencil, AskeyWilsonEigenfunctions) {
  const AWParams p{0.6, 0.9, 0.5, 0.4, 0.3};
  const AWPencil e = aw_pencil_embedding(p);
  const MonicReduction m = to_monic(pencil(e.structured, e.pencil, 11));
  const auto aw = askey_wilson(p, 11);
  for (std::size_t n = 0; n < 11; ++n) {
    EXPECT_NEAR(e.tau3 * m.rec.b[n], aw.b[n], 1e-10 * (1 + std::abs(aw.b[n]))) << n;
    if (n < 10) EXPECT_NEAR(e.tau3 * e.tau3 * m.rec.u[n], aw.u[n], 1e-10 * std::abs(aw.u[n])) << n;
  }
}

TEST(QDiffZ, ConstantIsEigenfunction) {
  const LaurentPoly out = qdiff_Z_apply(LaurentPoly::constant(1.0), kGeneric);
  const double z0 = build_Z(kGeneric, 1).z[0];
  EXPECT_NEAR(out.coeff(0), z0, 1e-15);
  EXPECT_LE(max_coeff_diff(out, LaurentPoly::constant(z0)), 1e-15);
}

TEST(QDiffZ, BigQJacobiPolynomialsAreEigenfunctions) {
  for (const StructuredParams& p :
       {kGeneric, StructuredParams{0.5, 0.25, 0.5, 0.25}, StructuredParams{0.9, -0.6, 0.35, 1.3}}) {
    const auto r = qdiff_Z_eigen_check(p, 8);
    EXPECT_TRUE(r.pass) << r.max_abs;
  }
}

TEST(QDiffZ, EigenvaluesMatchMatrixZ) {
  const auto rec = big_q_jacobi(kGeneric, 9);
  const auto z = build_Z(kGeneric, 9);
  for (int n = 0; n <= 8; ++n) {
    const LaurentPoly pn = monic_polynomial(rec, n);
    const double lead = qdiff_Z_apply(pn, kGeneric).coeff(n);
    EXPECT_NEAR(lead, z.z[static_cast<std::size_t>(n)], 1e-12 * z.z[static_cast<std::size_t>(n)]);
  }
}

TEST(QDiffZ, PreservesPolynomials) {
  for (int k = 0; k <= 6; ++k) {
    const LaurentPoly out = qdiff_Z_apply(LaurentPoly::monomial(k), kGeneric);
    EXPECT_LE(out.mass_below(0), 1e-14 * out.mass()) << k;
    EXPECT_EQ(out.normalized(1e-14 * out.mass()).max_degree(), k);
  }
}

TEST(QDiffB, PoleCancelsOnConstants) {
  const LaurentPoly out = qdiff_B_apply(LaurentPoly::constant(1.0), kGeneric);
  EXPECT_LE(std::abs(out.coeff(-1)), 1e-15);
  EXPECT_LE(out.mass_below(0), 1e-15);
}

TEST(QDiffB, LinearInputGivesLinearPolynomial) {
  const LaurentPoly out = qdiff_B_apply(LaurentPoly::monomial(1), kGeneric).normalized(1e-14);
  EXPECT_GE(out.min_degree(), 0);
  EXPECT_LE(out.max_degree(), 2);
}

TEST(QDiffB, NoPoleBeyondFirstOrder) {
  test::Draws draws(205);
  for (int trial = 0; trial < 20; ++trial) {
    LaurentPoly::Coeffs c;
    for (int k = 0; k < 6; ++k) c[k] = draws.uniform(-1, 1);
    const LaurentPoly out = qdiff_B_apply(LaurentPoly(c), draws.structured());
    EXPECT_EQ(out.mass_below(-1), 0.0);
  }
}

TEST(QDiffOscillator, MonomialsSatisfyTheRelation) {
  for (const StructuredParams& p : {kGeneric, StructuredParams{0.5, 0.25, 0.5, 0.25}}) {
    const auto r = qdiff_oscillator_check(p, 10, {1e-12, 1e-9});
    EXPECT_TRUE(r.pass) << r.max_abs;
  }
}

TEST(BSide, ReductionIsInterchangedBigQJacobi) {
  EXPECT_NEAR(b_side_kappa(kGeneric) * kGeneric.c3 * kGeneric.q * (1 - kGeneric.q), 1.0, 1e-15);
  test::Draws draws(206);
  for (int trial = 0; trial < 10; ++trial) {
    const auto r = b_side_identification(draws.structured(), 12);
    EXPECT_TRUE(r.pass) << trial << " " << r.max_abs;
  }
}

}  // namespace
}  // namespace qosc
