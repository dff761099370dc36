#pragma once

#include <cstddef>
#include <vector>

#include "qosc/band_matrix.hpp"
#include "qosc/families.hpp"
#include "qosc/laurent_poly.hpp"
#include "qosc/numerics.hpp"
#include "qosc/opmatrix.hpp"
#include "qosc/representation.hpp"

namespace qosc {

/// Z e_n = z_n e_n with z_n = c1 c2 q^(n+1) + q^-n.
struct DiagonalOperator {
  std::vector<double> z;

  BandMatrix matrix() const { return BandMatrix::diagonal(z); }
};

/// W = tau1 ZA + tau2 AZ + tau3 A + tau0 I.
struct WCoeffs {
  double tau0 = 0.0;
  double tau1 = 0.0;
  double tau2 = 0.0;
  double tau3 = 0.0;
};

/// C = A + mu B + lambda I.
struct PencilParams {
  double mu = 0.0;
  double lambda = 0.0;
};

DiagonalOperator build_Z(const StructuredParams& p, std::size_t size);

/// z_j - q z_i for |i - j| <= 1 in closed form. Forming the difference from
/// stored z values cancels q^-n terms and loses up to q^-2n relative accuracy.
double z_q_difference(const StructuredParams& p, int i, int j);

/// The two constants of B = r1 ZA - q r1 AZ + r0 I.
struct TridiagonalizationConstants {
  double r0 = 0.0;
  double r1 = 0.0;
};

TridiagonalizationConstants tridiagonalization_constants(const StructuredParams& p);

/// B = r1 ZA - q r1 AZ + r0 I for the monic big q-Jacobi matrix A.
BandMatrix build_B_from_A(const StructuredParams& p, std::size_t size);
BandMatrix build_B_from_A(const StructuredParams& p, const MonicRecurrence& a);

/**
 * W = tau1 ZA + tau2 AZ + tau3 A + tau0 I with A the monic big q-Jacobi
 * matrix, assembled from its closed-form bands:
 *
 *   W(n+1, n) = tau1 z_(n+1) + tau2 z_n + tau3
 *   W(n, n)   = ((tau1 + tau2) z_n + tau3) b_n + tau0
 *   W(n, n+1) = (tau1 z_n + tau2 z_(n+1) + tau3) u_(n+1)
 *
 * tau1 z_i + tau2 z_j is regrouped by powers of q so that the cancellation
 * at tau2 = -q tau1 is exact.
 */
BandMatrix build_W(const StructuredParams& p, const WCoeffs& w, std::size_t size);

/// Same bands with b_n, u_n taken from `a` instead of big_q_jacobi(p). Used for
/// truncated families whose coefficients are evaluated in specialized form;
/// p only supplies q and c1 c2 for z_n.
BandMatrix build_W(const StructuredParams& p, const WCoeffs& w, const MonicRecurrence& a);

struct MonicReduction {
  MonicRecurrence rec;
  std::vector<double> d;  // W_monic = D^-1 W D, D = diag(d)
};

/// Diagonal similarity that makes the subdiagonal all ones. Throws
/// not_reducible_to_monic when a subdiagonal entry is within abs_tol of 0.
MonicReduction to_monic(const BandMatrix& w, const TolerancePolicy& pol = {});

struct AWEmbedding {
  StructuredParams structured;
  WCoeffs w;
};

/// c1 = a1 a2 / q, c2 = a3 a4 / q, c3 = a1 a3 / q and the matching taus, under
/// which to_monic(build_W) reproduces askey_wilson.
AWEmbedding aw_parameter_map(const AWParams& p);

struct AWMatchReport {
  MonicRecurrence reduced;      // to_monic(build_W(aw_parameter_map(p)))
  MonicRecurrence askey_wilson;
  ResidualReport b;  // |b~ - b_AW| / ((|a1| + |1/a1| + |D_n| + |C_n|) / 2)
  ResidualReport u;  // |u~ - u_AW| / |u_AW|

  bool pass() const noexcept { return b.pass && u.pass; }
};

/// Coefficients n = 0..size-1 of the reduced W against the Askey-Wilson
/// recurrence. b_n is compared relative to the magnitude of the summands of
/// its closed form, since b_AW itself can cancel to 0. Tolerance pol.rel_tol.
AWMatchReport aw_match(const AWParams& p, std::size_t size, const TolerancePolicy& pol = {});

BandMatrix pencil(const StructuredParams& p, const PencilParams& pp, std::size_t size);

/// The pencil from its three explicit bands V1, V2, V3 instead of the W route.
BandMatrix pencil_closed_form(const StructuredParams& p, const PencilParams& pp, std::size_t size);

/// The pencil proportional to the Askey-Wilson W: A + mu B + lambda I = W / tau3.
struct AWPencil {
  StructuredParams structured;
  PencilParams pencil;
  double tau3 = 0.0;
};

AWPencil aw_pencil_embedding(const AWParams& p);

/// E(x) f(qx) + F(x) f(x/q) - (E(x) + F(x) - c1 c2 q - 1) f(x).
LaurentPoly qdiff_Z_apply(const LaurentPoly& f, const StructuredParams& p);

/// (x - q c1)(x - q c3) / (q^2 (q - 1) c1 c3 x) f(x/q) + f(x) / ((1 - q) x).
LaurentPoly qdiff_B_apply(const LaurentPoly& f, const StructuredParams& p);

/**
 * (x B - q B x) f - f for f = x^k, k = 0..k_max, with x the multiplication
 * operator and B = qdiff_B_apply. max_abs is the largest coefficient of the
 * difference divided by the coefficient mass of the three subtracted terms;
 * the tolerance is pol.abs_tol.
 */
ResidualReport qdiff_oscillator_check(const StructuredParams& p, int k_max, const TolerancePolicy& pol = {});

/**
 * qdiff_Z_apply(P_n) - z_n P_n for the big q-Jacobi polynomials, n = 0..n_max.
 * max_abs is the largest coefficient deviation relative to |z_n| times the
 * coefficient mass of P_n; the tolerance is pol.rel_tol.
 */
ResidualReport qdiff_Z_eigen_check(const StructuredParams& p, int n_max, const TolerancePolicy& pol = {});

/// kappa with kappa c3 q (1 - q) = 1.
double b_side_kappa(const StructuredParams& p);

/**
 * Compares the monic reduction of build_B_from_A with the big q-Jacobi
 * recurrence at c1 and c2 interchanged, scaled by kappa: diagonal against
 * kappa b~_n and coupling products against kappa^2 u~_n. max_abs is the
 * largest relative deviation.
 */
ResidualReport b_side_identification(const StructuredParams& p, std::size_t size,
                                     const TolerancePolicy& pol = {});

}  // namespace qosc
