#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "qosc/band_matrix.hpp"
#include "qosc/numerics.hpp"
#include "qosc/opmatrix.hpp"
#include "qosc/representation.hpp"

namespace qosc {

/// AB - qBA = I, BZ - qZB = gamma1 A + delta1 I, ZA - qAZ = gamma2 B + delta2 I.
template <class T>
struct BasicBigQJacobiConstants {
  T gamma1{};
  T delta1{};
  T gamma2{};
  T delta2{};
};
using BigQJacobiConstants = BasicBigQJacobiConstants<double>;

/// gamma2 = 1 / r1 and delta2 = -r0 / r1, so the third relation restates
/// B = r1 (ZA - qAZ) + r0 I.
template <class T>
BasicBigQJacobiConstants<T> big_qjacobi_constants(const T& q, const T& c1, const T& c2, const T& c3) {
  const T one(1);
  const T x = c1 * (c2 + one) + c3 * (c1 + one);
  return {-c2 * (q + one) / (c3 * q), c2 / c3 * (c1 + one) + c2 + one,
          -c1 * c3 * q * (q + one) * (one - q) * (one - q), q * (one - q) * x};
}

BigQJacobiConstants big_qjacobi_constants(const StructuredParams& p);

/// M = LZ - qZL - omega0 I, ZM - qMZ = sigma1 L + omega1 I,
/// ML - qLM = sigma2 Z + omega2 I for L = A + mu B.
template <class T>
struct BasicAWAlgebraConstants {
  T omega0{};
  T sigma1{};
  T omega1{};
  T sigma2{};
  T omega2{};
};
using AWAlgebraConstants = BasicAWAlgebraConstants<double>;

template <class T>
BasicAWAlgebraConstants<T> aw_algebra_constants(const T& q, const T& c1, const T& c2, const T& c3, const T& mu) {
  const T one(1);
  const T x = c3 * (c1 + one) + c1 * (c2 + one);
  const T y = c3 * (c2 + one) + c2 * (c1 + one);
  const T qm = q - one;
  const T qq = q * q - one;
  BasicAWAlgebraConstants<T> k;
  k.omega0 = q * (one - q) * x + mu / c3 * y;
  k.sigma1 = c1 * c2 * qq * qq;
  k.omega1 = c2 / c3 * mu * qq * x - c1 * q * (q + one) * qm * qm * y;
  k.sigma2 = mu * (one - q) * (q + one) * (q + one) / q;
  k.omega2 = mu * qq * (c1 * c2 * (one / c3 + one) + c1 + c2 + c3 + one) - c1 * c3 * q * (q + one) * qm * qm -
             mu * mu * (q + one) * c2 / (q * c3);
  return k;
}

AWAlgebraConstants aw_algebra_constants(const StructuredParams& p, double mu);

struct LinearTerm {
  double coeff = 0.0;
  const BandMatrix* op = nullptr;
};

/**
 * Residual of XY - qYX - sum(coeff * op) - constant I on the rows where both
 * products are exact restrictions of the semi-infinite operators. Scale is
 * the largest of |X| |Y|, |coeff| |op| and |constant|.
 */
ResidualReport relation_residual(const BandMatrix& x, const BandMatrix& y, double q,
                                 std::span<const LinearTerm> terms, double constant,
                                 const TolerancePolicy& pol = {});

/**
 * Same relation with row i judged against its own size s_i, the row sum of
 * (|X||Y|) + |q| (|Y||X|) + sum |coeff| |op| + |constant| I. max_abs is the
 * worst |r_ij| / max(1, s_i), compared against rel_tol; scale is 1. Stricter
 * than the norm product, which for geometrically growing operators can exceed
 * the small-index right-hand sides by many orders. Not entrywise: diagonal
 * entries of shifted operators can be far smaller than their inputs' errors.
 */
ResidualReport relation_residual_rowwise(const BandMatrix& x, const BandMatrix& y, double q,
                                           std::span<const LinearTerm> terms, double constant,
                                           const TolerancePolicy& pol = {});

struct BigQJacobiAlgebraReport {
  BigQJacobiConstants constants;
  ResidualReport oscillator;  // AB - qBA - I
  ResidualReport bz;          // BZ - qZB - gamma1 A - delta1 I
  ResidualReport za;          // ZA - qAZ - gamma2 B - delta2 I

  bool pass() const noexcept { return oscillator.pass && bz.pass && za.pass; }
};

/// Throws too_small for size < 4.
BigQJacobiAlgebraReport big_qjacobi_algebra_residuals(const StructuredParams& p, std::size_t size,
                                                      const TolerancePolicy& pol = {});

enum class AWVariant { ML, LM };

const char* to_string(AWVariant v) noexcept;

struct AWAlgebraReport {
  AWAlgebraConstants constants;
  ResidualReport m_definition;  // band product LZ - qZL - omega0 I against the entrywise form
  ResidualReport zm;            // ZM - qMZ - sigma1 L - omega1 I
  ResidualReport ml;            // ML - qLM - sigma2 Z - omega2 I
  ResidualReport lm;            // LM - qML - sigma2 Z - omega2 I
  AWVariant requested = AWVariant::ML;
  std::optional<AWVariant> passing;  // set when exactly one ordering passes

  const ResidualReport& second() const noexcept { return requested == AWVariant::ML ? ml : lm; }
  bool pass() const noexcept { return m_definition.pass && zm.pass && second().pass; }
};

/// Both orderings of the second relation are always evaluated. Throws
/// too_small for size < 5 and invalid_parameter for mu = 0.
/// M = LZ - qZL - omega0 I with L = pencil(p, {mu, 0}), formed entrywise
/// from closed-form z differences.
BandMatrix aw_shifted_M(const StructuredParams& p, double mu, std::size_t size);

AWAlgebraReport aw_algebra_residuals(const StructuredParams& p, double mu, std::size_t size,
                                     const TolerancePolicy& pol = {}, AWVariant variant = AWVariant::ML);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
};

/// Least-squares fit of the diagonal of AB - qBA against z_n over the exact
/// rows: the gamma0, delta0 of the general three-relation pattern.
LinearFit oscillator_z_fit(const BandMatrix& a, const BandMatrix& b, std::span<const double> z, double q);

}  // namespace qosc
