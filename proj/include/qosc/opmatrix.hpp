#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "qosc/band_matrix.hpp"
#include "qosc/numerics.hpp"

namespace qosc {

/// Rows [begin, end) that a residual check covered.
struct RowRange {
  std::size_t begin = 0;
  std::size_t end = 0;
};

/// Identity-violation record: the verification currency of the library.
struct ResidualReport {
  double max_abs = 0.0;
  std::size_t row = 0;
  std::size_t col = 0;
  RowRange checked_rows;
  double scale = 1.0;
  double tolerance = 0.0;
  bool pass = true;
};

/// Max row sum of absolute values.
double norm_inf(const BandMatrix& m);

/// Scans rows [0, rows) of r and compares the largest entry with
/// pol.effective(scale).
ResidualReport residual_report(const BandMatrix& r, std::size_t rows, double scale,
                               const TolerancePolicy& pol);

/// Residual of AB - qBA - rhs.
///
/// Only the rows that are exact restrictions of the semi-infinite products are
/// scanned (see exact_product_rows); for two tridiagonal operands this drops
/// the last row. Scale is max(1, |A|_inf |B|_inf). Throws too_small for
/// size < 3.
ResidualReport q_commutator_residual(const BandMatrix& a, const BandMatrix& b, double q,
                                     const BandMatrix& rhs, const TolerancePolicy& pol = {});

/// Entrywise AB - qBA - rhs in units of the last place of the largest summand
/// max(|(AB)_ij|, |q (BA)_ij|, |rhs_ij|), over the exact rows. The tolerance
/// field carries max_ulp.
ResidualReport q_commutator_ulp(const BandMatrix& a, const BandMatrix& b, double q, const BandMatrix& rhs,
                                double max_ulp = 4.0);

/// D^-1 M D with D = diag(d): entry (n, n+k) is scaled by d[n+k] / d[n].
BandMatrix diag_similarity(const BandMatrix& m, std::span<const double> d);

/// Throws invalid_parameter unless lower, upper <= 1.
void require_tridiagonal(const BandMatrix& m, const char* context);

/// det(xI - M) for tridiagonal M via the leading-minor recurrence.
double char_poly_eval(const BandMatrix& m, double x);

/**
 * Eigenvalues of a tridiagonal matrix whose spectrum is real and simple,
 * in ascending order.
 *
 * Roots of the characteristic polynomial (evaluated with its derivative by the
 * minor recurrence) are found simultaneously by Aberth-Ehrlich iteration from
 * deterministic seeds on the Gershgorin circle, then each real root is
 * polished by Newton steps on the undeflated polynomial.
 *
 * Throws numeric_failure if the iteration does not converge and
 * unsupported_spectrum if a root is genuinely complex.
 */
std::vector<double> eigenvalues(const BandMatrix& m, const TolerancePolicy& pol = {});

}  // namespace qosc
