#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "qosc/band_matrix.hpp"
#include "qosc/laurent_poly.hpp"
#include "qosc/numerics.hpp"
#include "qosc/opmatrix.hpp"
#include "qosc/representation.hpp"

namespace qosc {

enum class Family { big_q_jacobi, askey_wilson, q_hahn, q_para_krawtchouk, custom };

const char* to_string(Family f) noexcept;

struct AWParams {
  double q = 0.0;
  double a1 = 0.0;
  double a2 = 0.0;
  double a3 = 0.0;
  double a4 = 0.0;

  double g() const noexcept { return a1 * a2 * a3 * a4; }
};

struct QHahnParams {
  double q = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  int N = 0;
};

struct QParaParams {
  double q = 0.0;
  double c3 = 0.0;
  int N = 0;  // odd
};

using SourceParams = std::variant<std::monostate, StructuredParams, AWParams, QHahnParams, QParaParams>;

/// Coefficients of P_(n+1) = (x - b_n) P_n - u_n P_(n-1).
///
/// u[k] holds u_(k+1), so u.size() == b.size() - 1. Finite families also
/// record the truncating coefficient u_(N+1) in next_u.
struct MonicRecurrence {
  std::vector<double> b;
  std::vector<double> u;
  Family family = Family::custom;
  SourceParams params;
  std::optional<double> next_u;

  std::size_t size() const noexcept { return b.size(); }

  /// Subdiagonal 1, diagonal b_n, superdiagonal u_(n+1).
  BandMatrix jacobi_matrix() const;
};

// Coefficient kernels, templated so exact rational types reuse them verbatim.

/// D_n and C_n of the big q-Jacobi recurrence. C_0 = 0.
template <class T>
T big_q_jacobi_D(const T& q, const T& c1, const T& c2, const T& c3, int n) {
  const T p = c1 * c2;
  return (T(1) - c1 * ipow(q, n + 1)) * (T(1) - p * ipow(q, n + 1)) * (T(1) - c3 * ipow(q, n + 1)) /
         ((T(1) - p * ipow(q, 2 * n + 1)) * (T(1) - p * ipow(q, 2 * n + 2)));
}

template <class T>
T big_q_jacobi_C(const T& q, const T& c1, const T& c2, const T& c3, int n) {
  if (n == 0) return T(0);
  const T p = c1 * c2;
  return -c1 * c3 * ipow(q, n + 1) * (T(1) - ipow(q, n)) * (T(1) - c2 * ipow(q, n)) *
         (T(1) - p / c3 * ipow(q, n)) /
         ((T(1) - p * ipow(q, 2 * n + 1)) * (T(1) - p * ipow(q, 2 * n)));
}

/// 1 - D_n with the leading 1 cancelled symbolically. `gamma` is the third
/// numerator root c3 q^(n+1), passed separately so truncated families can
/// supply it exactly.
template <class T>
T big_q_jacobi_one_minus_D(const T& q, const T& c1, const T& c2, const T& gamma, int n) {
  const T p = c1 * c2;
  const T t = ipow(q, n + 1);
  const T alpha = c1 * t;
  const T beta = p * t;
  const T delta = p * ipow(q, 2 * n + 1);
  const T eps = delta * q;
  const T den = (T(1) - delta) * (T(1) - eps);
  return (alpha + beta + gamma - alpha * beta - alpha * gamma - beta * gamma + alpha * beta * gamma -
          delta - eps + delta * eps) /
         den;
}

/// D_n and C_n of the Askey-Wilson recurrence. C_0 = 0.
template <class T>
T askey_wilson_D(const T& q, const T& a1, const T& a2, const T& a3, const T& a4, int n) {
  const T g = a1 * a2 * a3 * a4;
  const T qn = ipow(q, n);
  return (T(1) - a1 * a2 * qn) * (T(1) - a1 * a3 * qn) * (T(1) - a1 * a4 * qn) * (T(1) - g * ipow(q, n - 1)) /
         (a1 * (T(1) - g * ipow(q, 2 * n - 1)) * (T(1) - g * ipow(q, 2 * n)));
}

template <class T>
T askey_wilson_C(const T& q, const T& a1, const T& a2, const T& a3, const T& a4, int n) {
  if (n == 0) return T(0);
  const T g = a1 * a2 * a3 * a4;
  const T qm = ipow(q, n - 1);
  return a1 * (T(1) - ipow(q, n)) * (T(1) - a2 * a3 * qm) * (T(1) - a2 * a4 * qm) * (T(1) - a3 * a4 * qm) /
         ((T(1) - g * ipow(q, 2 * n - 1)) * (T(1) - g * ipow(q, 2 * n - 2)));
}

/// D_n and C_n of the q-para Krawtchouk recurrence (N odd). C_0 = 0.
template <class T>
T q_para_D(const T& q, const T& c3, int N, int n) {
  return (T(1) - ipow(q, n - N)) * (T(1) - c3 * ipow(q, n + 1)) /
         ((T(1) - ipow(q, 2 * n - N)) * (T(1) + ipow(q, n - (N - 1) / 2)));
}

template <class T>
T q_para_C(const T& q, const T& c3, int N, int n) {
  if (n == 0) return T(0);
  return -c3 * ipow(q, n - (N - 1) / 2) * (T(1) - ipow(q, n)) * (T(1) - ipow(q, n - N - 1) / c3) /
         ((T(1) - ipow(q, 2 * n - N)) * (T(1) + ipow(q, n - (N + 1) / 2)));
}

/// D_n and C_n of the q-Hahn truncation c3 = q^(-N-1), with the truncating
/// factors written so that D_N vanishes exactly.
template <class T>
T q_hahn_D(const T& q, const T& c1, const T& c2, int N, int n) {
  const T p = c1 * c2;
  return (T(1) - c1 * ipow(q, n + 1)) * (T(1) - p * ipow(q, n + 1)) * (T(1) - ipow(q, n - N)) /
         ((T(1) - p * ipow(q, 2 * n + 1)) * (T(1) - p * ipow(q, 2 * n + 2)));
}

template <class T>
T q_hahn_C(const T& q, const T& c1, const T& c2, int N, int n) {
  if (n == 0) return T(0);
  const T p = c1 * c2;
  return -c1 * ipow(q, n - N) * (T(1) - ipow(q, n)) * (T(1) - c2 * ipow(q, n)) *
         (T(1) - p * ipow(q, n + N + 1)) /
         ((T(1) - p * ipow(q, 2 * n + 1)) * (T(1) - p * ipow(q, 2 * n)));
}

/// Throws resonance when a big q-Jacobi denominator vanishes for n < count.
MonicRecurrence big_q_jacobi(const StructuredParams& p, std::size_t count);

/// Throws invalid_parameter for a1 = 0 or a vanishing denominator.
MonicRecurrence askey_wilson(const AWParams& p, std::size_t count);

/// Size N + 1; D_N = 0 exactly.
MonicRecurrence q_hahn(const QHahnParams& p);

/// Size N + 1 for odd N; D_N = 0 exactly.
MonicRecurrence q_para_krawtchouk(const QParaParams& p);

/// The big q-Jacobi parameters the truncated families specialize:
/// c3 = q^(-N-1) for q-Hahn, c1 = c2 = q^(-(N+1)/2) for q-para Krawtchouk.
StructuredParams structured_params(const QHahnParams& p);
StructuredParams structured_params(const QParaParams& p);

/// P_n(x) by the recurrence, n = 0..size. Throws out_of_range otherwise.
double eval_monic(const MonicRecurrence& rec, int n, double x);

/// Coefficients of P_n as a polynomial in x.
LaurentPoly monic_polynomial(const MonicRecurrence& rec, int n);

enum class LatticeKind { single_exponential, bi_exponential };

struct SpectrumLattice {
  std::vector<double> points;  // ascending
  LatticeKind kind = LatticeKind::single_exponential;
};

/// {q^-s} for q-Hahn; {q^-s} union {c3 q^(s+1)} for q-para Krawtchouk.
/// Throws unsupported_family for the other families.
SpectrumLattice claimed_spectrum(const MonicRecurrence& rec);

/// Greedy nearest-neighbour pairing: result[s] is the index in `eigen` closest
/// (relative to max(1, |x_s|)) to lattice point s. Throws spectrum_mismatch
/// when the sizes differ or two points claim the same eigenvalue.
std::vector<std::size_t> pair_spectrum(std::span<const double> eigen, std::span<const double> lattice);

/// |P_(N+1)(x_s)| / prod_(t != s) |x_s - x_t| for every lattice point.
std::vector<double> scaled_char_poly_residuals(const MonicRecurrence& rec, std::span<const double> lattice);

/**
 * Checks that the lattice is the zero set of the characteristic polynomial.
 *
 * max_abs is the larger of |P_(N+1)(x_s)| / prod_(t != s) |x_s - x_t| and the
 * distance from x_s to its paired eigenvalue, over all s; the tolerance is
 * pol.effective(max |x_s|). Throws spectrum_mismatch when the sizes differ or
 * two lattice points claim the same eigenvalue.
 */
ResidualReport verify_spectrum(const MonicRecurrence& rec, const SpectrumLattice& lat,
                               const TolerancePolicy& pol = {});

}  // namespace qosc
