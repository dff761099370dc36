#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "qosc/band_matrix.hpp"
#include "qosc/numerics.hpp"
#include "qosc/opmatrix.hpp"

namespace qosc {

/// (xi0, zeta0, s1, s2, q): the free data of an irreducible tridiagonal
/// representation with monic A.
template <class T>
struct BasicGeneralParams {
  T q{};
  T xi0{};
  T zeta0{};
  T s1{};
  T s2{};
};
using GeneralParams = BasicGeneralParams<double>;

/// Every intermediate sequence of the step-by-step solution. Index n is the
/// basis index; entries that are undefined for n = 0 hold zero (u[0], V[0]).
template <class T>
struct BasicGeneralSolutionTrace {
  std::vector<T> xi;     // xi0 q^-n, n = 0..size
  std::vector<T> zeta;   // zeta0 q^n, n = 0..size
  std::vector<T> z;      // xi_n + q zeta_n
  std::vector<T> gamma;  // xi0 q^-n - zeta0 q^n
  std::vector<T> y;      // xi0 q^-n - zeta0 q^(n+1)
  std::vector<T> K;      // n = 0..size-1
  std::vector<T> b;      // n = 0..size-1
  std::vector<T> eta;    // n = 0..size-1
  std::vector<T> u;      // n = 0..size-1, u[0] = 0
  std::vector<T> V;      // y_n y_(n-1) u_n
  T s0{};
};
using GeneralSolutionTrace = BasicGeneralSolutionTrace<double>;

/// (c1, c2, c3, q): big q-Jacobi parameterization of the same representations.
struct StructuredParams {
  double q = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;
};

/// Throws invalid_parameter / resonance when the big q-Jacobi denominators
/// vanish for some n < size.
void validate(const StructuredParams& p, std::size_t size);

/// (b0, eta0) from (s1, s2): inverse of the linear map defining s1, s2.
template <class T>
std::pair<T, T> initial_diagonals(const BasicGeneralParams<T>& p) {
  const T& q = p.q;
  const T lead = p.xi0 / q + p.zeta0;
  const T mix = T(1) + T(1) / q;
  const T det = lead * lead - mix * mix * p.xi0 * p.zeta0;
  const T b0 = (lead * p.s1 + mix * p.s2) / det;
  const T eta0 = (lead * p.s2 + p.xi0 * p.zeta0 * mix * p.s1) / det;
  return {b0, eta0};
}

/// s1 and s2 as functions of (b0, eta0).
template <class T>
std::pair<T, T> invariants_from_initial(const T& q, const T& xi0, const T& zeta0, const T& b0,
                                        const T& eta0) {
  const T lead = xi0 / q + zeta0;
  const T mix = T(1) + T(1) / q;
  return {lead * b0 - mix * eta0, lead * eta0 - xi0 * zeta0 * mix * b0};
}

/**
 * Closed-form general solution for basis indices 0..size-1. No validation:
 * callers in double precision go through build_general; exact-arithmetic
 * callers are expected to pass resonance-free parameters.
 */
template <class T>
BasicGeneralSolutionTrace<T> general_solution(const BasicGeneralParams<T>& p, std::size_t size) {
  const T& q = p.q;
  const T& xi0 = p.xi0;
  const T& zeta0 = p.zeta0;
  const T& s1 = p.s1;
  const T& s2 = p.s2;
  const int n_max = static_cast<int>(size);

  BasicGeneralSolutionTrace<T> tr;
  for (int n = 0; n <= n_max; ++n) {
    const T down = ipow(q, -n);
    const T up = ipow(q, n);
    tr.xi.push_back(xi0 * down);
    tr.zeta.push_back(zeta0 * up);
    tr.z.push_back(xi0 * down + zeta0 * up * q);
    tr.gamma.push_back(xi0 * down - zeta0 * up);
    tr.y.push_back(xi0 * down - zeta0 * up * q);
  }

  auto K = [&](int n) {
    const T qn = ipow(q, n);
    const T g = tr.gamma[static_cast<std::size_t>(n)];
    return ipow(q, 2 - n) * (s2 + s1 * zeta0 * qn) * (s2 * qn + s1 * xi0) / (g * g);
  };

  // u_0 = 0 fixes the constant of the telescoped equation.
  const T diff = xi0 - zeta0;
  tr.s0 = q *
          ((xi0 + zeta0) * diff * diff +
           q * (T(1) - q) * (xi0 * zeta0 * s1 * s1 + (xi0 + zeta0) * s1 * s2 + s2 * s2)) /
          ((q - T(1)) * diff * diff);

  const auto [b0, eta0] = initial_diagonals(p);
  for (int n = 0; n < n_max; ++n) {
    const std::size_t i = static_cast<std::size_t>(n);
    tr.K.push_back(K(n));
    if (n == 0) {
      tr.b.push_back(b0);
      tr.eta.push_back(eta0);
      tr.u.push_back(T(0));
      tr.V.push_back(T(0));
      continue;
    }
    const T den = tr.gamma[i] * tr.gamma[i + 1];
    tr.b.push_back((s2 * (q + T(1)) + s1 * tr.z[i]) / den);
    tr.eta.push_back((s1 * xi0 * zeta0 * (q + T(1)) + s2 * tr.z[i]) / den);
    const T V = (xi0 * ipow(q, -n) + zeta0 * ipow(q, n)) / (T(1) / q - T(1)) + tr.K[i] + tr.s0;
    tr.V.push_back(V);
    tr.u.push_back(V / (tr.y[i] * tr.y[i - 1]));
  }
  return tr;
}

/// A (subdiagonal 1, diagonal b_n, superdiagonal u_(n+1)) and
/// B (subdiagonal xi_(n+1), diagonal eta_n, superdiagonal zeta_(n+1) u_(n+1)).
template <class T>
std::pair<BasicBandMatrix<T>, BasicBandMatrix<T>> general_pair(const BasicGeneralSolutionTrace<T>& tr) {
  const std::size_t n = tr.b.size();
  std::vector<T> ones(n - 1, T(1)), a_sup(n - 1), b_sub(n - 1), b_sup(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    a_sup[i] = tr.u[i + 1];
    b_sub[i] = tr.xi[i + 1];
    b_sup[i] = tr.zeta[i + 1] * tr.u[i + 1];
  }
  return {BasicBandMatrix<T>::tridiagonal(std::move(ones), tr.b, std::move(a_sup)),
          BasicBandMatrix<T>::tridiagonal(std::move(b_sub), tr.eta, std::move(b_sup))};
}

struct GeneralRepresentation {
  BandMatrix A;
  BandMatrix B;
  GeneralSolutionTrace trace;
};

/**
 * Builds the general tridiagonal pair with AB - qBA = I.
 *
 * Throws invalid_parameter for q in {0, +-1} or zero xi0 / zeta0, too_small for
 * size < 3, overflow_guard, resonance when some gamma_n or y_n vanishes, and
 * reducible_representation when some u_n (n = 1..size-1) vanishes.
 */
GeneralRepresentation build_general(const GeneralParams& p, std::size_t size);

/// The five consistency sequences, read off the matrix entries.
struct XiResiduals {
  std::vector<double> xi1;  // n = 2..size-1 stored at index n - 2
  std::vector<double> xi2;  // n = 1..size-1 stored at index n - 1
  std::vector<double> xi3;  // n = 0..size-2 stored at index n
  std::vector<double> xi4;  // n = 1..size-1 stored at index n - 1
  std::vector<double> xi5;  // n = 2..size-1 stored at index n - 2

  double max_abs() const;
};

/// Throws invalid_normalization when A is not monic (subdiagonal of ones).
XiResiduals xi_residuals(const BandMatrix& a, const BandMatrix& b, double q);

struct Classification {
  GeneralParams params;
  ResidualReport fit;  // max relative entry deviation against build_general
};

/**
 * Recovers (xi0, zeta0, s1, s2) from a monic tridiagonal pair: xi0 and zeta0
 * from the first entries of the geometric bands, s1 and s2 from (b0, eta0).
 * The remaining entries are validated against build_general.
 *
 * Throws invalid_normalization for non-monic A and not_a_representation when
 * the xi or zeta band is not geometric with ratio 1/q resp. q.
 */
Classification classify(const BandMatrix& a, const BandMatrix& b, double q,
                        const TolerancePolicy& pol = {});

struct CanonicalPair {
  BandMatrix A;  // diag(a q^-n)
  BandMatrix B;  // diagonal a' q^n, superdiagonal 1, a a' (1 - q) = 1
};

CanonicalPair canonical_pair(double a, double q, std::size_t size);

struct SpectralBlock {
  std::vector<double> spectrum;  // geometric progression with ratio 1/q
  std::size_t size = 0;
};

struct Decomposition {
  std::vector<SpectralBlock> blocks;
  double off_block_mass = 0.0;  // relative to the largest entry of B in the eigenbasis
  double tolerance = 0.0;       // bound the off-block mass was certified against
};

/// Partitions a spectrum into maximal chains lambda, lambda/q, lambda/q^2, ...
/// Chains are ordered by their first element; each chain is ordered along
/// multiplication by 1/q.
std::vector<std::vector<double>> geometric_chains(std::span<const double> spectrum, double q,
                                                  const TolerancePolicy& pol = {});

/**
 * Splits a finite representation into blocks, one per geometric chain of the
 * spectrum of A, and certifies that B leaves the span of each chain's
 * eigenvectors invariant.
 *
 * Throws not_a_representation when the commutator check fails and
 * not_decomposable when B mixes chains beyond tolerance.
 */
Decomposition decompose(const BandMatrix& a, const BandMatrix& b, double q,
                        const TolerancePolicy& pol = {});

}  // namespace qosc
