#include "qosc/representation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <tuple>

namespace qosc {

namespace {

// Adjacent eigenvalues belong to the same chain when lambda_next * q matches
// lambda within this relative distance.
constexpr double kChainRelTol = 1e-7;

std::string idx(std::size_t n) { return std::to_string(n); }

double rel_dev(double x, double y, double floor) {
  return std::abs(x - y) / std::max({std::abs(x), std::abs(y), floor});
}

void require_monic(const BandMatrix& a, const BandMatrix& b, const char* context) {
  require_tridiagonal(a, context);
  require_tridiagonal(b, context);
  if (a.size() != b.size()) {
    throw Error(ErrorKind::invalid_parameter, std::string(context) + ": size mismatch");
  }
  if (a.size() < 3) throw Error(ErrorKind::too_small, std::string(context) + " needs size >= 3");
  for (std::size_t n = 1; n < a.size(); ++n) {
    if (a(n, n - 1) != 1.0) {
      throw Error(ErrorKind::invalid_normalization,
                  std::string(context) + ": A(" + idx(n) + ", " + idx(n - 1) + ") is not 1");
    }
  }
}

using Dense = std::vector<std::vector<double>>;

Dense to_dense(const BandMatrix& m) {
  const std::size_t n = m.size();
  Dense d(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) d[i][j] = m(i, j);
  }
  return d;
}

// Solves (M - shift I) x = rhs by Gaussian elimination with partial pivoting.
// Exact singularity is replaced by a tiny pivot, which is what inverse
// iteration wants.
std::vector<double> shifted_solve(const Dense& m, double shift, std::vector<double> rhs) {
  const std::size_t n = m.size();
  Dense a = m;
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    a[i][i] -= shift;
    for (double v : a[i]) scale = std::max(scale, std::abs(v));
  }
  const double tiny = std::max(scale, 1.0) * 1e-18;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::abs(a[i][k]) > std::abs(a[p][k])) p = i;
    }
    std::swap(a[k], a[p]);
    std::swap(rhs[k], rhs[p]);
    if (std::abs(a[k][k]) < tiny) a[k][k] = a[k][k] < 0 ? -tiny : tiny;
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = a[i][k] / a[k][k];
      if (f == 0.0) continue;
      for (std::size_t j = k; j < n; ++j) a[i][j] -= f * a[k][j];
      rhs[i] -= f * rhs[k];
    }
  }
  std::vector<double> x(n);
  for (std::size_t k = n; k-- > 0;) {
    double s = rhs[k];
    for (std::size_t j = k + 1; j < n; ++j) s -= a[k][j] * x[j];
    x[k] = s / a[k][k];
  }
  return x;
}

void normalize(std::vector<double>& v) {
  double big = 0.0;
  for (double x : v) big = std::max(big, std::abs(x));
  if (big > 0.0 && std::isfinite(big)) {
    for (double& x : v) x /= big;
  }
}

std::vector<double> inverse_iteration(const Dense& m, double lambda) {
  const std::size_t n = m.size();
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = 1.0 + 0.1 * static_cast<double>(i % 7);
  for (int it = 0; it < 3; ++it) {
    v = shifted_solve(m, lambda, std::move(v));
    normalize(v);
  }
  return v;
}

Dense transposed(const Dense& m) {
  const std::size_t n = m.size();
  Dense t(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) t[j][i] = m[i][j];
  }
  return t;
}

}  // namespace

void validate(const StructuredParams& p, std::size_t size) {
  check_q(p.q, "structured parameters");
  if (p.c1 == 0.0 || p.c3 == 0.0) {
    throw Error(ErrorKind::invalid_parameter, "structured parameters: c1 and c3 must be nonzero");
  }
  const double g = p.c1 * p.c2;
  for (std::size_t n = 0; n < size; ++n) {
    const int k = static_cast<int>(n);
    if (near_one(g * ipow(p.q, 2 * k + 1)) || near_one(g * ipow(p.q, 2 * k + 2))) {
      throw Error(ErrorKind::resonance, "structured parameters: 1 - c1 c2 q^k vanishes near n = " + idx(n));
    }
  }
}

GeneralRepresentation build_general(const GeneralParams& p, std::size_t size) {
  check_q(p.q, "build_general");
  if (p.xi0 == 0.0 || p.zeta0 == 0.0 || !std::isfinite(p.xi0) || !std::isfinite(p.zeta0) ||
      !std::isfinite(p.s1) || !std::isfinite(p.s2)) {
    throw Error(ErrorKind::invalid_parameter, "build_general: xi0 and zeta0 must be finite and nonzero");
  }
  if (size < 3) throw Error(ErrorKind::too_small, "build_general needs size >= 3");
  check_overflow_guard(p.q, size);

  for (std::size_t n = 0; n <= size; ++n) {
    const int k = static_cast<int>(n);
    const double natural = std::abs(p.xi0) * std::pow(std::abs(p.q), -k) +
                           std::abs(p.zeta0) * std::pow(std::abs(p.q), k);
    const double gamma = p.xi0 * ipow(p.q, -k) - p.zeta0 * ipow(p.q, k);
    const double y = p.xi0 * ipow(p.q, -k) - p.zeta0 * ipow(p.q, k + 1);
    if (std::abs(gamma) <= kResonanceRelTol * natural) {
      throw Error(ErrorKind::resonance, "gamma_" + idx(n) + " vanishes");
    }
    if (n < size && std::abs(y) <= kResonanceRelTol * natural) {
      throw Error(ErrorKind::resonance, "y_" + idx(n) + " vanishes");
    }
  }

  GeneralSolutionTrace tr = general_solution(p, size);
  for (std::size_t n = 1; n < size; ++n) {
    const int k = static_cast<int>(n);
    const double lead = (p.xi0 * ipow(p.q, -k) + p.zeta0 * ipow(p.q, k)) / (1.0 / p.q - 1.0);
    const double terms = std::abs(lead) + std::abs(tr.K[n]) + std::abs(tr.s0);
    if (!std::isfinite(tr.u[n])) {
      throw Error(ErrorKind::numeric_failure, "u_" + idx(n) + " is not finite");
    }
    if (std::abs(tr.V[n]) <= kResonanceRelTol * terms) {
      throw Error(ErrorKind::reducible_representation, "u_" + idx(n) + " vanishes");
    }
  }
  auto [a, b] = general_pair(tr);
  return {std::move(a), std::move(b), std::move(tr)};
}

double XiResiduals::max_abs() const {
  double m = 0.0;
  for (const auto* seq : {&xi1, &xi2, &xi3, &xi4, &xi5}) {
    for (double v : *seq) m = std::max(m, std::abs(v));
  }
  return m;
}

XiResiduals xi_residuals(const BandMatrix& a, const BandMatrix& b, double q) {
  require_monic(a, b, "xi_residuals");
  const std::size_t size = a.size();
  // xi_n = B(n, n-1), zeta_n u_n = B(n-1, n), u_n = A(n-1, n); index 0 entries
  // only ever appear multiplied by u_0 = 0.
  std::vector<double> xi(size, 0.0), zeta(size, 0.0), u(size, 0.0), bd(size), eta(size);
  for (std::size_t n = 0; n < size; ++n) {
    bd[n] = a(n, n);
    eta[n] = b(n, n);
    if (n == 0) continue;
    xi[n] = b(n, n - 1);
    u[n] = a(n - 1, n);
    if (u[n] == 0.0) {
      throw Error(ErrorKind::reducible_representation,
                  "xi_residuals: A(" + idx(n - 1) + ", " + idx(n) + ") vanishes");
    }
    zeta[n] = b(n - 1, n) / u[n];
  }
  XiResiduals r;
  for (std::size_t n = 2; n < size; ++n) {
    r.xi1.push_back(xi[n - 1] - q * xi[n]);
    r.xi5.push_back(zeta[n] - q * zeta[n - 1]);
  }
  for (std::size_t n = 1; n < size; ++n) {
    r.xi2.push_back(xi[n] * (bd[n] - q * bd[n - 1]) + eta[n - 1] - q * eta[n]);
    r.xi4.push_back(zeta[n] * (bd[n - 1] - q * bd[n]) + eta[n] - q * eta[n - 1]);
  }
  for (std::size_t n = 0; n + 1 < size; ++n) {
    r.xi3.push_back(zeta[n] * u[n] - q * zeta[n + 1] * u[n + 1] + xi[n + 1] * u[n + 1] -
                    q * xi[n] * u[n] + (1.0 - q) * bd[n] * eta[n] - 1.0);
  }
  return r;
}

Classification classify(const BandMatrix& a, const BandMatrix& b, double q, const TolerancePolicy& pol) {
  pol.validate();
  check_q(q, "classify");
  require_monic(a, b, "classify");
  const std::size_t size = a.size();

  const double xi1 = b(1, 0);
  const double u1 = a(0, 1);
  if (u1 == 0.0) throw Error(ErrorKind::reducible_representation, "classify: A(0, 1) vanishes");
  const double zeta1 = b(0, 1) / u1;
  for (std::size_t n = 2; n < size; ++n) {
    const int k = static_cast<int>(n) - 1;
    const double u = a(n - 1, n);
    if (u == 0.0) {
      throw Error(ErrorKind::reducible_representation, "classify: A(" + idx(n - 1) + ", " + idx(n) + ") vanishes");
    }
    const double xi_expect = xi1 * ipow(q, -k);
    const double zeta_expect = zeta1 * ipow(q, k);
    if (rel_dev(b(n, n - 1), xi_expect, pol.abs_tol) > pol.rel_tol) {
      throw Error(ErrorKind::not_a_representation,
                  "classify: subdiagonal of B is not geometric with ratio 1/q at n = " + idx(n));
    }
    if (rel_dev(b(n - 1, n) / u, zeta_expect, pol.abs_tol) > pol.rel_tol) {
      throw Error(ErrorKind::not_a_representation,
                  "classify: superdiagonal ratio of B is not geometric with ratio q at n = " + idx(n));
    }
  }

  Classification c;
  c.params.q = q;
  c.params.xi0 = q * xi1;
  c.params.zeta0 = zeta1 / q;
  std::tie(c.params.s1, c.params.s2) =
      invariants_from_initial(q, c.params.xi0, c.params.zeta0, a(0, 0), b(0, 0));

  const GeneralRepresentation rebuilt = build_general(c.params, size);
  ResidualReport& fit = c.fit;
  fit.checked_rows = {0, size};
  fit.scale = 1.0;
  fit.tolerance = pol.rel_tol;
  for (std::size_t i = 0; i < size; ++i) {
    for (std::size_t j = (i == 0 ? 0 : i - 1); j <= std::min(size - 1, i + 1); ++j) {
      for (const auto& [given, built] : {std::pair{&a, &rebuilt.A}, std::pair{&b, &rebuilt.B}}) {
        const double dev = rel_dev((*given)(i, j), (*built)(i, j), pol.abs_tol);
        if (dev > fit.max_abs || std::isnan(dev)) {
          fit.max_abs = dev;
          fit.row = i;
          fit.col = j;
        }
      }
    }
  }
  fit.pass = fit.max_abs <= fit.tolerance;
  return c;
}

CanonicalPair canonical_pair(double a, double q, std::size_t size) {
  if (!std::isfinite(q) || q == 0.0 || q == 1.0) {
    throw Error(ErrorKind::invalid_parameter, "canonical_pair: q must be finite and not in {0, 1}");
  }
  if (a == 0.0 || !std::isfinite(a)) {
    throw Error(ErrorKind::invalid_parameter, "canonical_pair: a must be finite and nonzero");
  }
  if (size == 0) throw Error(ErrorKind::too_small, "canonical_pair needs size >= 1");
  // Dividing by q step by step keeps q * A(n+1, n+1) within an ulp of A(n, n);
  // B(n, n) = a' q^n is formed from A(n, n) so the diagonal products do not
  // accumulate the rounding of either progression.
  const double one_minus_q = 1.0 - q;
  std::vector<double> diag_a(size), diag_b(size);
  diag_a[0] = a;
  for (std::size_t n = 1; n < size; ++n) diag_a[n] = diag_a[n - 1] / q;
  for (std::size_t n = 0; n < size; ++n) diag_b[n] = 1.0 / (one_minus_q * diag_a[n]);
  BandMatrix b(size, 0, size > 1 ? 1 : 0);
  for (std::size_t n = 0; n < size; ++n) {
    b.ref(n, n) = diag_b[n];
    if (n + 1 < size) b.ref(n, n + 1) = 1.0;
  }
  return {BandMatrix::diagonal(std::move(diag_a)), std::move(b)};
}

std::vector<std::vector<double>> geometric_chains(std::span<const double> spectrum, double q,
                                                  const TolerancePolicy& pol) {
  check_q(q, "geometric_chains");
  const double tol = std::max(kChainRelTol, pol.rel_tol);
  const std::size_t n = spectrum.size();
  // next[i] = index of spectrum[i] / q, if present.
  std::vector<std::ptrdiff_t> next(n, -1);
  std::vector<bool> has_prev(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    const double target = spectrum[i] / q;
    std::ptrdiff_t best = -1;
    double best_dev = tol;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i || has_prev[j]) continue;
      const double dev = rel_dev(spectrum[j], target, pol.abs_tol);
      if (dev <= best_dev) {
        best_dev = dev;
        best = static_cast<std::ptrdiff_t>(j);
      }
    }
    if (best >= 0) {
      next[i] = best;
      has_prev[static_cast<std::size_t>(best)] = true;
    }
  }
  std::vector<std::vector<double>> chains;
  std::vector<bool> used(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    if (has_prev[i]) continue;
    std::vector<double> chain;
    for (std::ptrdiff_t k = static_cast<std::ptrdiff_t>(i); k >= 0 && !used[static_cast<std::size_t>(k)];
         k = next[static_cast<std::size_t>(k)]) {
      used[static_cast<std::size_t>(k)] = true;
      chain.push_back(spectrum[static_cast<std::size_t>(k)]);
    }
    chains.push_back(std::move(chain));
  }
  // Links that close a cycle leave elements without a chain head.
  for (std::size_t i = 0; i < n; ++i) {
    if (!used[i]) chains.push_back({spectrum[i]});
  }
  std::sort(chains.begin(), chains.end(),
            [](const auto& x, const auto& y) { return x.front() < y.front(); });
  return chains;
}

Decomposition decompose(const BandMatrix& a, const BandMatrix& b, double q, const TolerancePolicy& pol) {
  pol.validate();
  require_tridiagonal(a, "decompose");
  if (a.size() != b.size()) throw Error(ErrorKind::invalid_parameter, "decompose: size mismatch");
  const ResidualReport comm = q_commutator_residual(a, b, q, BandMatrix::identity(a.size()), pol);
  if (!comm.pass) {
    throw Error(ErrorKind::not_a_representation,
                "decompose: AB - qBA - I = " + std::to_string(comm.max_abs) + " exceeds tolerance");
  }
  const std::vector<double> spectrum = eigenvalues(a, pol);
  const auto chains = geometric_chains(spectrum, q, pol);

  const std::size_t n = a.size();
  const Dense ad = to_dense(a);
  const Dense at = transposed(ad);
  const Dense bd = to_dense(b);

  std::vector<double> lambdas;
  std::vector<std::size_t> chain_of;
  for (std::size_t c = 0; c < chains.size(); ++c) {
    for (double l : chains[c]) {
      lambdas.push_back(l);
      chain_of.push_back(c);
    }
  }
  std::vector<std::vector<double>> right(n), left(n);
  for (std::size_t i = 0; i < n; ++i) {
    right[i] = inverse_iteration(ad, lambdas[i]);
    left[i] = inverse_iteration(at, lambdas[i]);
  }

  // Btilde_ij = (w_i B v_j) / (w_i v_i): B in the eigenbasis of A.
  std::vector<double> wb(n);
  double largest = 0.0, off = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double norm = 0.0;
    for (std::size_t k = 0; k < n; ++k) norm += left[i][k] * right[i][k];
    if (norm == 0.0) {
      throw Error(ErrorKind::not_decomposable, "decompose: defective eigenvalue " + std::to_string(lambdas[i]));
    }
    for (std::size_t k = 0; k < n; ++k) {
      wb[k] = 0.0;
      for (std::size_t m = 0; m < n; ++m) wb[k] += left[i][m] * bd[m][k];
    }
    for (std::size_t j = 0; j < n; ++j) {
      double v = 0.0;
      for (std::size_t k = 0; k < n; ++k) v += wb[k] * right[j][k];
      v = std::abs(v / norm);
      largest = std::max(largest, v);
      if (chain_of[i] != chain_of[j]) off += v;
    }
  }

  Decomposition d;
  d.off_block_mass = largest > 0.0 ? off / largest : 0.0;
  d.tolerance = std::max(pol.rel_tol, kChainRelTol);
  if (!(d.off_block_mass <= d.tolerance)) {
    throw Error(ErrorKind::not_decomposable,
                "decompose: B mixes eigenvalue chains of A (off-block mass " +
                    std::to_string(d.off_block_mass) + ")");
  }
  for (const auto& c : chains) d.blocks.push_back({c, c.size()});
  return d;
}

}  // namespace qosc
