#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include "qosc/opmatrix.hpp"

namespace qosc {
namespace {

using cplx = std::complex<double>;

struct Tridiag {
  std::vector<double> diag;
  std::vector<double> coupling;  // coupling[k] = M(k, k-1) * M(k-1, k), coupling[0] = 0
};

Tridiag unpack(const BandMatrix& m) {
  Tridiag t;
  const std::size_t n = m.size();
  t.diag.resize(n);
  t.coupling.assign(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    t.diag[k] = m(k, k);
    if (k > 0) t.coupling[k] = m(k, k - 1) * m(k - 1, k);
  }
  return t;
}

// p(x) / p'(x) through the minor recurrence, rescaled to stay in range.
template <class S>
S newton_ratio(const Tridiag& t, S x) {
  S p_prev(0), p(1), d_prev(0), d(0);
  for (std::size_t k = 0; k < t.diag.size(); ++k) {
    const S shift = x - S(t.diag[k]);
    const S c(t.coupling[k]);
    const S p_next = shift * p - c * p_prev;
    const S d_next = p + shift * d - c * d_prev;
    p_prev = p;
    p = p_next;
    d_prev = d;
    d = d_next;
    const double mag = std::abs(p) + std::abs(d);
    if (mag > 1e150 || (mag < 1e-150 && mag > 0.0)) {
      const double s = 1.0 / mag;
      p *= s;
      p_prev *= s;
      d *= s;
      d_prev *= s;
    }
  }
  return p / d;
}

}  // namespace

std::vector<double> eigenvalues(const BandMatrix& m, const TolerancePolicy& pol) {
  require_tridiagonal(m, "eigenvalues");
  const Tridiag t = unpack(m);
  const std::size_t n = t.diag.size();
  if (n == 1) return {t.diag[0]};

  double center = 0.0;
  for (double v : t.diag) center += v;
  center /= static_cast<double>(n);
  double radius = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double r = std::abs(t.diag[i] - center);
    if (i > 0) r += std::abs(m(i, i - 1));
    if (i + 1 < n) r += std::abs(m(i, i + 1));
    radius = std::max(radius, r);
  }
  if (radius == 0.0) return std::vector<double>(n, center);

  std::vector<cplx> z(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n) + 0.7;
    z[k] = center + radius * std::polar(1.0, angle);
  }

  constexpr int kMaxIter = 2000;
  constexpr double eps = std::numeric_limits<double>::epsilon();
  // A root is frozen once its step is at rounding level of the spectral
  // scale, or once small steps stop shrinking (the evaluation noise floor of
  // strongly non-normal matrices). The real Newton polish below restores
  // relative accuracy where the noise allows.
  std::vector<bool> done(n, false);
  std::vector<double> last(n, std::numeric_limits<double>::infinity());
  bool converged = false;
  for (int iter = 0; iter < kMaxIter && !converged; ++iter) {
    converged = true;
    for (std::size_t k = 0; k < n; ++k) {
      if (done[k]) continue;
      const cplx w = newton_ratio(t, z[k]);
      if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) {
        done[k] = true;
        continue;
      }
      cplx s(0.0);
      for (std::size_t j = 0; j < n; ++j) {
        if (j != k) s += 1.0 / (z[k] - z[j]);
      }
      const cplx step = w / (1.0 - w * s);
      z[k] -= step;
      const double size = std::abs(step);
      const double scale = std::max(std::abs(z[k]), radius);
      const bool stalled = size <= 1e-6 * scale && size >= 0.9 * last[k];
      last[k] = size;
      if (size <= 16.0 * eps * scale || stalled) {
        done[k] = true;
      } else {
        converged = false;
      }
    }
  }
  if (!converged) throw Error(ErrorKind::numeric_failure, "eigenvalue iteration did not converge");

  std::vector<double> out;
  out.reserve(n);
  for (const cplx& root : z) {
    if (std::abs(root.imag()) > 1e-7 * std::max(1.0, std::abs(root))) {
      throw Error(ErrorKind::unsupported_spectrum, "complex eigenvalue pair detected");
    }
    double x = root.real();
    for (int polish = 0; polish < 4; ++polish) {
      const double step = newton_ratio(t, x);
      if (!std::isfinite(step) || std::abs(step) > 1e-6 * std::max(1.0, std::abs(x))) break;
      x -= step;
      if (std::abs(step) <= eps * std::abs(x)) break;
    }
    out.push_back(x);
  }
  std::sort(out.begin(), out.end());

  double trace = 0.0, sum = 0.0, mass = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    trace += t.diag[i];
    sum += out[i];
    mass += std::abs(out[i]);
  }
  if (std::abs(trace - sum) > std::max(pol.abs_tol, 1e-6 * mass)) {
    throw Error(ErrorKind::unsupported_spectrum, "eigenvalue sum does not reproduce the trace");
  }
  return out;
}

}  // namespace qosc
