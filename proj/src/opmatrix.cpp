#include "qosc/opmatrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qosc {

double norm_inf(const BandMatrix& m) {
  const std::size_t n = m.size();
  double best = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    const std::size_t lo = i >= static_cast<std::size_t>(m.lower()) ? i - m.lower() : 0;
    const std::size_t hi = std::min(n - 1, i + static_cast<std::size_t>(m.upper()));
    for (std::size_t j = lo; j <= hi; ++j) row += std::abs(m(i, j));
    best = std::max(best, row);
  }
  return best;
}

ResidualReport residual_report(const BandMatrix& r, std::size_t rows, double scale,
                               const TolerancePolicy& pol) {
  ResidualReport rep;
  rep.checked_rows = {0, std::min(rows, r.size())};
  rep.scale = pol.scale_mode == ScaleMode::unit ? 1.0 : std::max(1.0, scale);
  rep.tolerance = pol.effective(scale);
  const std::size_t n = r.size();
  for (std::size_t i = 0; i < rep.checked_rows.end; ++i) {
    const std::size_t lo = i >= static_cast<std::size_t>(r.lower()) ? i - r.lower() : 0;
    const std::size_t hi = std::min(n - 1, i + static_cast<std::size_t>(r.upper()));
    for (std::size_t j = lo; j <= hi; ++j) {
      const double v = std::abs(r(i, j));
      if (v > rep.max_abs || std::isnan(v)) {
        rep.max_abs = v;
        rep.row = i;
        rep.col = j;
      }
    }
  }
  rep.pass = rep.max_abs <= rep.tolerance;
  return rep;
}

ResidualReport q_commutator_residual(const BandMatrix& a, const BandMatrix& b, double q,
                                     const BandMatrix& rhs, const TolerancePolicy& pol) {
  if (a.size() != b.size() || a.size() != rhs.size()) {
    throw Error(ErrorKind::invalid_parameter, "q_commutator_residual: size mismatch");
  }
  if (a.size() < 3) throw Error(ErrorKind::too_small, "q_commutator_residual needs size >= 3");
  BandMatrix r = q_commutator(a, b, q);
  r -= rhs;
  const std::size_t rows = std::min(exact_product_rows(a, b), exact_product_rows(b, a));
  return residual_report(r, rows, norm_inf(a) * norm_inf(b), pol);
}

ResidualReport q_commutator_ulp(const BandMatrix& a, const BandMatrix& b, double q, const BandMatrix& rhs,
                                double max_ulp) {
  if (a.size() != b.size() || a.size() != rhs.size()) {
    throw Error(ErrorKind::invalid_parameter, "q_commutator_ulp: size mismatch");
  }
  const BandMatrix ab = band_mul(a, b);
  BandMatrix qba = band_mul(b, a);
  qba *= q;
  const std::size_t n = a.size();
  const std::size_t rows = std::min(exact_product_rows(a, b), exact_product_rows(b, a));
  const int lo = std::max({ab.lower(), qba.lower(), rhs.lower()});
  const int hi = std::max({ab.upper(), qba.upper(), rhs.upper()});
  ResidualReport rep;
  rep.checked_rows = {0, rows};
  rep.tolerance = max_ulp;
  for (std::size_t i = 0; i < rows; ++i) {
    const std::size_t jlo = i >= static_cast<std::size_t>(lo) ? i - static_cast<std::size_t>(lo) : 0;
    const std::size_t jhi = std::min(n - 1, i + static_cast<std::size_t>(hi));
    for (std::size_t j = jlo; j <= jhi; ++j) {
      const double x = ab(i, j), y = qba(i, j), z = rhs(i, j);
      const double r = (x - y) - z;
      const double big = std::max({std::abs(x), std::abs(y), std::abs(z)});
      if (big == 0.0) continue;
      const double ulp = std::nextafter(big, std::numeric_limits<double>::infinity()) - big;
      const double v = std::abs(r) / ulp;
      if (v > rep.max_abs || std::isnan(v)) {
        rep.max_abs = v;
        rep.row = i;
        rep.col = j;
      }
    }
  }
  rep.pass = rep.max_abs <= rep.tolerance;
  return rep;
}

BandMatrix diag_similarity(const BandMatrix& m, std::span<const double> d) {
  if (d.size() != m.size()) throw Error(ErrorKind::invalid_parameter, "diag_similarity: length mismatch");
  for (double v : d) {
    if (v == 0.0) throw Error(ErrorKind::invalid_parameter, "diag_similarity: zero diagonal entry");
  }
  BandMatrix out = m;
  for (int k = -m.lower(); k <= m.upper(); ++k) {
    auto band = out.band(k);
    for (std::size_t e = 0; e < band.size(); ++e) {
      const std::size_t i = k >= 0 ? e : e - k;
      const std::size_t j = k >= 0 ? e + k : e;
      band[e] *= d[j] / d[i];
    }
  }
  return out;
}

void require_tridiagonal(const BandMatrix& m, const char* context) {
  if (m.lower() > 1 || m.upper() > 1) {
    throw Error(ErrorKind::invalid_parameter, std::string(context) + ": matrix must be tridiagonal");
  }
}

double char_poly_eval(const BandMatrix& m, double x) {
  require_tridiagonal(m, "char_poly_eval");
  double prev = 0.0;
  double cur = 1.0;
  for (std::size_t k = 0; k < m.size(); ++k) {
    const double coupling = k > 0 ? m(k, k - 1) * m(k - 1, k) : 0.0;
    const double next = (x - m(k, k)) * cur - coupling * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

}  // namespace qosc
