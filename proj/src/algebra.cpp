#include "qosc/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qosc/tridiagonalization.hpp"

namespace qosc {

BigQJacobiConstants big_qjacobi_constants(const StructuredParams& p) {
  check_q(p.q, "big_qjacobi_constants");
  if (p.c1 == 0.0 || p.c3 == 0.0) throw Error(ErrorKind::invalid_parameter, "big_qjacobi_constants: c1 c3 must be nonzero");
  return big_qjacobi_constants(p.q, p.c1, p.c2, p.c3);
}

AWAlgebraConstants aw_algebra_constants(const StructuredParams& p, double mu) {
  check_q(p.q, "aw_algebra_constants");
  if (p.c3 == 0.0) throw Error(ErrorKind::invalid_parameter, "aw_algebra_constants: c3 must be nonzero");
  return aw_algebra_constants(p.q, p.c1, p.c2, p.c3, mu);
}

ResidualReport relation_residual(const BandMatrix& x, const BandMatrix& y, double q,
                                 std::span<const LinearTerm> terms, double constant, const TolerancePolicy& pol) {
  pol.validate();
  const std::size_t n = x.size();
  if (y.size() != n) throw Error(ErrorKind::invalid_parameter, "relation_residual: size mismatch");
  BandMatrix r = q_commutator(x, y, q);
  double scale = std::max(norm_inf(x) * norm_inf(y), std::abs(constant));
  for (const LinearTerm& t : terms) {
    if (t.op == nullptr || t.op->size() != n) {
      throw Error(ErrorKind::invalid_parameter, "relation_residual: linear term size mismatch");
    }
    r.axpy(-t.coeff, *t.op);
    scale = std::max(scale, std::abs(t.coeff) * norm_inf(*t.op));
  }
  r.axpy(-constant, BandMatrix::identity(n));
  const std::size_t rows = std::min(exact_product_rows(x, y), exact_product_rows(y, x));
  return residual_report(r, rows, scale, pol);
}

ResidualReport relation_residual_rowwise(const BandMatrix& x, const BandMatrix& y, double q,
                                           std::span<const LinearTerm> terms, double constant,
                                           const TolerancePolicy& pol) {
  pol.validate();
  const std::size_t n = x.size();
  if (y.size() != n) throw Error(ErrorKind::invalid_parameter, "relation_residual_rowwise: size mismatch");
  auto magnitude = [](BandMatrix m) {
    for (int k = -m.lower(); k <= m.upper(); ++k) {
      for (double& v : m.band(k)) v = std::abs(v);
    }
    return m;
  };
  BandMatrix r = q_commutator(x, y, q);
  const BandMatrix ax = magnitude(x), ay = magnitude(y);
  BandMatrix s = band_mul(ax, ay);
  s.axpy(std::abs(q), band_mul(ay, ax));
  for (const LinearTerm& t : terms) {
    if (t.op == nullptr || t.op->size() != n) {
      throw Error(ErrorKind::invalid_parameter, "relation_residual_rowwise: linear term size mismatch");
    }
    r.axpy(-t.coeff, *t.op);
    s.axpy(std::abs(t.coeff), magnitude(*t.op));
  }
  r.axpy(-constant, BandMatrix::identity(n));
  s.axpy(std::abs(constant), BandMatrix::identity(n));

  ResidualReport rep;
  rep.checked_rows = {0, std::min(exact_product_rows(x, y), exact_product_rows(y, x))};
  rep.tolerance = pol.rel_tol;
  for (std::size_t i = 0; i < rep.checked_rows.end; ++i) {
    const std::size_t lo = i >= static_cast<std::size_t>(r.lower()) ? i - r.lower() : 0;
    const std::size_t hi = std::min(n - 1, i + static_cast<std::size_t>(r.upper()));
    double row_scale = 0.0;
    for (std::size_t j = lo; j <= hi; ++j) row_scale += s(i, j);
    for (std::size_t j = lo; j <= hi; ++j) {
      const double res = std::abs(r(i, j));
      const double v = res <= pol.abs_tol ? 0.0 : res / std::max(1.0, row_scale);
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

BigQJacobiAlgebraReport big_qjacobi_algebra_residuals(const StructuredParams& p, std::size_t size,
                                                      const TolerancePolicy& pol) {
  if (size < 4) throw Error(ErrorKind::too_small, "big_qjacobi_algebra_residuals needs size >= 4");
  const BandMatrix a = big_q_jacobi(p, size).jacobi_matrix();
  const BandMatrix b = build_B_from_A(p, size);
  const BandMatrix z = build_Z(p, size).matrix();
  BigQJacobiAlgebraReport rep;
  rep.constants = big_qjacobi_constants(p);
  const auto& k = rep.constants;
  rep.oscillator = relation_residual(a, b, p.q, {}, 1.0, pol);
  const LinearTerm ta[] = {{k.gamma1, &a}};
  rep.bz = relation_residual(b, z, p.q, ta, k.delta1, pol);
  const LinearTerm tb[] = {{k.gamma2, &b}};
  rep.za = relation_residual(z, a, p.q, tb, k.delta2, pol);
  return rep;
}

const char* to_string(AWVariant v) noexcept { return v == AWVariant::ML ? "ML" : "LM"; }

BandMatrix aw_shifted_M(const StructuredParams& p, double mu, std::size_t size) {
  const BandMatrix l = pencil(p, {mu, 0.0}, size);
  const double omega0 = aw_algebra_constants(p, mu).omega0;
  // Z is diagonal, so (LZ - qZL)(i, j) = L(i, j) (z_j - q z_i).
  BandMatrix m(size, 1, 1);
  for (std::size_t i = 0; i < size; ++i) {
    for (std::size_t j = (i == 0 ? 0 : i - 1); j <= std::min(size - 1, i + 1); ++j) {
      const double dz = z_q_difference(p, static_cast<int>(i), static_cast<int>(j));
      m.ref(i, j) = l(i, j) * dz - (i == j ? omega0 : 0.0);
    }
  }
  return m;
}

AWAlgebraReport aw_algebra_residuals(const StructuredParams& p, double mu, std::size_t size,
                                     const TolerancePolicy& pol, AWVariant variant) {
  if (size < 5) throw Error(ErrorKind::too_small, "aw_algebra_residuals needs size >= 5");
  if (mu == 0.0 || !std::isfinite(mu)) throw Error(ErrorKind::invalid_parameter, "aw_algebra_residuals: mu must be nonzero");
  pol.validate();
  const double q = p.q;
  const BandMatrix l = pencil(p, {mu, 0.0}, size);
  const DiagonalOperator zd = build_Z(p, size);
  const BandMatrix z = zd.matrix();

  AWAlgebraReport rep;
  rep.requested = variant;
  rep.constants = aw_algebra_constants(p, mu);
  const auto& k = rep.constants;

  BandMatrix m = q_commutator(l, z, q);
  m.axpy(-k.omega0, BandMatrix::identity(size));

  const BandMatrix entrywise = aw_shifted_M(p, mu, size);
  rep.m_definition = residual_report(m - entrywise, size, norm_inf(l) * norm_inf(z), pol);

  // The band product loses |L| |Z| eps absolutely, far above |M| eps for
  // small q; the downstream relations use the entrywise form.
  const LinearTerm tl[] = {{k.sigma1, &l}};
  rep.zm = relation_residual(z, entrywise, q, tl, k.omega1, pol);
  const LinearTerm tz[] = {{k.sigma2, &z}};
  rep.ml = relation_residual(entrywise, l, q, tz, k.omega2, pol);
  rep.lm = relation_residual(l, entrywise, q, tz, k.omega2, pol);
  if (rep.ml.pass != rep.lm.pass) rep.passing = rep.ml.pass ? AWVariant::ML : AWVariant::LM;
  return rep;
}

LinearFit oscillator_z_fit(const BandMatrix& a, const BandMatrix& b, std::span<const double> z, double q) {
  if (z.size() != a.size()) throw Error(ErrorKind::invalid_parameter, "oscillator_z_fit: length mismatch");
  const BandMatrix r = q_commutator(a, b, q);
  const std::size_t rows = std::min(exact_product_rows(a, b), exact_product_rows(b, a));
  if (rows < 2) throw Error(ErrorKind::too_small, "oscillator_z_fit needs two exact rows");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < rows; ++i) {
    sx += z[i];
    sy += r(i, i);
    sxx += z[i] * z[i];
    sxy += z[i] * r(i, i);
  }
  const double nr = static_cast<double>(rows);
  const double det = nr * sxx - sx * sx;
  if (det == 0.0) throw Error(ErrorKind::numeric_failure, "oscillator_z_fit: degenerate z values");
  LinearFit f;
  f.slope = (nr * sxy - sx * sy) / det;
  f.intercept = (sy - f.slope * sx) / nr;
  return f;
}

}  // namespace qosc
