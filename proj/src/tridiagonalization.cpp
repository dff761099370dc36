#include "qosc/tridiagonalization.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qosc {

namespace {

void require_structured(const StructuredParams& p, std::size_t size, const char* context) {
  if (size == 0) throw Error(ErrorKind::too_small, std::string(context) + ": size must be positive");
  validate(p, size);
}

// tau1 z_i + tau2 z_j for |i - j| = 1, grouped as c1 c2 q^k (..) + q^-k (..)
// so that each bracket is formed before the large and small terms meet.
double z_combination(const StructuredParams& p, const WCoeffs& w, int i, int j) {
  const double pc = p.c1 * p.c2;
  const double q = p.q;
  if (j == i + 1) {
    return pc * ipow(q, i + 1) * (w.tau1 + q * w.tau2) + ipow(q, -i - 1) * (q * w.tau1 + w.tau2);
  }
  return pc * ipow(q, i) * (q * w.tau1 + w.tau2) + ipow(q, -i) * (w.tau1 + q * w.tau2);
}

double rel_dev(double x, double y, double floor) {
  return std::abs(x - y) / std::max({std::abs(x), std::abs(y), floor});
}

}  // namespace

DiagonalOperator build_Z(const StructuredParams& p, std::size_t size) {
  check_q(p.q, "build_Z");
  DiagonalOperator z;
  z.z.reserve(size);
  for (std::size_t n = 0; n < size; ++n) {
    const int k = static_cast<int>(n);
    z.z.push_back(p.c1 * p.c2 * ipow(p.q, k + 1) + ipow(p.q, -k));
  }
  return z;
}

double z_q_difference(const StructuredParams& p, int i, int j) {
  if (i == j) return (1.0 - p.q) * (p.c1 * p.c2 * ipow(p.q, i + 1) + ipow(p.q, -i));
  if (std::abs(i - j) != 1) throw Error(ErrorKind::invalid_parameter, "z_q_difference: |i - j| must be <= 1");
  return z_combination(p, {0.0, -p.q, 1.0, 0.0}, i, j);
}

TridiagonalizationConstants tridiagonalization_constants(const StructuredParams& p) {
  check_q(p.q, "tridiagonalization_constants");
  if (p.c1 == 0.0 || p.c3 == 0.0) {
    throw Error(ErrorKind::invalid_parameter, "tridiagonalization_constants: c1 c3 must be nonzero");
  }
  const double q = p.q;
  const double c13 = p.c1 * p.c3;
  return {(p.c1 * (p.c2 + 1.0) + p.c3 * (p.c1 + 1.0)) / (c13 * (1.0 - q * q)),
          -1.0 / (c13 * q * (q + 1.0) * (1.0 - q) * (1.0 - q))};
}

BandMatrix build_B_from_A(const StructuredParams& p, std::size_t size) {
  const auto r = tridiagonalization_constants(p);
  return build_W(p, {r.r0, r.r1, -(p.q * r.r1), 0.0}, size);
}

BandMatrix build_B_from_A(const StructuredParams& p, const MonicRecurrence& a) {
  const auto r = tridiagonalization_constants(p);
  return build_W(p, {r.r0, r.r1, -(p.q * r.r1), 0.0}, a);
}

BandMatrix build_W(const StructuredParams& p, const WCoeffs& w, std::size_t size) {
  require_structured(p, size, "build_W");
  return build_W(p, w, big_q_jacobi(p, size));
}

BandMatrix build_W(const StructuredParams& p, const WCoeffs& w, const MonicRecurrence& a) {
  check_q(p.q, "build_W");
  const std::size_t size = a.size();
  if (size == 0) throw Error(ErrorKind::too_small, "build_W: empty recurrence");
  if (a.u.size() + 1 != size) throw Error(ErrorKind::invalid_parameter, "build_W: len(u) != len(b) - 1");
  check_overflow_guard(p.q, size);
  const DiagonalOperator z = build_Z(p, size);
  std::vector<double> sub(size - 1), diag(size), sup(size - 1);
  for (std::size_t n = 0; n < size; ++n) {
    const int k = static_cast<int>(n);
    diag[n] = ((w.tau1 + w.tau2) * z.z[n] + w.tau3) * a.b[n] + w.tau0;
    if (n + 1 < size) {
      sub[n] = z_combination(p, w, k + 1, k) + w.tau3;
      sup[n] = (z_combination(p, w, k, k + 1) + w.tau3) * a.u[n];
    }
  }
  return BandMatrix::tridiagonal(std::move(sub), std::move(diag), std::move(sup));
}

MonicReduction to_monic(const BandMatrix& w, const TolerancePolicy& pol) {
  require_tridiagonal(w, "to_monic");
  const std::size_t n = w.size();
  if (n == 0) throw Error(ErrorKind::too_small, "to_monic: empty matrix");
  MonicReduction out;
  out.rec.family = Family::custom;
  out.d.assign(n, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    out.rec.b.push_back(w(i, i));
    if (i + 1 == n) break;
    const double sub = w(i + 1, i);
    if (!(std::abs(sub) > pol.abs_tol)) {
      throw Error(ErrorKind::not_reducible_to_monic,
                  "to_monic: W(" + std::to_string(i + 1) + ", " + std::to_string(i) + ") vanishes");
    }
    out.d[i + 1] = out.d[i] * sub;
    out.rec.u.push_back(sub * w(i, i + 1));
  }
  return out;
}

AWEmbedding aw_parameter_map(const AWParams& p) {
  check_q(p.q, "aw_parameter_map");
  if (p.a1 == 0.0 || p.a2 == 0.0 || p.a3 == 0.0) {
    throw Error(ErrorKind::invalid_parameter, "aw_parameter_map: a1 a2 a3 must be nonzero");
  }
  const double q = p.q;
  AWEmbedding e;
  e.structured = {q, p.a1 * p.a2 / q, p.a3 * p.a4 / q, p.a1 * p.a3 / q};
  e.w.tau1 = 1.0 / (2.0 * p.a1 * p.a2 * p.a3 * (q - 1.0 / q));
  e.w.tau2 = -(q * e.w.tau1);
  e.w.tau3 = 1.0 / (2.0 * p.a1);
  e.w.tau0 = (q * (p.a2 + p.a3) + p.a2 * p.a3 * (p.a1 + p.a4)) / (2.0 * (q + 1.0) * p.a2 * p.a3);
  return e;
}

AWMatchReport aw_match(const AWParams& p, std::size_t size, const TolerancePolicy& pol) {
  pol.validate();
  const AWEmbedding e = aw_parameter_map(p);
  AWMatchReport rep;
  rep.askey_wilson = askey_wilson(p, size);
  rep.reduced = to_monic(build_W(e.structured, e.w, size), pol).rec;
  rep.reduced.family = Family::askey_wilson;
  rep.reduced.params = p;
  for (ResidualReport* r : {&rep.b, &rep.u}) {
    r->tolerance = pol.rel_tol;
    r->checked_rows = {0, size};
  }
  rep.u.checked_rows = {1, size};
  auto record = [](ResidualReport& r, double v, std::size_t n) {
    if (v > r.max_abs || std::isnan(v)) {
      r.max_abs = v;
      r.row = n;
      r.col = n;
    }
  };
  for (std::size_t n = 0; n < size; ++n) {
    const int k = static_cast<int>(n);
    const double D = askey_wilson_D(p.q, p.a1, p.a2, p.a3, p.a4, k);
    const double C = askey_wilson_C(p.q, p.a1, p.a2, p.a3, p.a4, k);
    const double scale = 0.5 * (std::abs(p.a1) + std::abs(1.0 / p.a1) + std::abs(D) + std::abs(C));
    record(rep.b, std::abs(rep.reduced.b[n] - rep.askey_wilson.b[n]) / scale, n);
    if (n + 1 < size) {
      const double ua = rep.askey_wilson.u[n];
      record(rep.u, std::abs(rep.reduced.u[n] - ua) / std::max(std::abs(ua), pol.abs_tol), n + 1);
    }
  }
  rep.b.pass = rep.b.max_abs <= rep.b.tolerance;
  rep.u.pass = rep.u.max_abs <= rep.u.tolerance;
  return rep;
}

BandMatrix pencil(const StructuredParams& p, const PencilParams& pp, std::size_t size) {
  const auto r = tridiagonalization_constants(p);
  const double t1 = pp.mu * r.r1;
  return build_W(p, {pp.mu * r.r0 + pp.lambda, t1, -(p.q * t1), 1.0}, size);
}

BandMatrix pencil_closed_form(const StructuredParams& p, const PencilParams& pp, std::size_t size) {
  require_structured(p, size, "pencil_closed_form");
  const auto r = tridiagonalization_constants(p);
  const MonicRecurrence a = big_q_jacobi(p, size);
  const auto z = build_Z(p, size + 1).z;
  const double q = p.q;
  const double m = pp.mu * r.r1;
  std::vector<double> sub(size - 1), diag(size), sup(size - 1);
  for (std::size_t n = 0; n < size; ++n) {
    diag[n] = r.r0 * pp.mu + pp.lambda + a.b[n] * (1.0 + (1.0 - q) * m * z[n]);
    if (n + 1 < size) {
      sub[n] = 1.0 + m * z[n + 1] - q * m * z[n];
      sup[n] = (1.0 + m * z[n] - q * m * z[n + 1]) * a.u[n];
    }
  }
  return BandMatrix::tridiagonal(std::move(sub), std::move(diag), std::move(sup));
}

AWPencil aw_pencil_embedding(const AWParams& p) {
  const AWEmbedding e = aw_parameter_map(p);
  const auto r = tridiagonalization_constants(e.structured);
  AWPencil out;
  out.structured = e.structured;
  out.tau3 = e.w.tau3;
  out.pencil.mu = e.w.tau1 / (e.w.tau3 * r.r1);
  out.pencil.lambda = e.w.tau0 / e.w.tau3 - out.pencil.mu * r.r0;
  return out;
}

LaurentPoly qdiff_Z_apply(const LaurentPoly& f, const StructuredParams& p) {
  check_q(p.q, "qdiff_Z_apply");
  const double q = p.q;
  const LaurentPoly E({{0, p.c1 * q * p.c2}, {-1, -p.c1 * q * (p.c2 + p.c3)}, {-2, p.c1 * q * p.c3}});
  const LaurentPoly F({{0, 1.0}, {-1, -(p.c1 + p.c3) * q}, {-2, p.c1 * p.c3 * q * q}});
  const LaurentPoly shift = E + F - LaurentPoly::constant(p.c1 * p.c2 * q + 1.0);
  return E * laurent_scale_arg(f, q) + F * laurent_scale_arg(f, 1.0 / q) - shift * f;
}

LaurentPoly qdiff_B_apply(const LaurentPoly& f, const StructuredParams& p) {
  check_q(p.q, "qdiff_B_apply");
  if (p.c1 == 0.0 || p.c3 == 0.0) throw Error(ErrorKind::invalid_parameter, "qdiff_B_apply: c1 c3 must be nonzero");
  const double q = p.q;
  const double k = 1.0 / (q * q * (q - 1.0) * p.c1 * p.c3);
  const double pole = 1.0 / (q - 1.0);
  // The x^-1 coefficients of the two terms are pole and -pole, so they cancel
  // exactly on constants.
  const LaurentPoly mult({{1, k}, {0, -k * q * (p.c1 + p.c3)}, {-1, pole}});
  return mult * laurent_scale_arg(f, 1.0 / q) + LaurentPoly::monomial(-1, -pole) * f;
}

ResidualReport qdiff_oscillator_check(const StructuredParams& p, int k_max, const TolerancePolicy& pol) {
  pol.validate();
  if (k_max < 0) throw Error(ErrorKind::invalid_parameter, "qdiff_oscillator_check: k_max must be >= 0");
  const LaurentPoly x = LaurentPoly::monomial(1);
  ResidualReport rep;
  rep.checked_rows = {0, static_cast<std::size_t>(k_max) + 1};
  rep.tolerance = pol.abs_tol;
  for (int k = 0; k <= k_max; ++k) {
    const LaurentPoly f = LaurentPoly::monomial(k);
    const LaurentPoly xbf = x * qdiff_B_apply(f, p);
    const LaurentPoly qbxf = p.q * qdiff_B_apply(x * f, p);
    const double mass = xbf.mass() + qbxf.mass() + f.mass();
    const LaurentPoly diff = xbf - qbxf - f;
    for (const auto& [deg, c] : diff.coeffs()) {
      const double v = std::abs(c) / mass;
      if (v > rep.max_abs || std::isnan(v)) {
        rep.max_abs = v;
        rep.row = static_cast<std::size_t>(k);
        rep.col = static_cast<std::size_t>(deg < 0 ? 0 : deg);
      }
    }
  }
  rep.pass = rep.max_abs <= rep.tolerance;
  return rep;
}

ResidualReport qdiff_Z_eigen_check(const StructuredParams& p, int n_max, const TolerancePolicy& pol) {
  pol.validate();
  if (n_max < 0) throw Error(ErrorKind::invalid_parameter, "qdiff_Z_eigen_check: n_max must be >= 0");
  const std::size_t count = static_cast<std::size_t>(n_max) + 1;
  const MonicRecurrence rec = big_q_jacobi(p, count);
  const auto z = build_Z(p, count).z;
  ResidualReport rep;
  rep.checked_rows = {0, count};
  rep.tolerance = pol.rel_tol;
  for (int n = 0; n <= n_max; ++n) {
    const LaurentPoly pn = monic_polynomial(rec, n);
    const double zn = z[static_cast<std::size_t>(n)];
    const LaurentPoly diff = qdiff_Z_apply(pn, p) - zn * pn;
    const double scale = std::abs(zn) * pn.mass();
    for (const auto& [deg, c] : diff.coeffs()) {
      const double v = std::abs(c) / scale;
      if (v > rep.max_abs || std::isnan(v)) {
        rep.max_abs = v;
        rep.row = static_cast<std::size_t>(n);
        rep.col = static_cast<std::size_t>(deg < 0 ? 0 : deg);
      }
    }
  }
  rep.pass = rep.max_abs <= rep.tolerance;
  return rep;
}

double b_side_kappa(const StructuredParams& p) {
  check_q(p.q, "b_side_kappa");
  if (p.c3 == 0.0) throw Error(ErrorKind::invalid_parameter, "b_side_kappa: c3 must be nonzero");
  return 1.0 / (p.c3 * p.q * (1.0 - p.q));
}

ResidualReport b_side_identification(const StructuredParams& p, std::size_t size, const TolerancePolicy& pol) {
  pol.validate();
  const MonicReduction bm = to_monic(build_B_from_A(p, size), pol);
  const MonicRecurrence swapped = big_q_jacobi({p.q, p.c2, p.c1, p.c3}, size);
  const double kappa = b_side_kappa(p);
  ResidualReport rep;
  rep.checked_rows = {0, size};
  rep.tolerance = pol.rel_tol;
  auto record = [&](double dev, std::size_t row, std::size_t col) {
    if (dev > rep.max_abs || std::isnan(dev)) {
      rep.max_abs = dev;
      rep.row = row;
      rep.col = col;
    }
  };
  for (std::size_t n = 0; n < size; ++n) {
    record(rel_dev(bm.rec.b[n], kappa * swapped.b[n], pol.abs_tol), n, n);
    if (n + 1 < size) record(rel_dev(bm.rec.u[n], kappa * kappa * swapped.u[n], pol.abs_tol), n, n + 1);
  }
  rep.pass = rep.max_abs <= rep.tolerance;
  return rep;
}

}  // namespace qosc
