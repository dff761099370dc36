#include "qosc/families.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace qosc {

namespace {

std::string idx(int n) { return std::to_string(n); }

// Denominator factor (1 - x) is treated as vanishing with the shared
// resonance tolerance.
void require_nonresonant(double x, ErrorKind kind, const std::string& what) {
  if (near_one(x)) throw Error(kind, what + " vanishes");
}

void fill_u(MonicRecurrence& rec, const std::vector<double>& D, const std::vector<double>& C) {
  rec.u.resize(rec.b.size() - 1);
  for (std::size_t n = 1; n < rec.b.size(); ++n) rec.u[n - 1] = D[n - 1] * C[n];
}

void require_count(std::size_t count, const char* context) {
  if (count == 0) throw Error(ErrorKind::too_small, std::string(context) + ": count must be positive");
}

}  // namespace

const char* to_string(Family f) noexcept {
  switch (f) {
    case Family::big_q_jacobi: return "big-q-jacobi";
    case Family::askey_wilson: return "askey-wilson";
    case Family::q_hahn: return "q-hahn";
    case Family::q_para_krawtchouk: return "q-para-krawtchouk";
    case Family::custom: return "custom";
  }
  return "custom";
}

BandMatrix MonicRecurrence::jacobi_matrix() const {
  if (b.empty()) throw Error(ErrorKind::too_small, "jacobi_matrix: empty recurrence");
  if (u.size() + 1 != b.size()) throw Error(ErrorKind::invalid_parameter, "jacobi_matrix: len(u) != len(b) - 1");
  return BandMatrix::tridiagonal(std::vector<double>(b.size() - 1, 1.0), b, u);
}

MonicRecurrence big_q_jacobi(const StructuredParams& p, std::size_t count) {
  require_count(count, "big_q_jacobi");
  validate(p, count);
  check_overflow_guard(p.q, count);
  const double q = p.q;
  const double pc = p.c1 * p.c2;
  MonicRecurrence rec;
  rec.family = Family::big_q_jacobi;
  rec.params = p;
  std::vector<double> D(count), C(count);
  for (std::size_t i = 0; i < count; ++i) {
    const int n = static_cast<int>(i);
    if (n > 0) require_nonresonant(pc * ipow(q, 2 * n), ErrorKind::resonance, "1 - c1 c2 q^" + idx(2 * n));
    D[i] = big_q_jacobi_D(q, p.c1, p.c2, p.c3, n);
    C[i] = big_q_jacobi_C(q, p.c1, p.c2, p.c3, n);
    rec.b.push_back(big_q_jacobi_one_minus_D(q, p.c1, p.c2, p.c3 * ipow(q, n + 1), n) - C[i]);
  }
  fill_u(rec, D, C);
  return rec;
}

MonicRecurrence askey_wilson(const AWParams& p, std::size_t count) {
  require_count(count, "askey_wilson");
  check_q(p.q, "askey_wilson");
  if (p.a1 == 0.0 || !std::isfinite(p.a1)) throw Error(ErrorKind::invalid_parameter, "askey_wilson: a1 must be nonzero");
  check_overflow_guard(p.q, count);
  const double g = p.g();
  MonicRecurrence rec;
  rec.family = Family::askey_wilson;
  rec.params = p;
  std::vector<double> D(count), C(count);
  for (std::size_t i = 0; i < count; ++i) {
    const int n = static_cast<int>(i);
    require_nonresonant(g * ipow(p.q, 2 * n - 1), ErrorKind::invalid_parameter, "1 - g q^" + idx(2 * n - 1));
    require_nonresonant(g * ipow(p.q, 2 * n), ErrorKind::invalid_parameter, "1 - g q^" + idx(2 * n));
    if (n > 0) {
      require_nonresonant(g * ipow(p.q, 2 * n - 2), ErrorKind::invalid_parameter, "1 - g q^" + idx(2 * n - 2));
    }
    D[i] = askey_wilson_D(p.q, p.a1, p.a2, p.a3, p.a4, n);
    C[i] = askey_wilson_C(p.q, p.a1, p.a2, p.a3, p.a4, n);
    rec.b.push_back(0.5 * (p.a1 + 1.0 / p.a1 - D[i] - C[i]));
  }
  rec.u.resize(count - 1);
  for (std::size_t n = 1; n < count; ++n) rec.u[n - 1] = 0.25 * D[n - 1] * C[n];
  return rec;
}

MonicRecurrence q_hahn(const QHahnParams& p) {
  check_q(p.q, "q_hahn");
  if (p.N < 1) throw Error(ErrorKind::too_small, "q_hahn: N must be at least 1");
  if (p.c1 == 0.0) throw Error(ErrorKind::invalid_parameter, "q_hahn: c1 must be nonzero");
  const std::size_t count = static_cast<std::size_t>(p.N) + 1;
  check_overflow_guard(p.q, count);
  const double pc = p.c1 * p.c2;
  for (int n = 0; n <= p.N; ++n) {
    for (int k : {2 * n, 2 * n + 1, 2 * n + 2}) {
      if (k == 0) continue;
      require_nonresonant(pc * ipow(p.q, k), ErrorKind::resonance, "1 - c1 c2 q^" + idx(k));
    }
  }
  MonicRecurrence rec;
  rec.family = Family::q_hahn;
  rec.params = p;
  std::vector<double> D(count), C(count);
  for (int n = 0; n <= p.N; ++n) {
    const std::size_t i = static_cast<std::size_t>(n);
    D[i] = q_hahn_D(p.q, p.c1, p.c2, p.N, n);
    C[i] = q_hahn_C(p.q, p.c1, p.c2, p.N, n);
    rec.b.push_back(big_q_jacobi_one_minus_D(p.q, p.c1, p.c2, ipow(p.q, n - p.N), n) - C[i]);
  }
  fill_u(rec, D, C);
  rec.next_u = D.back() * q_hahn_C(p.q, p.c1, p.c2, p.N, p.N + 1);
  return rec;
}

MonicRecurrence q_para_krawtchouk(const QParaParams& p) {
  check_q(p.q, "q_para_krawtchouk");
  if (p.N < 1 || p.N % 2 == 0) throw Error(ErrorKind::invalid_parameter, "q_para_krawtchouk: N must be odd and positive");
  if (p.c3 == 0.0 || !std::isfinite(p.c3)) throw Error(ErrorKind::invalid_parameter, "q_para_krawtchouk: c3 must be nonzero");
  const std::size_t count = static_cast<std::size_t>(p.N) + 1;
  check_overflow_guard(p.q, count);
  for (int n = 0; n <= p.N; ++n) {
    require_nonresonant(ipow(p.q, 2 * n - p.N), ErrorKind::invalid_parameter, "1 - q^" + idx(2 * n - p.N));
    require_nonresonant(-ipow(p.q, n - (p.N - 1) / 2), ErrorKind::invalid_parameter, "1 + q^" + idx(n - (p.N - 1) / 2));
    require_nonresonant(-ipow(p.q, n - (p.N + 1) / 2), ErrorKind::invalid_parameter, "1 + q^" + idx(n - (p.N + 1) / 2));
  }
  MonicRecurrence rec;
  rec.family = Family::q_para_krawtchouk;
  rec.params = p;
  std::vector<double> D(count), C(count);
  for (int n = 0; n <= p.N; ++n) {
    const std::size_t i = static_cast<std::size_t>(n);
    D[i] = q_para_D(p.q, p.c3, p.N, n);
    C[i] = q_para_C(p.q, p.c3, p.N, n);
    rec.b.push_back(1.0 - D[i] - C[i]);
  }
  fill_u(rec, D, C);
  rec.next_u = D.back() * q_para_C(p.q, p.c3, p.N, p.N + 1);
  return rec;
}

StructuredParams structured_params(const QHahnParams& p) {
  return {p.q, p.c1, p.c2, ipow(p.q, -p.N - 1)};
}

StructuredParams structured_params(const QParaParams& p) {
  // q^(-(N+1)/2) is an integer power for odd N.
  const double c = ipow(p.q, -(p.N + 1) / 2);
  return {p.q, c, c, p.c3};
}

double eval_monic(const MonicRecurrence& rec, int n, double x) {
  if (n < 0 || static_cast<std::size_t>(n) > rec.size()) {
    throw Error(ErrorKind::out_of_range, "eval_monic: degree " + idx(n) + " outside 0.." + std::to_string(rec.size()));
  }
  double prev = 0.0;
  double cur = 1.0;
  for (int k = 0; k < n; ++k) {
    const std::size_t i = static_cast<std::size_t>(k);
    const double next = (x - rec.b[i]) * cur - (k > 0 ? rec.u[i - 1] * prev : 0.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

LaurentPoly monic_polynomial(const MonicRecurrence& rec, int n) {
  if (n < 0 || static_cast<std::size_t>(n) > rec.size()) {
    throw Error(ErrorKind::out_of_range, "monic_polynomial: degree " + idx(n) + " outside 0.." + std::to_string(rec.size()));
  }
  const LaurentPoly x = LaurentPoly::monomial(1);
  LaurentPoly prev;
  LaurentPoly cur = LaurentPoly::constant(1.0);
  for (int k = 0; k < n; ++k) {
    const std::size_t i = static_cast<std::size_t>(k);
    LaurentPoly next = x * cur - rec.b[i] * cur;
    if (k > 0) next -= rec.u[i - 1] * prev;
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

SpectrumLattice claimed_spectrum(const MonicRecurrence& rec) {
  SpectrumLattice lat;
  if (const auto* h = std::get_if<QHahnParams>(&rec.params); h && rec.family == Family::q_hahn) {
    lat.points = geometric_seq(1.0, 1.0 / h->q, h->N + 1);
    lat.kind = LatticeKind::single_exponential;
  } else if (const auto* k = std::get_if<QParaParams>(&rec.params); k && rec.family == Family::q_para_krawtchouk) {
    const int half = (k->N + 1) / 2;
    lat.points = geometric_seq(1.0, 1.0 / k->q, half);
    const auto low = geometric_seq(k->c3 * k->q, k->q, half);
    lat.points.insert(lat.points.end(), low.begin(), low.end());
    lat.kind = LatticeKind::bi_exponential;
  } else {
    throw Error(ErrorKind::unsupported_family,
                std::string("claimed_spectrum: no lattice for family ") + to_string(rec.family));
  }
  std::sort(lat.points.begin(), lat.points.end());
  return lat;
}

std::vector<std::size_t> pair_spectrum(std::span<const double> eigen, std::span<const double> lattice) {
  const std::size_t n = lattice.size();
  if (eigen.size() != n) {
    throw Error(ErrorKind::spectrum_mismatch, "pair_spectrum: " + std::to_string(n) + " lattice points against " +
                                                  std::to_string(eigen.size()) + " eigenvalues");
  }
  std::vector<std::size_t> pairing(n);
  std::vector<bool> taken(n, false);
  for (std::size_t s = 0; s < n; ++s) {
    std::size_t best = 0;
    double best_dev = std::numeric_limits<double>::infinity();
    for (std::size_t e = 0; e < n; ++e) {
      const double dev = std::abs(eigen[e] - lattice[s]) / std::max(1.0, std::abs(lattice[s]));
      if (dev < best_dev) {
        best_dev = dev;
        best = e;
      }
    }
    if (taken[best]) {
      throw Error(ErrorKind::spectrum_mismatch,
                  "pair_spectrum: lattice points share the eigenvalue " + std::to_string(eigen[best]));
    }
    taken[best] = true;
    pairing[s] = best;
  }
  return pairing;
}

std::vector<double> scaled_char_poly_residuals(const MonicRecurrence& rec, std::span<const double> lattice) {
  const BandMatrix J = rec.jacobi_matrix();
  const std::size_t n = lattice.size();
  std::vector<double> out(n);
  for (std::size_t s = 0; s < n; ++s) {
    double gaps = 1.0;
    for (std::size_t t = 0; t < n; ++t) {
      if (t != s) gaps *= std::abs(lattice[s] - lattice[t]);
    }
    const double value = std::abs(char_poly_eval(J, lattice[s]));
    out[s] = gaps > 0.0 ? value / gaps : std::numeric_limits<double>::infinity();
  }
  return out;
}

ResidualReport verify_spectrum(const MonicRecurrence& rec, const SpectrumLattice& lat, const TolerancePolicy& pol) {
  pol.validate();
  const std::size_t n = rec.size();
  if (lat.points.size() != n) {
    throw Error(ErrorKind::spectrum_mismatch, "verify_spectrum: lattice has " + std::to_string(lat.points.size()) +
                                                  " points, matrix has size " + std::to_string(n));
  }
  ResidualReport rep;
  rep.checked_rows = {0, n};
  double span = 0.0;
  for (double x : lat.points) span = std::max(span, std::abs(x));
  rep.scale = std::max(1.0, span);
  rep.tolerance = pol.effective(span);

  auto record = [&](double v, std::size_t s) {
    if (v > rep.max_abs || std::isnan(v)) {
      rep.max_abs = v;
      rep.row = s;
      rep.col = s;
    }
  };
  const auto scaled = scaled_char_poly_residuals(rec, lat.points);
  for (std::size_t s = 0; s < n; ++s) record(scaled[s], s);

  const std::vector<double> eig = eigenvalues(rec.jacobi_matrix(), pol);
  const auto pairing = pair_spectrum(eig, lat.points);
  for (std::size_t s = 0; s < n; ++s) record(std::abs(eig[pairing[s]] - lat.points[s]), s);
  rep.pass = rep.max_abs <= rep.tolerance;
  return rep;
}

}  // namespace qosc
