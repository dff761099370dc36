#include "qosc/laurent_poly.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace qosc {

LaurentPoly::LaurentPoly(Coeffs coeffs) {
  for (const auto& [k, c] : coeffs) {
    if (c != 0.0) coeffs_.emplace(k, c);
  }
}

LaurentPoly LaurentPoly::monomial(int degree, double coeff) {
  LaurentPoly p;
  p.add_term(degree, coeff);
  return p;
}

double LaurentPoly::coeff(int degree) const {
  auto it = coeffs_.find(degree);
  return it == coeffs_.end() ? 0.0 : it->second;
}

int LaurentPoly::min_degree() const {
  if (is_zero()) throw Error(ErrorKind::invalid_parameter, "zero polynomial has no degree");
  return coeffs_.begin()->first;
}

int LaurentPoly::max_degree() const {
  if (is_zero()) throw Error(ErrorKind::invalid_parameter, "zero polynomial has no degree");
  return coeffs_.rbegin()->first;
}

double LaurentPoly::mass() const {
  double m = 0.0;
  for (const auto& [k, c] : coeffs_) m += std::abs(c);
  return m;
}

double LaurentPoly::mass_below(int degree) const {
  double m = 0.0;
  for (auto it = coeffs_.begin(); it != coeffs_.end() && it->first < degree; ++it) {
    m += std::abs(it->second);
  }
  return m;
}

LaurentPoly LaurentPoly::normalized(double threshold) const {
  LaurentPoly out;
  for (const auto& [k, c] : coeffs_) {
    if (std::abs(c) > threshold) out.coeffs_.emplace(k, c);
  }
  return out;
}

double LaurentPoly::eval(double x) const {
  if (is_zero()) return 0.0;
  if (x == 0.0) {
    if (min_degree() < 0) throw Error(ErrorKind::pole, "evaluation at x = 0 with negative degree");
    return coeff(0);
  }
  // Horner from the top degree down to the bottom one, then shift.
  const int lo = min_degree();
  const int hi = max_degree();
  double acc = 0.0;
  for (int k = hi; k >= lo; --k) acc = acc * x + coeff(k);
  return acc * ipow(x, lo);
}

void LaurentPoly::add_term(int degree, double c) {
  if (c == 0.0) return;
  auto [it, inserted] = coeffs_.try_emplace(degree, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0.0) coeffs_.erase(it);
  }
}

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& other) {
  for (const auto& [k, c] : other.coeffs_) add_term(k, c);
  return *this;
}

LaurentPoly& LaurentPoly::operator-=(const LaurentPoly& other) {
  for (const auto& [k, c] : other.coeffs_) add_term(k, -c);
  return *this;
}

LaurentPoly& LaurentPoly::operator*=(double s) {
  if (s == 0.0) {
    coeffs_.clear();
    return *this;
  }
  for (auto& [k, c] : coeffs_) c *= s;
  return *this;
}

LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
  LaurentPoly out;
  for (const auto& [ka, ca] : a.coeffs_) {
    for (const auto& [kb, cb] : b.coeffs_) out.add_term(ka + kb, ca * cb);
  }
  return out;
}

LaurentPoly laurent_scale_arg(const LaurentPoly& p, double q) {
  if (q == 0.0) throw Error(ErrorKind::invalid_parameter, "laurent_scale_arg: q must be nonzero");
  LaurentPoly::Coeffs out;
  for (const auto& [k, c] : p.coeffs()) out.emplace(k, c * ipow(q, k));
  return LaurentPoly(std::move(out));
}

LaurentPoly laurent_add(const LaurentPoly& a, const LaurentPoly& b, const TolerancePolicy& pol) {
  return (a + b).normalized(pol.abs_tol);
}

LaurentPoly laurent_mul(const LaurentPoly& a, const LaurentPoly& b, const TolerancePolicy& pol) {
  return (a * b).normalized(pol.abs_tol);
}

double laurent_eval(const LaurentPoly& p, double x) { return p.eval(x); }

double max_coeff_diff(const LaurentPoly& a, const LaurentPoly& b) {
  double worst = 0.0;
  for (const auto& [k, c] : a.coeffs()) worst = std::max(worst, std::abs(c - b.coeff(k)));
  for (const auto& [k, c] : b.coeffs()) worst = std::max(worst, std::abs(c - a.coeff(k)));
  return worst;
}

}  // namespace qosc
