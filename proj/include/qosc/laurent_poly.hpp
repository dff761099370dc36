#pragma once

#include <map>

#include "qosc/numerics.hpp"

namespace qosc {

/**
 * Finite-support Laurent polynomial sum_k c_k x^k with k possibly negative.
 *
 * Exact zeros are never stored. The ring operators keep every nonzero
 * coefficient; laurent_add / laurent_mul additionally drop coefficients at or
 * below the policy's abs_tol.
 */
class LaurentPoly {
 public:
  using Coeffs = std::map<int, double>;

  LaurentPoly() = default;
  explicit LaurentPoly(Coeffs coeffs);

  static LaurentPoly monomial(int degree, double coeff = 1.0);
  static LaurentPoly constant(double c) { return monomial(0, c); }

  const Coeffs& coeffs() const noexcept { return coeffs_; }
  double coeff(int degree) const;
  bool is_zero() const noexcept { return coeffs_.empty(); }

  /// Both throw invalid_parameter on the zero polynomial.
  int min_degree() const;
  int max_degree() const;

  /// Sum of |c_k|.
  double mass() const;

  /// Coefficient mass strictly below the given degree.
  double mass_below(int degree) const;

  LaurentPoly normalized(double threshold) const;

  /// Throws pole when x == 0 and a negative degree is present.
  double eval(double x) const;

  LaurentPoly& operator+=(const LaurentPoly& other);
  LaurentPoly& operator-=(const LaurentPoly& other);
  LaurentPoly& operator*=(double s);

  friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
  friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
  friend LaurentPoly operator*(LaurentPoly a, double s) { return a *= s; }
  friend LaurentPoly operator*(double s, LaurentPoly a) { return a *= s; }
  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b);

  friend bool operator==(const LaurentPoly&, const LaurentPoly&) = default;

 private:
  void add_term(int degree, double c);

  Coeffs coeffs_;
};

/// p(x) -> p(qx): the coefficient of degree k is multiplied by q^k.
LaurentPoly laurent_scale_arg(const LaurentPoly& p, double q);

LaurentPoly laurent_add(const LaurentPoly& a, const LaurentPoly& b,
                        const TolerancePolicy& pol = {});
LaurentPoly laurent_mul(const LaurentPoly& a, const LaurentPoly& b,
                        const TolerancePolicy& pol = {});
double laurent_eval(const LaurentPoly& p, double x);

/// Largest |coefficient difference| over the union of supports.
double max_coeff_diff(const LaurentPoly& a, const LaurentPoly& b);

}  // namespace qosc
