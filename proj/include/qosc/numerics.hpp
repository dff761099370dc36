#pragma once

#include <cstddef>
#include <vector>

#include "qosc/error.hpp"

namespace qosc {

enum class ScaleMode { unit, operator_norm_product };

/// Comparison policy shared by every residual check.
///
/// The effective tolerance at a given scale is max(abs_tol, rel_tol * s)
/// with s = max(1, scale), or s = 1 when scale_mode is unit.
struct TolerancePolicy {
  double abs_tol = 1e-12;
  double rel_tol = 1e-9;
  ScaleMode scale_mode = ScaleMode::operator_norm_product;

  /// Throws invalid_parameter unless both tolerances are positive.
  void validate() const;

  double effective(double scale = 1.0) const;

  /// |a - b| <= rel_tol * max(|a|, |b|) + abs_tol
  bool close(double a, double b) const;
};

/// Relative threshold used for resonance (vanishing denominator) detection.
inline constexpr double kResonanceRelTol = 1e-10;

/// Largest admissible max(|q|^-N, |q|^N) for operators whose entries grow
/// geometrically with the basis index.
inline constexpr double kOverflowGuardLimit = 1e12;

/// base^exp by repeated squaring; negative exponents invert. Exact for
/// rational scalar types.
template <class T>
T ipow(const T& base, int exp) {
  if (exp < 0) {
    return T(1) / ipow(base, -exp);
  }
  T result(1);
  T factor = base;
  while (exp > 0) {
    if (exp & 1) result *= factor;
    exp >>= 1;
    if (exp > 0) factor *= factor;
  }
  return result;
}

/// (base * ratio^n) for n = 0..count-1, built by repeated multiplication so
/// that consecutive ratios are exact in exact arithmetic.
template <class T>
std::vector<T> geometric_seq(const T& base, const T& ratio, int count) {
  if (ratio == T(0)) {
    throw Error(ErrorKind::invalid_parameter, "geometric_seq: ratio must be nonzero");
  }
  if (count <= 0) {
    throw Error(ErrorKind::invalid_parameter, "geometric_seq: count must be positive");
  }
  std::vector<T> out;
  out.reserve(static_cast<std::size_t>(count));
  T value = base;
  for (int n = 0; n < count; ++n) {
    out.push_back(value);
    value *= ratio;
  }
  return out;
}

/// |1 - x| small relative to the two terms, for denominators of the form (1 - x).
bool near_one(double x, double rel = kResonanceRelTol);

/// Throws overflow_guard when max(|q|^-size, |q|^size) exceeds the limit.
void check_overflow_guard(double q, std::size_t size);

/// Rejects q in {0, 1, -1} and non-finite q.
void check_q(double q, const char* context);

}  // namespace qosc
