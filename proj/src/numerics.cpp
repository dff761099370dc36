#include "qosc/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qosc {

void TolerancePolicy::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) {
    throw Error(ErrorKind::invalid_parameter, "tolerances must be positive");
  }
}

double TolerancePolicy::effective(double scale) const {
  const double s = scale_mode == ScaleMode::unit ? 1.0 : std::max(1.0, scale);
  return std::max(abs_tol, rel_tol * s);
}

bool TolerancePolicy::close(double a, double b) const {
  return std::abs(a - b) <= rel_tol * std::max(std::abs(a), std::abs(b)) + abs_tol;
}

bool near_one(double x, double rel) {
  return std::abs(1.0 - x) <= rel * (1.0 + std::abs(x));
}

void check_overflow_guard(double q, std::size_t size) {
  const double aq = std::abs(q);
  const double n = static_cast<double>(size);
  const double growth = std::max(std::pow(aq, -n), std::pow(aq, n));
  if (!(growth <= kOverflowGuardLimit)) {
    throw Error(ErrorKind::overflow_guard,
                "size " + std::to_string(size) + " at q = " + std::to_string(q) +
                    " exceeds the overflow guard max(|q|^-N, |q|^N) <= 1e12");
  }
}

void check_q(double q, const char* context) {
  if (!std::isfinite(q) || q == 0.0 || q == 1.0 || q == -1.0) {
    throw Error(ErrorKind::invalid_parameter,
                std::string(context) + ": q must be finite and not in {0, 1, -1}");
  }
}

}  // namespace qosc
