#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qosc {

/// Failure categories raised by the library. The CLI maps parameter-type
/// kinds to exit status 2.
enum class ErrorKind {
  invalid_parameter,
  too_small,
  pole,
  resonance,
  reducible_representation,
  invalid_normalization,
  not_a_representation,
  numeric_failure,
  unsupported_spectrum,
  not_decomposable,
  not_reducible_to_monic,
  unsupported_family,
  spectrum_mismatch,
  out_of_range,
  overflow_guard,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// True for kinds that describe bad input rather than a failed check.
bool is_parameter_error(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace qosc
