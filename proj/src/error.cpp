#include "qosc/error.hpp"

namespace qosc {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::invalid_parameter: return "invalid-parameter";
    case ErrorKind::too_small: return "too-small";
    case ErrorKind::pole: return "pole";
    case ErrorKind::resonance: return "resonance";
    case ErrorKind::reducible_representation: return "reducible-representation";
    case ErrorKind::invalid_normalization: return "invalid-normalization";
    case ErrorKind::not_a_representation: return "not-a-q-oscillator-representation";
    case ErrorKind::numeric_failure: return "numeric-failure";
    case ErrorKind::unsupported_spectrum: return "unsupported-spectrum";
    case ErrorKind::not_decomposable: return "not-decomposable-by-this-method";
    case ErrorKind::not_reducible_to_monic: return "not-reducible-to-monic";
    case ErrorKind::unsupported_family: return "unsupported-family";
    case ErrorKind::spectrum_mismatch: return "spectrum-mismatch";
    case ErrorKind::out_of_range: return "out-of-range";
    case ErrorKind::overflow_guard: return "overflow-guard";
  }
  return "unknown";
}

bool is_parameter_error(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::invalid_parameter:
    case ErrorKind::too_small:
    case ErrorKind::pole:
    case ErrorKind::resonance:
    case ErrorKind::reducible_representation:
    case ErrorKind::invalid_normalization:
    case ErrorKind::unsupported_family:
    case ErrorKind::out_of_range:
    case ErrorKind::overflow_guard:
      return true;
    default:
      return false;
  }
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

}  // namespace qosc
