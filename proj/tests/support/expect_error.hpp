#pragma once

#include <gtest/gtest.h>

#include "qosc/error.hpp"

namespace qosc::test {

/// Kind of the qosc::Error thrown by f; records a failure when nothing is thrown.
template <class F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected qosc::Error";
  return ErrorKind::numeric_failure;
}

}  // namespace qosc::test
