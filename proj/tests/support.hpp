#pragma once

#include <gtest/gtest.h>

#include "kantgap/errors.hpp"
#include "kantgap/scalar.hpp"

namespace kantgap::testing {

inline Rational R(long p, long q = 1) { return Rational(p, q); }

/// Error code raised by f, or a test failure when nothing is thrown.
template <class F>
ErrorCode codeOf(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::InvalidArgument;
}

}  // namespace kantgap::testing
