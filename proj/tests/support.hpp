#pragma once

#include <doctest.h>

#include <functional>
#include <initializer_list>

#include "hessdamp/error.hpp"
#include "hessdamp/point.hpp"

namespace test {

inline hessdamp::Point pt(std::initializer_list<double> v) {
  hessdamp::Point x(static_cast<hessdamp::Index>(v.size()));
  hessdamp::Index i = 0;
  for (double c : v) x[i++] = c;
  return x;
}

// Code of the hessdamp::Error raised by fn; fails the test if none is raised.
inline hessdamp::ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const hessdamp::Error& e) {
    return e.code();
  }
  FAIL("expected a hessdamp::Error");
  return hessdamp::ErrorCode::kInvalidArgument;
}

}  // namespace test
