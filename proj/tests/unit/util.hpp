#pragma once

#include <doctest.h>

#include <string>

#include "descort/error.hpp"

namespace test {

// Code of the descort::Error raised by fn; fails the test when nothing is thrown.
template <class Fn>
descort::Errc error_code(Fn&& fn) {
  try {
    fn();
  } catch (const descort::Error& e) {
    return e.code();
  }
  FAIL("expected a descort::Error");
  return descort::Errc::Unsupported;
}

inline std::string data_file(const std::string& name) {
  return std::string(DESCORT_TEST_DATA) + "/" + name;
}

}  // namespace test
