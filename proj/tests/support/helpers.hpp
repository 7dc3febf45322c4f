#pragma once

#include <initializer_list>

#include <doctest.h>

#include "revtp/error.hpp"
#include "revtp/transport.hpp"

namespace testing {

inline revtp::Vector vec(std::initializer_list<double> values) {
  revtp::Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index k = 0;
  for (double x : values) v[k++] = x;
  return v;
}

inline revtp::Matrix mat(std::initializer_list<std::initializer_list<double>> rows) {
  revtp::Matrix m(static_cast<Eigen::Index>(rows.size()),
                  static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& row : rows) {
    Eigen::Index j = 0;
    for (double x : row) m(i, j++) = x;
    ++i;
  }
  return m;
}

inline revtp::Dms dms(std::initializer_list<double> a, std::initializer_list<double> b) {
  return revtp::make_dms(vec(a), vec(b));
}

inline double max_diff(const revtp::Vector& a, const revtp::Vector& b) {
  REQUIRE(a.size() == b.size());
  return (a - b).cwiseAbs().maxCoeff();
}

// Runs fn and returns the ErrorKind it throws; fails the test if it does not.
template <class Fn>
revtp::ErrorKind error_of(Fn&& fn) {
  try {
    fn();
  } catch (const revtp::Error& e) {
    return e.kind();
  }
  FAIL("expected revtp::Error");
  return revtp::ErrorKind::kParse;
}

}  // namespace testing
