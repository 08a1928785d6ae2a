#pragma once

#include "asg/convex_set.hpp"

#include <doctest.h>

#include <initializer_list>

inline asg::Vec vec(std::initializer_list<double> xs) {
  asg::Vec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

inline double max_abs_diff(const asg::Vec& a, const asg::Vec& b) { return (a - b).cwiseAbs().maxCoeff(); }

#define CHECK_VEC_NEAR(a, b, tol) CHECK(max_abs_diff((a), (b)) <= (tol))
