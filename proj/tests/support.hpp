#pragma once

#include "funk/random.hpp"
#include "funk/types.hpp"

#include <algorithm>
#include <cmath>

namespace testing {

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

inline double rel_err(const funk::Mat& got, const funk::Mat& want) {
  return (got - want).norm() / std::max(want.norm(), 1e-300);
}

inline funk::Vec random_vector(funk::Rng& rng, int n) {
  funk::Vec v(n);
  for (int i = 0; i < n; ++i) v(i) = rng.normal();
  return v;
}

inline funk::Vec random_unit(funk::Rng& rng, int n) {
  return random_vector(rng, n).normalized();
}

// Uniform point of the Euclidean ball of radius `radius`.
inline funk::Vec random_in_ball(funk::Rng& rng, int n, double radius) {
  return random_unit(rng, n) * radius * std::pow(rng.uniform(), 1.0 / n);
}

// Central second-order differences of a vector-valued map, column i = d/dx_i.
template <class F>
funk::Mat central_jacobian(F&& f, const funk::Vec& x, double h) {
  funk::Mat J;
  for (int i = 0; i < x.size(); ++i) {
    funk::Vec plus = x, minus = x;
    plus(i) += h;
    minus(i) -= h;
    const funk::Vec d = (f(plus) - f(minus)) / (2.0 * h);
    if (i == 0) J.resize(d.size(), x.size());
    J.col(i) = d;
  }
  return J;
}

}  // namespace testing
