#pragma once

#include "funk/bodies.hpp"
#include "funk/types.hpp"

#include <cstdint>
#include <functional>

namespace funk::reference {

// Independent oracles. Nothing here uses the sphere rules or the metric
// module, so they can check those code paths.

struct OracleConfig {
  std::uint64_t seed = 20131107;
  std::size_t sample_count = 1'000'000;
  double fd_step = 1e-3;

  // sample_count >= 1e4, fd_step in (0, 1e-2].
  void check() const;
};

// Area function of the Euclidean unit ball at a point with |p| = s.
// n = 3: (2 pi / s) ln((1 + s) / (1 - s)), 4 pi at s = 0.
// n = 2: int_0^{2 pi} (1 - s sin t)^{-1/2} dt by a self-converging 1-D
//        midpoint rule.
double ball_funk_area_closed(int dimension, double s);

// d r / d s for the n = 3 ball closed form.
double ball_funk_area_closed_derivative3(double s);

struct MonteCarloEstimate {
  double estimate = 0.0;
  double standard_error = 0.0;
  double acceptance_rate = 0.0;
  std::size_t accepted = 0;
};

// Estimates int_K f(x) sqrt(det g(x)) dx by rejection sampling in a
// bounding box of K. Samples are split across threads, so f is called
// concurrently.
MonteCarloEstimate montecarlo_body_integral(
    const ConvexBody& body, const std::function<double(const Vec&)>& f,
    const OracleConfig& cfg);

struct FdEstimate {
  double value = 0.0;
  double error = 0.0;  // disagreement between extrapolation levels
};

// Central differences (order 1 or 2) with two Richardson levels.
FdEstimate finite_difference(const std::function<double(double)>& f, double x,
                             int order, const OracleConfig& cfg);

Vec fd_gradient(const std::function<double(const Vec&)>& f, const Vec& x,
                const OracleConfig& cfg);
// Columns are derivatives along the coordinate axes.
Mat fd_jacobian(const std::function<Vec(const Vec&)>& f, const Vec& x,
                const OracleConfig& cfg);

}  // namespace funk::reference
