#pragma once

#include "funk/bodies.hpp"
#include "funk/types.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace funk {

// Neumaier compensated accumulator.
class CompensatedSum {
 public:
  void add(double x);
  double value() const { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

// Nodes and weights on the Euclidean unit sphere S^{n-1}.
class SphereRule {
 public:
  SphereRule(int dimension, std::vector<Vec> nodes,
             std::vector<double> weights, int resolution, int exact_degree,
             bool monte_carlo);

  int dimension() const { return dimension_; }
  std::size_t size() const { return nodes_.size(); }
  const std::vector<Vec>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }
  int resolution() const { return resolution_; }
  // Highest total degree of polynomials integrated exactly; -1 for Monte
  // Carlo rules.
  int exact_degree() const { return exact_degree_; }
  bool monte_carlo() const { return monte_carlo_; }

 private:
  int dimension_;
  std::vector<Vec> nodes_;
  std::vector<double> weights_;
  int resolution_;
  int exact_degree_;
  bool monte_carlo_;
};

inline constexpr int kDefaultResolution2d = 256;
inline constexpr int kDefaultResolution3d = 64;
inline constexpr int kDefaultSamples4d = 200000;
inline constexpr std::uint64_t kDefaultSphereSeed = 0x5eed5eedULL;

int default_resolution(int dimension);

// n = 2: periodic trapezoid with `resolution` equispaced angles.
// n = 3: Gauss-Legendre in cos(theta) (resolution points) x trapezoid in
//        phi (2 * resolution points).
// n = 4: `resolution` seeded Monte Carlo samples with equal weights.
SphereRule build_rule(int dimension, int resolution,
                      std::uint64_t seed = kDefaultSphereSeed);

// Euclidean area of S^{n-1}.
double sphere_area(int dimension);

// Gauss-Legendre nodes/weights on [-1, 1].
void gauss_legendre(int count, std::vector<double>& nodes,
                    std::vector<double>& weights);

// Integrates `width` functions at once over the sphere rule: `eval` fills
// out[0..width) at each node; results are summed in node order with
// compensation.
std::vector<double> integrate_sphere(
    const SphereRule& rule, std::size_t width,
    const std::function<void(const Vec& node, std::span<double> out)>& eval);

using ZeroHomogeneousField = std::function<double(const Vec&)>;

struct IntegralEstimate {
  double value = 0.0;
  // Zero for deterministic rules.
  double standard_error = 0.0;
};

// Integral of f over the indicatrix dK with respect to its induced volume
// form, transferred to the Euclidean sphere.
double indicatrix_integral(const ConvexBody& body, const ZeroHomogeneousField& f,
                           const SphereRule& rule);
IntegralEstimate indicatrix_integral_estimate(const ConvexBody& body,
                                              const ZeroHomogeneousField& f,
                                              const SphereRule& rule);

// Integral of f over the indicatrix body K: indicatrix_integral / n.
double body_integral(const ConvexBody& body, const ZeroHomogeneousField& f,
                     const SphereRule& rule);

}  // namespace funk
