#pragma once

#include "funk/bodies.hpp"
#include "funk/types.hpp"

namespace funk {

// Riemann-Finsler metric g = Hess(L^2 / 2) = L Hess L + dL (x) dL.
struct MetricSample {
  Vec direction;
  Mat g;
  Vec grad_L;
  double L = 0.0;
};

// Angular metric m = L Hess L, i.e. g - dL (x) dL; degenerate along the
// sample direction.
struct AngularSample {
  Mat m;
};

enum class CartanMode { analytic, finite_difference };

struct CartanTrace {
  Vec C;  // C_i = g^{jk} C_{ijk}
  CartanMode mode = CartanMode::analytic;
  // max_{i,j} |v^k C_{ijk}| scaled by the size of g.
  double euler_residual = 0.0;
};

// Builds g from a precomputed jet. Throws RegularityError if g is not
// numerically positive definite.
Mat metric_from_jet(const Jet& jet, const Vec& direction);

MetricSample metric_tensor(const ConvexBody& body, const Vec& v);
AngularSample angular_metric(const ConvexBody& body, const Vec& v);

// Lowered Cartan tensor C_{ijk} = 1/2 dg_ij / dy^k.
Tensor3 cartan_tensor(const ConvexBody& body, const Vec& v, CartanMode mode);

// Uses analytic third derivatives when the body has them. Finite
// differences are only used when `allow_finite_difference` is set or the
// mode is requested explicitly.
CartanTrace cartan_trace(const ConvexBody& body, const Vec& v,
                         bool allow_finite_difference = false);
CartanTrace cartan_trace(const ConvexBody& body, const Vec& v,
                         CartanMode mode);

// Density of the indicatrix measure with respect to the Euclidean sphere
// measure at a unit vector u: (1 / L(u))^n sqrt(det g(u)).
double volume_weight(const ConvexBody& body, const Vec& u);
double volume_weight_from_jet(const Jet& jet, const Vec& u);

}  // namespace funk
