#pragma once

#include "funk/bodies.hpp"
#include "funk/quadrature.hpp"
#include "funk/types.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace funk {

// A body K together with an interior base point p. The Funk functional at
// p is L_p, defined by L(p + v / L_p(v)) = 1, i.e. the functional of K - p.
class FunkContext {
 public:
  FunkContext(ConvexBody body, Vec base_point, double margin = kDefaultMargin);

  const ConvexBody& body() const { return body_; }
  const Vec& base_point() const { return base_point_; }
  const ConvexBody& translated() const { return translated_; }
  double margin() const { return margin_; }
  int dimension() const { return body_.dimension(); }

 private:
  ConvexBody body_;
  Vec base_point_;
  ConvexBody translated_;
  double margin_;
};

// How integrals over the translated indicatrix dK_p are evaluated.
//   projected: integrate over dK and pull back through the central
//              projection rho(v_p) = p + v / L_p(v), whose Jacobian is the
//              conformal factor to the power -(n-1)/2.
//   direct:    integrate over dK_p using the translated body itself.
enum class Route { projected, direct };

double funk_norm(const FunkContext& ctx, const Vec& v);
// dF/dy^i = (dL/du^i)(rho) / (1 - p^k (dL/du^k)(rho)).
Vec funk_gradient(const FunkContext& ctx, const Vec& v);
// 1 - p^k (dL/du^k)(rho(v_p)); lies in (1 - L(p), 1 + L(-p)).
double conformal_factor(const FunkContext& ctx, const Vec& v);
// rho(v_p) = p + v / L_p(v), a point of dK.
Vec central_projection(const FunkContext& ctx, const Vec& v);

// Data available at one quadrature node of an indicatrix integral.
struct FunkNode {
  Vec grad_F;    // fiber gradient of F at the node (zero-homogeneous)
  Mat metric;    // Riemann-Finsler metric of F; empty unless requested
  double density = 0.0;  // transfer density (the rule weight is applied later)
};

// Integrates `width` zero-homogeneous quantities over dK_p at once.
std::vector<double> integrate_indicatrix(
    const FunkContext& ctx, const SphereRule& rule, Route route,
    std::size_t width, bool need_metric,
    const std::function<void(const FunkNode&, std::span<double>)>& eval);

// Area of the indicatrix dK_p, i.e. the area function r(p).
double area(const FunkContext& ctx, const SphereRule& rule,
            Route method = Route::projected);

// c_0 = 1, c_m = prod_{j<m} ((n - 1) + 2j) / 2.
double cm_coefficient(int dimension, int order);

using MultiIndex = std::vector<int>;

inline constexpr int kMaxDerivativeOrder = 8;
inline constexpr int kMaxTaylorOrder = 16;

int multi_index_order(const MultiIndex& alpha);
// alpha_1! ... alpha_n! in integer arithmetic.
std::uint64_t multi_index_factorial(const MultiIndex& alpha);
// All multi-indices of length n with |alpha| <= max_order, graded
// lexicographic order.
std::vector<MultiIndex> multi_indices(int dimension, int max_order);

// Partial derivative d^alpha r(p) = c_|alpha| int_{dK_p} prod (dF/dy^k)^alpha_k.
double area_derivative(const FunkContext& ctx, const SphereRule& rule,
                       const MultiIndex& alpha, Route route = Route::direct);

Vec area_gradient(const FunkContext& ctx, const SphereRule& rule,
                  Route route = Route::direct);
Mat area_hessian(const FunkContext& ctx, const SphereRule& rule,
                 Route route = Route::direct);

struct AreaJet {
  double area = 0.0;
  Vec gradient;
  Mat hessian;
};

// r, dr and d^2 r from a single pass over the rule.
AreaJet area_jet(const FunkContext& ctx, const SphereRule& rule,
                 Route route = Route::projected);

inline constexpr double kTaylorGuard = 1e-3;

// Truncated multivariate series of r around `center`.
class TaylorModel {
 public:
  TaylorModel(FunkContext center_context, int order,
              std::vector<MultiIndex> indices, std::vector<double> coefficients,
              double guard = kTaylorGuard);

  const Vec& center() const { return context_.base_point(); }
  int order() const { return order_; }
  int dimension() const { return context_.dimension(); }
  const std::vector<MultiIndex>& indices() const { return indices_; }
  // coefficient(alpha) = d^alpha r(center) / alpha!
  const std::vector<double>& coefficients() const { return coefficients_; }
  double coefficient(const MultiIndex& alpha) const;
  double guard() const { return guard_; }

  // L_c(q) < 1 - guard and L_c(-q) < 1 - guard for q = p - center.
  bool in_domain(const Vec& p) const;
  // Partial sum over |alpha| <= max_order (defaults to the full order).
  double evaluate(const Vec& p, int max_order = -1) const;

 private:
  FunkContext context_;
  int order_;
  std::vector<MultiIndex> indices_;
  std::vector<double> coefficients_;
  double guard_;
};

TaylorModel taylor_build(const ConvexBody& body, const Vec& center, int order,
                         const SphereRule& rule, Route route = Route::direct);
// Throws DomainError outside the guard region.
double taylor_eval(const TaylorModel& model, const Vec& p);

struct AveragedMetrics {
  Mat gamma1;  // int g
  Mat gamma2;  // int m
  Mat gamma3;  // int dF (x) dF
  double area = 0.0;
  Vec beta;    // beta_i = int dF/dy^i
};

AveragedMetrics averaged_metrics(const FunkContext& ctx, const SphereRule& rule,
                                 Route route = Route::direct);

enum class AveragedKind { F1, F3 };

// v -> sqrt(Gamma(v, v)) + beta(v) / area with Gamma = gamma_k / area.
class RandersFunctional {
 public:
  RandersFunctional(Mat gamma, Vec linear);
  double operator()(const Vec& v) const;
  const Mat& quadratic() const { return gamma_; }
  const Vec& linear() const { return linear_; }

 private:
  Mat gamma_;
  Vec linear_;
};

RandersFunctional associated_randers(const AveragedMetrics& averages,
                                     AveragedKind which);
RandersFunctional associated_randers(const FunkContext& ctx,
                                     const SphereRule& rule,
                                     AveragedKind which,
                                     Route route = Route::direct);

}  // namespace funk
