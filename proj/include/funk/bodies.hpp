#pragma once

#include "funk/types.hpp"

#include <json.hpp>

#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace funk {

class SphereRule;

enum class BodyKind { ball, ellipsoid, randers, radial2d, superellipsoid };

std::string_view to_string(BodyKind kind);

inline constexpr double kDefaultMargin = 1e-6;
inline constexpr int kMaxDimension = 4;

// Implementation interface behind ConvexBody. Each model evaluates the
// Minkowski functional L of a convex body containing the origin together
// with its derivatives; callers go through ConvexBody, which validates
// arguments.
class BodyModel {
 public:
  virtual ~BodyModel() = default;

  virtual int dimension() const = 0;
  virtual BodyKind kind() const = 0;
  virtual int derivative_order() const = 0;

  virtual double value(const Vec& v) const = 0;
  virtual Vec gradient(const Vec& v) const = 0;
  virtual Jet jet(const Vec& v) const = 0;
  // Only called when derivative_order() >= 3.
  virtual Tensor3 third(const Vec& v) const;

  // Model of K - c. Called after the interior check.
  virtual std::shared_ptr<const BodyModel> shifted(
      const std::shared_ptr<const BodyModel>& self, const Vec& c) const = 0;

  virtual nlohmann::json describe() const = 0;
};

// Smooth convex body K containing the origin, seen through its Minkowski
// functional L(v) = inf{t > 0 : v / t in K}. Immutable, cheap to copy.
class ConvexBody {
 public:
  explicit ConvexBody(std::shared_ptr<const BodyModel> model);

  // Euclidean ball of the given radius around `center`.
  static ConvexBody ball(const Vec& center, double radius = 1.0);
  // {x : (x - center)^T A (x - center) <= 1}
  static ConvexBody ellipsoid(const Mat& A, const Vec& center);
  static ConvexBody ellipsoid_axes(const Vec& semi_axes, const Vec& center);
  // L(v) = sqrt(v^T A v) + b.v with b^T A^{-1} b < 1.
  static ConvexBody randers(const Mat& A, const Vec& b);
  // Planar star body with boundary radius
  // rho(t) = a0 + sum_k a[k-1] cos(k t) + b[k-1] sin(k t).
  static ConvexBody radial2d(double a0, std::vector<double> a,
                             std::vector<double> b);
  // L(v) = (sum_i |v_i / a_i|^(2m))^(1/(2m)), exponent = 2m.
  static ConvexBody superellipsoid(const Vec& semi_axes, int exponent);

  int dimension() const { return model_->dimension(); }
  BodyKind kind() const { return model_->kind(); }
  int derivative_order() const { return model_->derivative_order(); }

  double minkowski(const Vec& v) const;
  Vec gradient(const Vec& v) const;
  Mat hessian(const Vec& v) const;
  Jet jet(const Vec& v) const;
  Tensor3 third(const Vec& v) const;

  // Body K - c, i.e. the origin moved to c. Requires L(c) <= 1 - margin.
  ConvexBody translate(const Vec& c, double margin = kDefaultMargin) const;

  // Throws InteriorViolation unless L(p) <= 1 - margin.
  void require_interior(const Vec& p, double margin = kDefaultMargin) const;
  bool is_interior(const Vec& p, double margin = kDefaultMargin) const;

  nlohmann::json describe() const { return model_->describe(); }
  const std::shared_ptr<const BodyModel>& model() const { return model_; }

 private:
  void check_argument(const Vec& v) const;

  std::shared_ptr<const BodyModel> model_;
};

struct RegularityReport {
  double min_metric_eigenvalue = 0.0;
  double max_metric_eigenvalue = 0.0;
  Vec worst_node;
  bool is_strongly_convex = false;
  // min / max eigenvalue over the scanned nodes; 0 when degenerate.
  double margin = 0.0;
};

// Scans the metric tensor over every node of `rule`.
RegularityReport validate(const ConvexBody& body, const SphereRule& rule);

// JSON body description (see README for the schema). Unknown keys are
// rejected with ConfigError.
ConvexBody body_from_json(const nlohmann::json& doc);
ConvexBody load_body(const std::string& path);

}  // namespace funk
