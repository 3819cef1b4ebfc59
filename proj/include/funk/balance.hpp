#pragma once

#include "funk/bodies.hpp"
#include "funk/funkarea.hpp"
#include "funk/quadrature.hpp"
#include "funk/types.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace funk {

struct BalanceOptions {
  double tol = 1e-9;  // on the Euclidean norm of grad r
  int max_iter = 100;
  double margin = kDefaultMargin;
  Route route = Route::projected;
  // Initial guess; the body origin when empty.
  std::optional<Vec> start;
};

struct IterationRecord {
  Vec point;
  double area = 0.0;
  double grad_norm = 0.0;
  double step_length = 0.0;  // fraction of the Newton step taken
  int backtracks = 0;
  bool gradient_step = false;
};

struct BalanceResult {
  Vec point;
  int iterations = 0;
  double area = 0.0;
  double grad_norm = 0.0;
  double beta_norm = 0.0;
  double hessian_min_eigenvalue = 0.0;
  Vec hessian_eigenvalues;
  bool converged = false;
  std::string message;
  std::vector<IterationRecord> trace;
};

// Minimizes the area function by damped Newton with exact gradient and
// Hessian. Non-convergence is reported through `converged`/`message`.
BalanceResult balancing_point(const ConvexBody& body, const SphereRule& rule,
                              const BalanceOptions& options = {});

// Center of a Randers indicatrix: -A^{-1} b / (1 - b^T A^{-1} b).
Vec randers_center(const Mat& A, const Vec& b);

// Euclidean norm of beta_p; zero exactly when K - p is balanced.
double balance_residual(const ConvexBody& body, const Vec& p,
                        const SphereRule& rule, Route route = Route::direct);

struct GridAxis {
  double min = 0.0;
  double max = 0.0;
  int count = 1;

  double at(int i) const;
};

// Affine expression in grid coordinates q1, q2, ...:
//   expr := term (('+' | '-') term)*
//   term := number | coord | number '*' coord | coord '*' number
// with optional leading sign on each term.
double evaluate_affine(std::string_view expression, const Vec& q);

// A family of bodies sampled on a tensor grid. Numeric entries of the body
// template may be replaced by affine expression strings.
class FieldSpec {
 public:
  FieldSpec(std::vector<GridAxis> axes, nlohmann::json body_template);

  int grid_dimension() const { return static_cast<int>(axes_.size()); }
  const std::vector<GridAxis>& axes() const { return axes_; }
  std::size_t size() const;
  // Row-major: the last axis varies fastest.
  std::vector<int> grid_index(std::size_t flat) const;
  Vec grid_point(std::size_t flat) const;
  ConvexBody body_at(const Vec& q) const;
  const nlohmann::json& body_template() const { return template_; }

 private:
  std::vector<GridAxis> axes_;
  nlohmann::json template_;
};

FieldSpec field_from_json(const nlohmann::json& doc);
FieldSpec load_field(const std::string& path);

struct FieldPoint {
  std::vector<int> grid_index;
  Vec q;
  Vec V;  // balancing vector; NaN when the point failed
  double residual = 0.0;
  int iterations = 0;
  bool ok = false;
  std::string error;
  std::optional<ConvexBody> body;
};

struct FieldOptions {
  BalanceOptions balance;
  bool warm_start = true;
};

struct FieldResult {
  std::vector<FieldPoint> points;
  // dV/dq by finite differences over the grid (central inside, one-sided at
  // the edges); NaN entries where a neighbour failed.
  std::vector<Mat> jacobians;
  int failures = 0;

  // Indicatrix body of the balanced structure at point i: K_q - V_q.
  ConvexBody balanced_body(std::size_t i) const;
  // F_V(v) at point i.
  double balanced_norm(std::size_t i, const Vec& v) const;
};

FieldResult balanced_field(const FieldSpec& spec, const SphereRule& rule,
                           const FieldOptions& options = {});

}  // namespace funk
