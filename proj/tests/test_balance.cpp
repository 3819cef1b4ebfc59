#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "funk/balance.hpp"
#include "funk/errors.hpp"
#include "oracle_values.hpp"
#include "support.hpp"

using namespace funk;
using nlohmann::json;
using testing::rel_err;

namespace {

Vec vec2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

Vec vec3(double a, double b, double c) {
  Vec v(3);
  v << a, b, c;
  return v;
}

const SphereRule& rule2() {
  static const SphereRule r = build_rule(2, 256, kDefaultSphereSeed);
  return r;
}

const SphereRule& rule3() {
  static const SphereRule r = build_rule(3, 64, kDefaultSphereSeed);
  return r;
}

void check_newton_trace(const BalanceResult& br) {
  CHECK(br.converged);
  CHECK(br.iterations <= 15);
  CHECK(br.grad_norm <= 1e-9);
  CHECK(br.hessian_min_eigenvalue > 0.0);
  for (std::size_t i = 1; i < br.trace.size(); ++i) {
    CHECK(br.trace[i].area <= br.trace[i - 1].area);
  }
}

}  // namespace

TEST_CASE("Randers centers") {
  const Mat I = Mat::Identity(2, 2);
  CHECK(randers_center(I, vec2(0.0, 0.0)).norm() == 0.0);
  CHECK((randers_center(I, vec2(0.0, 0.3)) - vec2(0.0, -0.3 / 0.91)).norm() < 1e-15);
  CHECK((randers_center(I, vec2(0.6, 0.0)) - vec2(-0.9375, 0.0)).norm() < 1e-15);
  CHECK_THROWS_AS(randers_center(I, vec2(1.0, 0.0)), DomainError);
  CHECK_THROWS_AS(randers_center(I, vec3(0.1, 0.0, 0.0)), DomainError);
  // The Randers indicatrix is the ellipsoid centered there.
  Mat A(2, 2);
  A << 2.0, 0.4, 0.4, 1.0;
  const Vec b = vec2(0.3, -0.5);
  const Vec c = randers_center(A, b);
  const auto body = ConvexBody::randers(A, b);
  CHECK(rel_err(body.minkowski(c + vec2(1.0, 0.0) / body.translate(c).minkowski(vec2(1.0, 0.0))), 1.0) < 1e-12);
}

TEST_CASE("balancing points of symmetric and shifted bodies") {
  SUBCASE("centered ellipsoid") {
    const auto body = ConvexBody::ellipsoid_axes(vec3(2.0, 1.0, 0.5), Vec::Zero(3));
    BalanceOptions opts;
    opts.start = vec3(0.2, -0.1, 0.05);
    const BalanceResult br = balancing_point(body, rule3(), opts);
    check_newton_trace(br);
    CHECK(br.point.norm() <= 1e-8);
  }
  SUBCASE("shifted disk") {
    const Vec c = vec2(0.2, -0.1);
    const BalanceResult br = balancing_point(ConvexBody::ball(c), rule2());
    check_newton_trace(br);
    CHECK((br.point - c).norm() <= 1e-8);
  }
  SUBCASE("planar Randers body") {
    const Vec b = vec2(0.0, 0.3);
    const BalanceResult br =
        balancing_point(ConvexBody::randers(Mat::Identity(2, 2), b), rule2());
    check_newton_trace(br);
    CHECK((br.point - randers_center(Mat::Identity(2, 2), b)).norm() <= 1e-6);
    CHECK(br.beta_norm == doctest::Approx(2.0 * br.grad_norm));
    CHECK(br.hessian_eigenvalues.size() == 2);
  }
  SUBCASE("both routes give the same point") {
    const auto body = ConvexBody::radial2d(1.0, {0.1, 0.05}, {0.0, 0.03});
    BalanceOptions direct;
    direct.route = Route::direct;
    const BalanceResult a = balancing_point(body, rule2());
    const BalanceResult b = balancing_point(body, rule2(), direct);
    CHECK(a.converged);
    CHECK(b.converged);
    CHECK((a.point - b.point).norm() < 1e-8);
  }
}

TEST_CASE("translation equivariance") {
  const Vec t = vec2(0.15, -0.1);
  for (const auto& body : {ConvexBody::randers(Mat::Identity(2, 2), vec2(0.2, 0.3)),
                           ConvexBody::radial2d(1.0, {0.1, 0.05}, {0.0, 0.03})}) {
    const BalanceResult base = balancing_point(body, rule2());
    const BalanceResult moved = balancing_point(body.translate(-t), rule2());
    CHECK(base.converged);
    CHECK(moved.converged);
    CHECK((moved.point - (base.point + t)).norm() <= 1e-8);
  }
}

TEST_CASE("non-convergence and bad starts are reported") {
  const auto body = ConvexBody::randers(Mat::Identity(2, 2), vec2(0.0, 0.3));
  BalanceOptions opts;
  opts.max_iter = 1;
  const BalanceResult br = balancing_point(body, rule2(), opts);
  CHECK_FALSE(br.converged);
  CHECK(br.iterations == 1);
  CHECK_FALSE(br.message.empty());

  BalanceOptions outside;
  outside.start = vec2(0.0, 1.5);
  CHECK_THROWS_AS(balancing_point(body, rule2(), outside), InteriorViolation);
  BalanceOptions bad_tol;
  bad_tol.tol = 0.0;
  CHECK_THROWS_AS(balancing_point(body, rule2(), bad_tol), DomainError);
}

TEST_CASE("balance residual") {
  const auto ball = ConvexBody::ball(Vec::Zero(3));
  CHECK(balance_residual(ball, Vec::Zero(3), rule3()) < 1e-13);
  CHECK(rel_err(balance_residual(ball, vec3(0.0, 0.0, 0.5), rule3()), oracle::kBall3AreaSlope_s05) <
        1e-12);
  const auto randers = ConvexBody::randers(Mat::Identity(2, 2), vec2(0.0, 0.3));
  const BalanceResult br = balancing_point(randers, rule2());
  CHECK(balance_residual(randers, br.point, rule2()) <= 1e-9);
  CHECK_THROWS_AS(balance_residual(ball, vec3(0.0, 0.0, 1.0), rule3()), InteriorViolation);
}

TEST_CASE("affine expressions") {
  const Vec q = vec3(0.5, -2.0, 4.0);
  CHECK(evaluate_affine("1.5", q) == 1.5);
  CHECK(evaluate_affine("q1", q) == 0.5);
  CHECK(evaluate_affine("-q2", q) == 2.0);
  CHECK(evaluate_affine("2*q1 - 0.25", q) == 0.75);
  CHECK(evaluate_affine(" q3 * 0.5 + q1 - -1 ", q) == 3.5);
  CHECK(evaluate_affine("1e-1*q3", q) == doctest::Approx(0.4));
  for (const char* bad : {"", "q", "q4", "q0", "q1*q2", "2*3", "abc", "q1 +", "(q1)", "q1 q2"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(evaluate_affine(bad, q), ConfigError);
  }
}

TEST_CASE("field specification") {
  const json doc = json::parse(R"({
    "grid": [{"min": -0.2, "max": 0.2, "count": 3}, {"min": 0, "max": 1, "count": 2}],
    "body_template": {"dimension": 2, "kind": "ball", "center": ["q1", "0.1*q2"], "radius": 1}
  })");
  const FieldSpec spec = field_from_json(doc);
  CHECK(spec.size() == 6u);
  CHECK(spec.grid_dimension() == 2);
  CHECK(spec.grid_index(1) == std::vector<int>{0, 1});
  CHECK(spec.grid_index(4) == std::vector<int>{2, 0});
  CHECK((spec.grid_point(5) - vec2(0.2, 1.0)).norm() < 1e-15);
  const ConvexBody body = spec.body_at(vec2(0.2, 1.0));
  CHECK(body.minkowski(vec2(1.2, 0.1)) == doctest::Approx(1.0));

  for (const char* bad : {
           R"({"grid": [], "body_template": {"dimension": 2, "kind": "ball"}})",
           R"({"grid": [{"min": 0, "max": 1}], "body_template": {"dimension": 2, "kind": "ball"}})",
           R"({"grid": [{"min": 0, "max": 1, "count": 0}], "body_template": {"dimension": 2, "kind": "ball"}})",
           R"({"grid": [{"min": 0, "max": 1, "count": 2}]})",
           R"({"grid": [{"min": 0, "max": 1, "count": 2}], "body_template": {"dimension": 2, "kind": "ball"}, "extra": 1})",
           R"({"grid": [{"min": 0, "max": 1, "count": 2, "step": 1}], "body_template": {"dimension": 2, "kind": "ball"}})",
           R"({"grid": [{"min": 0, "max": 1, "count": 2}], "body_template": {"dimension": 2, "kind": "ball", "center": ["q2", 0]}})",
       }) {
    CAPTURE(bad);
    CHECK_THROWS_AS(field_from_json(json::parse(bad)), ConfigError);
  }
  CHECK_THROWS_AS(load_field("/nonexistent/field.json"), ConfigError);
}

TEST_CASE("ball Funk field") {
  // K_q = B - q, so the balancing vector is V(q) = -q.
  const json doc = json::parse(R"({
    "grid": [{"min": -0.4, "max": 0.4, "count": 5}, {"min": -0.4, "max": 0.4, "count": 5}],
    "body_template": {"dimension": 2, "kind": "ball", "center": ["-q1", "-q2"]}
  })");
  const FieldResult fr = balanced_field(field_from_json(doc), rule2());
  CHECK(fr.failures == 0);
  REQUIRE(fr.points.size() == 25u);
  for (std::size_t i = 0; i < fr.points.size(); ++i) {
    const FieldPoint& pt = fr.points[i];
    CHECK(pt.ok);
    CHECK((pt.V + pt.q).norm() <= 1e-6);
    CHECK(pt.residual <= 1e-8);
    CHECK((fr.jacobians[i] + Mat::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-3);
    // The balanced body is the unit disk at the origin.
    CHECK(fr.balanced_norm(i, vec2(0.6, -0.8)) == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("constant Randers field and warm starts") {
  const json doc = json::parse(R"({
    "grid": [{"min": 0, "max": 1, "count": 3}],
    "body_template": {"dimension": 2, "kind": "randers", "beta": [0, 0.3]}
  })");
  const FieldSpec spec = field_from_json(doc);
  FieldOptions cold;
  cold.warm_start = false;
  const FieldResult warm = balanced_field(spec, rule2());
  const FieldResult fresh = balanced_field(spec, rule2(), cold);
  const Vec want = vec2(0.0, -0.3 / 0.91);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK((warm.points[i].V - want).norm() <= 1e-6);
    CHECK((fresh.points[i].V - want).norm() <= 1e-6);
    CHECK(warm.jacobians[i].norm() < 1e-6);
  }
  // Later points start at the previous answer.
  CHECK(warm.points[1].iterations <= 1);
  CHECK(fresh.points[1].iterations >= 2);
}

TEST_CASE("failing field points are recorded and the pipeline continues") {
  const json doc = json::parse(R"({
    "grid": [{"min": 0, "max": 1.2, "count": 4}],
    "body_template": {"dimension": 2, "kind": "ball", "center": ["q1", 0]}
  })");
  const FieldResult fr = balanced_field(field_from_json(doc), rule2());
  CHECK(fr.failures == 1);
  CHECK(fr.points[0].ok);
  CHECK(fr.points[2].ok);
  CHECK_FALSE(fr.points[3].ok);
  CHECK_FALSE(fr.points[3].error.empty());
  CHECK(std::isnan(fr.points[3].V(0)));
  CHECK(std::isnan(fr.jacobians[3](0, 0)));
  CHECK(std::isnan(fr.jacobians[2](0, 0)));
  CHECK(fr.jacobians[1](0, 0) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK_THROWS_AS(fr.balanced_body(3), DomainError);
}
