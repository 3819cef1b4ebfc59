#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "funk/bodies.hpp"
#include "funk/errors.hpp"
#include "funk/quadrature.hpp"
#include "support.hpp"

#include <numbers>

using namespace funk;
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

std::vector<ConvexBody> smooth_bodies() {
  Mat A(3, 3);
  A << 2.0, 0.3, 0.1, 0.3, 1.0, -0.2, 0.1, -0.2, 0.7;
  return {
      ConvexBody::ball(Vec::Zero(3)),
      ConvexBody::ball(vec2(0.2, -0.1), 1.5),
      ConvexBody::ellipsoid(A, vec3(0.1, 0.2, -0.3)),
      ConvexBody::ellipsoid_axes(vec3(2.0, 1.0, 0.5), Vec::Zero(3)),
      ConvexBody::randers(Mat::Identity(2, 2), vec2(0.0, 0.3)),
      ConvexBody::randers(A, vec3(0.2, -0.1, 0.3)),
      ConvexBody::radial2d(1.0, {0.0, 0.1}, {0.0, 0.0}),
      ConvexBody::radial2d(1.0, {0.05, 0.02}, {0.03, 0.0}),
  };
}

}  // namespace

TEST_CASE("ball and ellipsoid functional values") {
  const auto ball = ConvexBody::ball(Vec::Zero(3));
  CHECK(ball.minkowski(vec3(3, 4, 0)) == doctest::Approx(5.0));

  const auto e = ConvexBody::ellipsoid_axes(vec2(2.0, 1.0), Vec::Zero(2));
  CHECK(e.minkowski(vec2(2.0, 0.0)) == doctest::Approx(1.0));
  CHECK(e.minkowski(vec2(0.0, 3.0)) == doctest::Approx(3.0));

  // Shifted ball: the boundary points c + u have L = 1.
  const Vec c = vec2(0.2, -0.1);
  const auto shifted = ConvexBody::ball(c, 1.5);
  Rng rng(7);
  for (int k = 0; k < 20; ++k) {
    const Vec u = testing::random_unit(rng, 2);
    CHECK(shifted.minkowski(c + 1.5 * u) == doctest::Approx(1.0).epsilon(1e-13));
  }
}

TEST_CASE("positive homogeneity and Euler identities") {
  Rng rng(11);
  for (const auto& body : smooth_bodies()) {
    const int n = body.dimension();
    for (int k = 0; k < 10; ++k) {
      const Vec v = testing::random_vector(rng, n);
      const double t = 0.1 + 3.0 * rng.uniform();
      const Jet j = body.jet(v);
      CHECK(rel_err(body.minkowski(t * v), t * j.value) < 1e-12);
      // dL is 0-homogeneous, Hess L is (-1)-homogeneous.
      CHECK((body.gradient(t * v) - j.gradient).norm() < 1e-11 * j.gradient.norm());
      CHECK(rel_err(body.hessian(t * v), j.hessian / t) < 1e-10);
      // Euler: v.dL = L and Hess L v = 0.
      CHECK(rel_err(v.dot(j.gradient), j.value) < 1e-12);
      CHECK((j.hessian * v).norm() < 1e-10 * j.hessian.norm() * v.norm());
      CHECK((j.hessian - j.hessian.transpose()).norm() < 1e-12 * j.hessian.norm());
    }
  }
}

TEST_CASE("ellipsoid gradient matches central differences") {
  Mat A(3, 3);
  A << 2.0, 0.3, 0.1, 0.3, 1.0, -0.2, 0.1, -0.2, 0.7;
  const auto body = ConvexBody::ellipsoid(A, Vec::Zero(3));
  Rng rng(3);
  for (int k = 0; k < 20; ++k) {
    const Vec v = testing::random_vector(rng, 3);
    const Vec exact = A * v / std::sqrt(v.dot(A * v));
    CHECK((body.gradient(v) - exact).norm() < 1e-13 * exact.norm());
    const double h = 1e-6 * v.norm();
    const Vec fd = testing::central_jacobian(
                       [&](const Vec& y) { return Vec::Constant(1, body.minkowski(y)); }, v, h)
                       .row(0)
                       .transpose();
    CHECK((fd - exact).norm() < 1e-7 * exact.norm());
  }
}

TEST_CASE("hessians and third derivatives match finite differences") {
  Rng rng(5);
  for (const auto& body : smooth_bodies()) {
    const int n = body.dimension();
    for (int k = 0; k < 5; ++k) {
      const Vec v = testing::random_unit(rng, n);
      const double h = 1e-5;
      const Mat fd_hess =
          testing::central_jacobian([&](const Vec& y) { return body.gradient(y); }, v, h);
      CHECK(rel_err(body.hessian(v), fd_hess) < 1e-7);
      if (body.derivative_order() >= 3) {
        const Tensor3 t = body.third(v);
        for (int i = 0; i < n; ++i) {
          Vec e = Vec::Zero(n);
          e(i) = 1.0;
          const Mat fd = (body.hessian(v + h * e) - body.hessian(v - h * e)) / (2.0 * h);
          CHECK(rel_err(t[i], fd) < 1e-6);
        }
      }
    }
  }
}

TEST_CASE("superellipsoid derivatives") {
  const auto body = ConvexBody::superellipsoid(vec3(1.0, 2.0, 0.5), 4);
  CHECK(body.derivative_order() == 2);
  CHECK(body.minkowski(vec3(1.0, 0.0, 0.0)) == doctest::Approx(1.0));
  CHECK(body.minkowski(vec3(1.0, 2.0, 0.0)) == doctest::Approx(std::pow(2.0, 0.25)));
  Rng rng(9);
  for (int k = 0; k < 10; ++k) {
    const Vec v = testing::random_unit(rng, 3);
    const Mat fd =
        testing::central_jacobian([&](const Vec& y) { return body.gradient(y); }, v, 1e-5);
    CHECK(rel_err(body.hessian(v), fd) < 1e-6);
  }
  CHECK_THROWS_AS(body.third(vec3(1, 1, 1)), DomainError);
  CHECK_THROWS_AS(ConvexBody::superellipsoid(vec2(1, 1), 3), DomainError);
}

TEST_CASE("translation of the unit disk gives the Randers closed form") {
  // L_p(v) = (sqrt(|v|^2 (1 - |p|^2) + <v,p>^2) + <v,p>) / (1 - |p|^2).
  const auto disk = ConvexBody::ball(Vec::Zero(2));
  Rng rng(13);
  for (double s : {0.0, 0.3, 0.5, 0.9}) {
    const Vec p = vec2(s, 0.0);
    const auto moved = disk.translate(p);
    for (int k = 0; k < 10; ++k) {
      const Vec v = testing::random_vector(rng, 2);
      const double q = 1.0 - p.squaredNorm();
      const double want = (std::sqrt(v.squaredNorm() * q + std::pow(v.dot(p), 2)) + v.dot(p)) / q;
      CHECK(rel_err(moved.minkowski(v), want) < 1e-10);
    }
  }
}

TEST_CASE("generic translation agrees with the boundary equation") {
  // L(p + v / L_p(v)) = 1, and translating twice adds the offsets.
  const auto body = ConvexBody::radial2d(1.0, {0.05, 0.1}, {0.02, 0.0});
  const Vec p = vec2(0.2, -0.15);
  const auto moved = body.translate(p);
  Rng rng(17);
  for (int k = 0; k < 20; ++k) {
    const Vec v = testing::random_vector(rng, 2);
    CHECK(body.minkowski(p + v / moved.minkowski(v)) == doctest::Approx(1.0).epsilon(1e-12));
  }
  const Vec q = vec2(-0.1, 0.05);
  const auto twice = moved.translate(q);
  const auto once = body.translate(p + q);
  for (int k = 0; k < 10; ++k) {
    const Vec v = testing::random_vector(rng, 2);
    CHECK(rel_err(twice.minkowski(v), once.minkowski(v)) < 1e-12);
  }
}

TEST_CASE("translated derivatives match finite differences") {
  const auto super = ConvexBody::superellipsoid(vec2(1.0, 0.8), 4);
  const auto radial = ConvexBody::radial2d(1.0, {0.0, 0.1}, {0.0, 0.0});
  const auto ell = ConvexBody::ellipsoid_axes(vec3(2.0, 1.0, 0.5), Vec::Zero(3));
  Rng rng(19);
  for (const auto& [body, p] : std::vector<std::pair<ConvexBody, Vec>>{
           {super, vec2(0.3, 0.2)}, {radial, vec2(-0.4, 0.3)}, {ell, vec3(0.5, -0.2, 0.1)}}) {
    const auto moved = body.translate(p);
    for (int k = 0; k < 5; ++k) {
      Vec v = testing::random_unit(rng, body.dimension());
      // Stay off the flat points of the superellipse.
      if (body.kind() == BodyKind::superellipsoid) v = (v.array() + 0.1).matrix().normalized();
      const Mat fd_grad = testing::central_jacobian(
          [&](const Vec& y) { return Vec::Constant(1, moved.minkowski(y)); }, v, 1e-6);
      CHECK((moved.gradient(v) - fd_grad.row(0).transpose()).norm() <
            1e-7 * moved.gradient(v).norm());
      const Mat fd_hess =
          testing::central_jacobian([&](const Vec& y) { return moved.gradient(y); }, v, 1e-5);
      CHECK(rel_err(moved.hessian(v), fd_hess) < 1e-6);
    }
  }
}

TEST_CASE("interior checks") {
  const auto ball = ConvexBody::ball(Vec::Zero(3));
  CHECK(ball.is_interior(vec3(0, 0, 0.5)));
  CHECK_FALSE(ball.is_interior(vec3(0, 0, 1.0)));
  CHECK_FALSE(ball.is_interior(vec3(0, 0, 1.0 - 1e-7)));
  CHECK(ball.is_interior(vec3(0, 0, 1.0 - 1e-7), 0.0));
  CHECK_THROWS_AS(ball.translate(vec3(0, 0, 1.2)), InteriorViolation);
  CHECK_THROWS_AS(ball.require_interior(vec2(0, 0)), DomainError);
  CHECK_THROWS_AS(ball.minkowski(Vec::Zero(3)), DomainError);
  CHECK_THROWS_AS(ConvexBody::ball(vec2(1.5, 0.0)), InteriorViolation);
  CHECK_THROWS_AS(ConvexBody::randers(Mat::Identity(2, 2), vec2(1.0, 0.0)), DomainError);
}

TEST_CASE("regularity scan") {
  const auto rule = build_rule(2, 256, kDefaultSphereSeed);
  const auto star = ConvexBody::radial2d(1.0, {0.0, 0.0, 0.5}, {0.0, 0.0, 0.0});
  CHECK_FALSE(validate(star, rule).is_strongly_convex);

  const auto randers = ConvexBody::randers(Mat::Identity(2, 2), vec2(0.0, 0.3));
  const auto report = validate(randers, rule);
  CHECK(report.is_strongly_convex);
  CHECK(report.min_metric_eigenvalue > 0.0);
  CHECK(report.margin > 0.0);
  CHECK(report.margin <= 1.0);

  const auto fourier = ConvexBody::radial2d(1.0, {0.0, 0.1}, {0.0, 0.0});
  CHECK(validate(fourier, rule).is_strongly_convex);

  // Exponent 4 flattens the boundary curvature at the axes.
  const auto square = ConvexBody::superellipsoid(vec2(1.0, 1.0), 4);
  const auto sq = validate(square, rule);
  CHECK_FALSE(sq.is_strongly_convex);
  CHECK(sq.min_metric_eigenvalue == 0.0);
}

TEST_CASE("body JSON schema") {
  using nlohmann::json;
  const auto b = body_from_json(json::parse(R"({"dimension": 3, "kind": "ball", "radius": 2})"));
  CHECK(b.minkowski(vec3(2, 0, 0)) == doctest::Approx(1.0));

  const auto e = body_from_json(
      json::parse(R"({"dimension": 2, "kind": "ellipsoid", "axes": [2, 1], "center": [0.1, 0]})"));
  CHECK(e.minkowski(vec2(2.1, 0.0)) == doctest::Approx(1.0));

  const auto m = body_from_json(
      json::parse(R"({"dimension": 2, "kind": "ellipsoid", "matrix": [[0.25, 0], [0, 1]]})"));
  CHECK(m.minkowski(vec2(0.0, 1.0)) == doctest::Approx(1.0));

  const auto r = body_from_json(json::parse(R"({"dimension": 2, "kind": "randers", "beta": [0, 0.3]})"));
  CHECK(r.minkowski(vec2(0.0, 1.0)) == doctest::Approx(1.3));

  const auto f = body_from_json(json::parse(
      R"({"dimension": 2, "kind": "radial2d", "fourier": {"a0": 1, "a": [0, 0.1], "b": [0, 0]}})"));
  CHECK(f.minkowski(vec2(1.1, 0.0)) == doctest::Approx(1.0));

  const auto s = body_from_json(json::parse(
      R"({"dimension": 2, "kind": "superellipsoid", "axes": [1, 1], "exponent": 4, "center": [0.1, 0.1]})"));
  CHECK(s.minkowski(vec2(1.1, 0.1)) == doctest::Approx(1.0));

  for (const char* bad : {
           R"({"dimension": 3, "kind": "ball", "radius": 1, "colour": "red"})",
           R"({"dimension": 3, "kind": "cube"})",
           R"({"dimension": 5, "kind": "ball"})",
           R"({"kind": "ball"})",
           R"({"dimension": 2, "kind": "ellipsoid", "axes": [1, 1], "matrix": [[1, 0], [0, 1]]})",
           R"({"dimension": 2, "kind": "ellipsoid", "axes": [1, 1, 1]})",
           R"({"dimension": 2, "kind": "randers", "beta": [0, 1.2]})",
           R"({"dimension": 3, "kind": "radial2d", "fourier": {"a0": 1}})",
           R"({"dimension": 2, "kind": "superellipsoid", "axes": [1, 1], "exponent": 5})",
           R"({"dimension": 2, "kind": "ball", "center": [2, 0]})",
           R"([1, 2])",
       }) {
    CAPTURE(bad);
    CHECK_THROWS_AS(body_from_json(json::parse(bad)), ConfigError);
  }
  CHECK_THROWS_AS(load_body("/nonexistent/body.json"), ConfigError);
}
