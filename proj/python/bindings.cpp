#include "funk/balance.hpp"
#include "funk/bodies.hpp"
#include "funk/errors.hpp"
#include "funk/funkarea.hpp"
#include "funk/quadrature.hpp"
#include "funk/reference.hpp"

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

namespace py = pybind11;
using namespace funk;

namespace {

Route parse_route(const std::string& name) {
  if (name == "projected") return Route::projected;
  if (name == "direct") return Route::direct;
  throw ConfigError("route must be 'projected' or 'direct', got '" + name + "'");
}

SphereRule rule_or_default(int dimension, const std::optional<SphereRule>& rule) {
  if (rule) {
    if (rule->dimension() != dimension) {
      throw DomainError("rule dimension " + std::to_string(rule->dimension()) +
                        " does not match body dimension " + std::to_string(dimension));
    }
    return *rule;
  }
  return build_rule(dimension, default_resolution(dimension), kDefaultSphereSeed);
}

FunkContext context(const ConvexBody& body, const Vec& p, double margin) {
  return FunkContext(body, p, margin);
}

py::dict balance_dict(const BalanceResult& br) {
  py::dict d;
  d["point"] = br.point;
  d["iterations"] = br.iterations;
  d["area"] = br.area;
  d["grad_norm"] = br.grad_norm;
  d["beta_norm"] = br.beta_norm;
  d["hessian_min_eigenvalue"] = br.hessian_min_eigenvalue;
  d["hessian_eigenvalues"] = br.hessian_eigenvalues;
  d["converged"] = br.converged;
  d["message"] = br.message;
  py::list trace;
  for (const IterationRecord& rec : br.trace) {
    py::dict r;
    r["point"] = rec.point;
    r["area"] = rec.area;
    r["grad_norm"] = rec.grad_norm;
    r["step_length"] = rec.step_length;
    r["backtracks"] = rec.backtracks;
    r["gradient_step"] = rec.gradient_step;
    trace.append(r);
  }
  d["trace"] = trace;
  return d;
}

}  // namespace

PYBIND11_MODULE(_funkarea, m) {
  m.doc() = "Area function of Funk metrics on convex bodies";

  auto base = py::register_exception<Error>(m, "FunkError");
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<InteriorViolation>(m, "InteriorViolation", base.ptr());
  py::register_exception<RegularityError>(m, "RegularityError", base.ptr());
  py::register_exception<ConvergenceError>(m, "ConvergenceError", base.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());

  py::class_<ConvexBody>(m, "Body")
      .def_static("ball", &ConvexBody::ball, py::arg("center"), py::arg("radius") = 1.0)
      .def_static("ellipsoid", &ConvexBody::ellipsoid, py::arg("matrix"), py::arg("center"))
      .def_static("ellipsoid_axes", &ConvexBody::ellipsoid_axes, py::arg("semi_axes"),
                  py::arg("center"))
      .def_static("randers", &ConvexBody::randers, py::arg("matrix"), py::arg("beta"))
      .def_static("radial2d", &ConvexBody::radial2d, py::arg("a0"), py::arg("a"), py::arg("b"))
      .def_static("superellipsoid", &ConvexBody::superellipsoid, py::arg("semi_axes"),
                  py::arg("exponent"))
      .def_static(
          "from_json", [](const std::string& text) {
            nlohmann::json doc;
            try {
              doc = nlohmann::json::parse(text);
            } catch (const nlohmann::json::exception& e) {
              throw ConfigError(std::string("invalid JSON: ") + e.what());
            }
            return body_from_json(doc);
          },
          py::arg("text"))
      .def_static("load", &load_body, py::arg("path"))
      .def_property_readonly("dimension", &ConvexBody::dimension)
      .def("minkowski", &ConvexBody::minkowski, py::arg("v"))
      .def("gradient", &ConvexBody::gradient, py::arg("v"))
      .def("hessian", &ConvexBody::hessian, py::arg("v"))
      .def("translate", &ConvexBody::translate, py::arg("c"), py::arg("margin") = kDefaultMargin)
      .def("is_interior", &ConvexBody::is_interior, py::arg("p"),
           py::arg("margin") = kDefaultMargin)
      .def("describe", [](const ConvexBody& b) { return b.describe().dump(); })
      .def("__repr__", [](const ConvexBody& b) { return "Body(" + b.describe().dump() + ")"; });

  py::class_<SphereRule>(m, "Rule")
      .def(py::init([](int dimension, std::optional<int> resolution, std::uint64_t seed) {
             return build_rule(dimension, resolution.value_or(default_resolution(dimension)),
                               seed);
           }),
           py::arg("dimension"), py::arg("resolution") = py::none(),
           py::arg("seed") = kDefaultSphereSeed)
      .def_property_readonly("dimension", &SphereRule::dimension)
      .def_property_readonly("resolution", &SphereRule::resolution)
      .def_property_readonly("exact_degree", &SphereRule::exact_degree)
      .def_property_readonly("monte_carlo", &SphereRule::monte_carlo)
      .def_property_readonly("nodes", &SphereRule::nodes)
      .def_property_readonly("weights", &SphereRule::weights)
      .def("__len__", &SphereRule::size);

  m.def("sphere_area", &sphere_area, py::arg("dimension"));
  m.def("default_resolution", &default_resolution, py::arg("dimension"));

  m.def(
      "validate",
      [](const ConvexBody& body, std::optional<SphereRule> rule) {
        const RegularityReport rep = validate(body, rule_or_default(body.dimension(), rule));
        py::dict d;
        d["strongly_convex"] = rep.is_strongly_convex;
        d["min_metric_eigenvalue"] = rep.min_metric_eigenvalue;
        d["max_metric_eigenvalue"] = rep.max_metric_eigenvalue;
        d["margin"] = rep.margin;
        d["worst_node"] = rep.worst_node;
        return d;
      },
      py::arg("body"), py::arg("rule") = py::none());

  m.def(
      "funk_norm",
      [](const ConvexBody& body, const Vec& p, const Vec& v, double margin) {
        return funk_norm(context(body, p, margin), v);
      },
      py::arg("body"), py::arg("point"), py::arg("v"), py::arg("margin") = kDefaultMargin);
  m.def(
      "funk_gradient",
      [](const ConvexBody& body, const Vec& p, const Vec& v, double margin) {
        return funk_gradient(context(body, p, margin), v);
      },
      py::arg("body"), py::arg("point"), py::arg("v"), py::arg("margin") = kDefaultMargin);

  m.def(
      "area",
      [](const ConvexBody& body, const Vec& p, std::optional<SphereRule> rule,
         const std::string& route, double margin) {
        return area(context(body, p, margin), rule_or_default(body.dimension(), rule),
                    parse_route(route));
      },
      py::arg("body"), py::arg("point"), py::arg("rule") = py::none(),
      py::arg("route") = "projected", py::arg("margin") = kDefaultMargin);
  m.def(
      "area_gradient",
      [](const ConvexBody& body, const Vec& p, std::optional<SphereRule> rule,
         const std::string& route, double margin) {
        return area_gradient(context(body, p, margin), rule_or_default(body.dimension(), rule),
                             parse_route(route));
      },
      py::arg("body"), py::arg("point"), py::arg("rule") = py::none(),
      py::arg("route") = "direct", py::arg("margin") = kDefaultMargin);
  m.def(
      "area_hessian",
      [](const ConvexBody& body, const Vec& p, std::optional<SphereRule> rule,
         const std::string& route, double margin) {
        return area_hessian(context(body, p, margin), rule_or_default(body.dimension(), rule),
                            parse_route(route));
      },
      py::arg("body"), py::arg("point"), py::arg("rule") = py::none(),
      py::arg("route") = "direct", py::arg("margin") = kDefaultMargin);
  m.def(
      "area_derivative",
      [](const ConvexBody& body, const Vec& p, const MultiIndex& alpha,
         std::optional<SphereRule> rule, const std::string& route, double margin) {
        return area_derivative(context(body, p, margin), rule_or_default(body.dimension(), rule),
                               alpha, parse_route(route));
      },
      py::arg("body"), py::arg("point"), py::arg("alpha"), py::arg("rule") = py::none(),
      py::arg("route") = "direct", py::arg("margin") = kDefaultMargin);
  m.def("cm_coefficient", &cm_coefficient, py::arg("dimension"), py::arg("order"));

  m.def(
      "averaged_metrics",
      [](const ConvexBody& body, const Vec& p, std::optional<SphereRule> rule,
         const std::string& route) {
        const AveragedMetrics am = averaged_metrics(
            context(body, p, kDefaultMargin), rule_or_default(body.dimension(), rule),
            parse_route(route));
        py::dict d;
        d["gamma1"] = am.gamma1;
        d["gamma2"] = am.gamma2;
        d["gamma3"] = am.gamma3;
        d["area"] = am.area;
        d["beta"] = am.beta;
        return d;
      },
      py::arg("body"), py::arg("point"), py::arg("rule") = py::none(),
      py::arg("route") = "direct");

  py::class_<TaylorModel>(m, "TaylorModel")
      .def_property_readonly("center", &TaylorModel::center)
      .def_property_readonly("order", &TaylorModel::order)
      .def_property_readonly("indices", &TaylorModel::indices)
      .def_property_readonly("coefficients", &TaylorModel::coefficients)
      .def("coefficient", &TaylorModel::coefficient, py::arg("alpha"))
      .def("in_domain", &TaylorModel::in_domain, py::arg("point"))
      .def("__call__", [](const TaylorModel& t, const Vec& p) { return taylor_eval(t, p); },
           py::arg("point"))
      .def("partial_sum", &TaylorModel::evaluate, py::arg("point"), py::arg("max_order") = -1);
  m.def(
      "taylor",
      [](const ConvexBody& body, const Vec& center, int order, std::optional<SphereRule> rule,
         const std::string& route) {
        return taylor_build(body, center, order, rule_or_default(body.dimension(), rule),
                            parse_route(route));
      },
      py::arg("body"), py::arg("center"), py::arg("order") = 10, py::arg("rule") = py::none(),
      py::arg("route") = "direct");

  m.def(
      "balancing_point",
      [](const ConvexBody& body, std::optional<SphereRule> rule, double tol, int max_iter,
         std::optional<Vec> start, const std::string& route) {
        BalanceOptions opts;
        opts.tol = tol;
        opts.max_iter = max_iter;
        opts.start = std::move(start);
        opts.route = parse_route(route);
        return balance_dict(balancing_point(body, rule_or_default(body.dimension(), rule), opts));
      },
      py::arg("body"), py::arg("rule") = py::none(), py::arg("tol") = 1e-9,
      py::arg("max_iter") = 100, py::arg("start") = py::none(), py::arg("route") = "projected");
  m.def("randers_center", &randers_center, py::arg("matrix"), py::arg("beta"));

  m.def(
      "balanced_field",
      [](const std::string& path, std::optional<SphereRule> rule, double tol, bool warm_start) {
        const FieldSpec spec = load_field(path);
        FieldOptions opts;
        opts.balance.tol = tol;
        opts.warm_start = warm_start;
        const int n = spec.body_at(spec.grid_point(0)).dimension();
        const FieldResult fr = balanced_field(spec, rule_or_default(n, rule), opts);
        py::list points;
        for (std::size_t i = 0; i < fr.points.size(); ++i) {
          const FieldPoint& pt = fr.points[i];
          py::dict d;
          d["q"] = pt.q;
          d["V"] = pt.V;
          d["residual"] = pt.residual;
          d["iterations"] = pt.iterations;
          d["ok"] = pt.ok;
          d["error"] = pt.error;
          d["jacobian"] = fr.jacobians[i];
          points.append(d);
        }
        py::dict out;
        out["points"] = points;
        out["failures"] = fr.failures;
        return out;
      },
      py::arg("path"), py::arg("rule") = py::none(), py::arg("tol") = 1e-9,
      py::arg("warm_start") = true);

  m.def("ball_area", &reference::ball_funk_area_closed, py::arg("dimension"), py::arg("s"));
}
