#include "funk/cli.hpp"

#include "funk/balance.hpp"
#include "funk/bodies.hpp"
#include "funk/errors.hpp"
#include "funk/funkarea.hpp"
#include "funk/quadrature.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>

namespace funk::cli {

namespace {

using nlohmann::json;

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::vector<double> parse_list(const std::string& text, const std::string& flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError(flag + ": cannot parse '" + item + "' as a number");
    }
  }
  if (out.empty()) throw ConfigError(flag + ": empty list");
  return out;
}

Vec parse_vec(const std::string& text, int n, const std::string& flag) {
  const auto values = parse_list(text, flag);
  if (static_cast<int>(values.size()) != n) {
    throw ConfigError(flag + ": expected " + std::to_string(n) + " comma-separated numbers");
  }
  return Eigen::Map<const Vec>(values.data(), n);
}

// Result of one command: a summary record and an optional table.
struct Report {
  json summary = json::object();
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

json vec_json(const Vec& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

std::string value_text(const json& v) {
  if (v.is_number_float()) return fmt(v.get<double>());
  if (v.is_string()) return v.get<std::string>();
  if (v.is_array()) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + value_text(v[i]);
    return s;
  }
  return v.dump();
}

void write_text(const Report& r, std::ostream& os) {
  for (const auto& [key, value] : r.summary.items()) {
    os << key << ": " << value_text(value) << '\n';
  }
  if (r.columns.empty()) return;
  if (!r.summary.empty()) os << '\n';
  for (std::size_t k = 0; k < r.columns.size(); ++k) os << (k ? " " : "") << r.columns[k];
  os << '\n';
  for (const auto& row : r.rows) {
    for (std::size_t k = 0; k < row.size(); ++k) os << (k ? " " : "") << fmt(row[k]);
    os << '\n';
  }
}

void write_csv(const Report& r, std::ostream& os) {
  if (!r.columns.empty()) {
    for (std::size_t k = 0; k < r.columns.size(); ++k) os << (k ? "," : "") << r.columns[k];
    os << '\n';
    for (const auto& row : r.rows) {
      for (std::size_t k = 0; k < row.size(); ++k) os << (k ? "," : "") << fmt(row[k]);
      os << '\n';
    }
    return;
  }
  // A single record: keys as header, vectors quoted.
  bool first = true;
  for (const auto& [key, value] : r.summary.items()) {
    os << (first ? "" : ",") << key;
    first = false;
  }
  os << '\n';
  first = true;
  for (const auto& [key, value] : r.summary.items()) {
    const std::string text = value_text(value);
    const bool quote = text.find(',') != std::string::npos;
    os << (first ? "" : ",") << (quote ? "\"" + text + "\"" : text);
    first = false;
  }
  os << '\n';
}

void write_json(const Report& r, std::ostream& os) {
  json doc = r.summary;
  if (!r.columns.empty()) {
    json rows = json::array();
    for (const auto& row : r.rows) {
      json obj = json::object();
      for (std::size_t k = 0; k < row.size(); ++k) obj[r.columns[k]] = row[k];
      rows.push_back(obj);
    }
    doc["rows"] = rows;
  }
  os << doc.dump(2) << '\n';
}

struct Common {
  std::string path;
  int resolution = 0;
  double margin = kDefaultMargin;
  std::string format = "text";
  std::string output;
  std::uint64_t seed = kDefaultSphereSeed;
};

void add_common(CLI::App* cmd, Common& c, const std::string& what) {
  cmd->add_option("file", c.path, what)->required()->check(CLI::ExistingFile);
  cmd->add_option("--resolution", c.resolution,
                  "Sphere rule resolution; 0 picks the default for the dimension "
                  "(256 for n = 2, 64 for n = 3, 200000 samples for n = 4)")
      ->capture_default_str();
  cmd->add_option("--margin", c.margin, "Interior margin: base points need L(p) <= 1 - margin")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--format", c.format, "Output format")
      ->capture_default_str()
      ->check(CLI::IsMember({"text", "csv", "json"}));
  cmd->add_option("--output,-o", c.output, "Write the result to this file instead of stdout");
  cmd->add_option("--seed", c.seed, "Seed of the Monte Carlo sphere rule (n = 4 only)")
      ->capture_default_str();
}

SphereRule rule_for(const Common& c, int dimension) {
  const int res = c.resolution > 0 ? c.resolution : default_resolution(dimension);
  return build_rule(dimension, res, c.seed);
}

Route parse_route(const std::string& s) {
  return s == "direct" ? Route::direct : Route::projected;
}

json balance_json(const BalanceResult& br) {
  json j;
  j["point"] = vec_json(br.point);
  j["area"] = br.area;
  j["grad_norm"] = br.grad_norm;
  j["beta_norm"] = br.beta_norm;
  j["hessian_eigenvalues"] = vec_json(br.hessian_eigenvalues);
  j["hessian_min_eigenvalue"] = br.hessian_min_eigenvalue;
  j["iterations"] = br.iterations;
  j["converged"] = br.converged;
  j["message"] = br.message;
  return j;
}

std::string error_kind(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e)) return "ConfigError";
  if (dynamic_cast<const InteriorViolation*>(&e)) return "InteriorViolation";
  if (dynamic_cast<const RegularityError*>(&e)) return "RegularityError";
  if (dynamic_cast<const ConvergenceError*>(&e)) return "ConvergenceError";
  if (dynamic_cast<const DomainError*>(&e)) return "DomainError";
  return "Error";
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e)) return kExitUsage;
  if (dynamic_cast<const ConvergenceError*>(&e)) return kExitFailed;
  return kExitNumerical;
}

void report_error(std::ostream& err, const std::string& command, const std::string& kind,
                  const std::string& message) {
  json j;
  j["error"] = {{"command", command}, {"kind", kind}, {"message", message}};
  err << j.dump() << '\n';
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Funk area function of convex bodies", "funkarea"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  Common common;
  std::string point_text, method = "projected", alpha_text, route = "direct";
  std::string center_text, eval_text, start_text, grid_text;
  int order = 10, axis = 0, max_iter = 100;
  double tol = 1e-9;
  bool no_warm_start = false;

  auto* check = app.add_subcommand("check", "Scan the metric tensor of a body for regularity");
  add_common(check, common, "Body JSON file");

  auto* area_cmd = app.add_subcommand("area", "Area r(p) of the indicatrix at a base point");
  add_common(area_cmd, common, "Body JSON file");
  area_cmd->add_option("--point", point_text, "Base point, comma separated (default origin)");
  area_cmd->add_option("--method", method, "Integration route")
      ->capture_default_str()
      ->check(CLI::IsMember({"projected", "direct"}));

  auto* deriv = app.add_subcommand("deriv", "Partial derivative d^alpha r(p)");
  add_common(deriv, common, "Body JSON file");
  deriv->add_option("--point", point_text, "Base point, comma separated (default origin)");
  deriv->add_option("--alpha", alpha_text, "Multi-index, comma separated, e.g. 2,0,0")
      ->required();
  deriv->add_option("--method", route, "Integration route")
      ->capture_default_str()
      ->check(CLI::IsMember({"projected", "direct"}));

  auto* taylor = app.add_subcommand("taylor", "Taylor coefficients of r around a center");
  add_common(taylor, common, "Body JSON file");
  taylor->add_option("--center", center_text, "Expansion center (default origin)");
  taylor->add_option("--order", order, "Total order of the series")
      ->capture_default_str()
      ->check(CLI::Range(0, kMaxTaylorOrder));
  taylor->add_option("--eval", eval_text, "Point at which to evaluate the series");
  taylor->add_option("--method", route, "Integration route")
      ->capture_default_str()
      ->check(CLI::IsMember({"projected", "direct"}));

  auto* balance = app.add_subcommand("balance", "Balancing point: the minimizer of r");
  add_common(balance, common, "Body JSON file");
  balance->add_option("--tol", tol, "Stop when |grad r| <= tol")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  balance->add_option("--max-iter", max_iter, "Newton iteration limit")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  balance->add_option("--start", start_text, "Initial point (default origin)");
  balance->add_option("--method", method, "Integration route")
      ->capture_default_str()
      ->check(CLI::IsMember({"projected", "direct"}));

  auto* scan = app.add_subcommand("scan", "Tabulate r along one coordinate axis");
  add_common(scan, common, "Body JSON file");
  scan->add_option("--grid", grid_text, "Range as min:max:count, e.g. --grid=-0.9:0.9:61")
      ->required();
  scan->add_option("--axis", axis, "Coordinate to vary, 1..n (default n)");
  scan->add_option("--point", point_text, "Values of the other coordinates (default origin)");
  scan->add_option("--method", method, "Integration route")
      ->capture_default_str()
      ->check(CLI::IsMember({"projected", "direct"}));

  auto* field = app.add_subcommand("field", "Balancing vector field over a family of bodies");
  add_common(field, common, "Field JSON file");
  field->add_option("--tol", tol, "Per-point tolerance on |grad r|")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  field->add_option("--max-iter", max_iter, "Newton iteration limit per point")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  field->add_flag("--no-warm-start", no_warm_start,
                  "Start every grid point from the origin instead of its predecessor");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    report_error(err, "parse", "UsageError", e.what());
    return kExitUsage;
  }

  CLI::App* cmd = app.get_subcommands().front();
  const std::string name = cmd->get_name();
  Report report;
  int status = kExitOk;

  try {
    if (name == "field") {
      const FieldSpec spec = load_field(common.path);
      const int n = spec.body_at(spec.grid_point(0)).dimension();
      const SphereRule rule = rule_for(common, n);
      FieldOptions opts;
      opts.balance.tol = tol;
      opts.balance.max_iter = max_iter;
      opts.balance.margin = common.margin;
      opts.warm_start = !no_warm_start;
      const FieldResult fr = balanced_field(spec, rule, opts);
      const int m = spec.grid_dimension();
      for (int k = 1; k <= m; ++k) report.columns.push_back("q" + std::to_string(k));
      for (int k = 1; k <= n; ++k) report.columns.push_back("V" + std::to_string(k));
      for (const char* c : {"residual", "iterations", "ok"}) report.columns.push_back(c);
      json failures = json::array();
      for (std::size_t i = 0; i < fr.points.size(); ++i) {
        const FieldPoint& pt = fr.points[i];
        std::vector<double> row(pt.q.data(), pt.q.data() + m);
        for (int k = 0; k < n; ++k) row.push_back(k < pt.V.size() ? pt.V(k) : std::nan(""));
        row.push_back(pt.ok ? pt.residual : std::nan(""));
        row.push_back(pt.iterations);
        row.push_back(pt.ok ? 1.0 : 0.0);
        report.rows.push_back(row);
        if (!pt.ok) failures.push_back({{"index", i}, {"message", pt.error}});
      }
      if (common.format != "csv") {
        report.summary["points"] = fr.points.size();
        report.summary["failures"] = fr.failures;
      }
      if (fr.failures > 0) {
        report_error(err, name, "FieldFailures",
                     std::to_string(fr.failures) + " grid point(s) failed: " + failures.dump());
        status = kExitFailed;
      }
    } else {
      const ConvexBody body = load_body(common.path);
      const int n = body.dimension();
      const SphereRule rule = rule_for(common, n);
      const Vec point = point_text.empty() ? Vec(Vec::Zero(n)) : parse_vec(point_text, n, "--point");

      if (name == "check") {
        const RegularityReport rr = validate(body, rule);
        report.summary["kind"] = std::string(to_string(body.kind()));
        report.summary["dimension"] = n;
        report.summary["nodes"] = rule.size();
        report.summary["min_metric_eigenvalue"] = rr.min_metric_eigenvalue;
        report.summary["max_metric_eigenvalue"] = rr.max_metric_eigenvalue;
        report.summary["margin"] = rr.margin;
        report.summary["worst_node"] = vec_json(rr.worst_node);
        report.summary["strongly_convex"] = rr.is_strongly_convex;
        if (!rr.is_strongly_convex) status = kExitNumerical;
      } else if (name == "area") {
        const FunkContext ctx(body, point, common.margin);
        report.summary["point"] = vec_json(point);
        report.summary["method"] = method;
        report.summary["area"] = area(ctx, rule, parse_route(method));
      } else if (name == "deriv") {
        MultiIndex alpha;
        for (double a : parse_list(alpha_text, "--alpha")) {
          if (a < 0 || a != std::floor(a)) throw ConfigError("--alpha entries must be non-negative integers");
          alpha.push_back(static_cast<int>(a));
        }
        if (static_cast<int>(alpha.size()) != n) {
          throw ConfigError("--alpha: expected " + std::to_string(n) + " entries");
        }
        const FunkContext ctx(body, point, common.margin);
        const int m = multi_index_order(alpha);
        report.summary["point"] = vec_json(point);
        report.summary["alpha"] = alpha;
        report.summary["order"] = m;
        report.summary["c_m"] = cm_coefficient(n, m);
        report.summary["method"] = route;
        report.summary["derivative"] = area_derivative(ctx, rule, alpha, parse_route(route));
      } else if (name == "taylor") {
        const Vec center = center_text.empty() ? Vec(Vec::Zero(n)) : parse_vec(center_text, n, "--center");
        const TaylorModel model = taylor_build(body, center, order, rule, parse_route(route));
        for (int k = 1; k <= n; ++k) report.columns.push_back("alpha" + std::to_string(k));
        report.columns.push_back("coefficient");
        for (std::size_t i = 0; i < model.indices().size(); ++i) {
          std::vector<double> row(model.indices()[i].begin(), model.indices()[i].end());
          row.push_back(model.coefficients()[i]);
          report.rows.push_back(row);
        }
        if (common.format != "csv") {
          report.summary["center"] = vec_json(center);
          report.summary["order"] = order;
        }
        if (!eval_text.empty()) {
          const Vec p = parse_vec(eval_text, n, "--eval");
          const double value = taylor_eval(model, p);
          if (common.format == "csv") {
            err << "evaluation at " << eval_text << ": " << fmt(value) << '\n';
          } else {
            report.summary["eval_point"] = vec_json(p);
            report.summary["value"] = value;
          }
        }
      } else if (name == "balance") {
        BalanceOptions opts;
        opts.tol = tol;
        opts.max_iter = max_iter;
        opts.margin = common.margin;
        opts.route = parse_route(method);
        if (!start_text.empty()) opts.start = parse_vec(start_text, n, "--start");
        const BalanceResult br = balancing_point(body, rule, opts);
        report.summary = balance_json(br);
        if (common.format != "csv") {
          report.columns = {"iteration", "area", "grad_norm", "step_length", "backtracks"};
          for (std::size_t i = 0; i < br.trace.size(); ++i) {
            const auto& t = br.trace[i];
            report.rows.push_back({static_cast<double>(i), t.area, t.grad_norm, t.step_length,
                                   static_cast<double>(t.backtracks)});
          }
        }
        if (!br.converged) {
          report_error(err, name, "ConvergenceError", br.message);
          status = kExitFailed;
        }
      } else if (name == "scan") {
        const auto parts = [&] {
          std::vector<std::string> p;
          std::stringstream ss(grid_text);
          std::string item;
          while (std::getline(ss, item, ':')) p.push_back(item);
          return p;
        }();
        if (parts.size() != 3) throw ConfigError("--grid must look like min:max:count");
        const double lo = parse_list(parts[0], "--grid")[0];
        const double hi = parse_list(parts[1], "--grid")[0];
        const double count_d = parse_list(parts[2], "--grid")[0];
        if (count_d < 1 || count_d != std::floor(count_d)) {
          throw ConfigError("--grid count must be a positive integer");
        }
        const int count = static_cast<int>(count_d);
        const int k = axis == 0 ? n : axis;
        if (k < 1 || k > n) throw ConfigError("--axis must lie in 1.." + std::to_string(n));
        for (int i = 1; i <= n; ++i) report.columns.push_back("p" + std::to_string(i));
        report.columns.push_back("r");
        int skipped = 0;
        for (int i = 0; i < count; ++i) {
          Vec p = point;
          p(k - 1) = count == 1 ? lo : lo + (hi - lo) * i / (count - 1);
          if (!body.is_interior(p, common.margin)) {
            ++skipped;
            continue;
          }
          std::vector<double> row(p.data(), p.data() + n);
          row.push_back(area(FunkContext(body, p, common.margin), rule, parse_route(method)));
          report.rows.push_back(row);
        }
        if (skipped > 0) err << "skipped " << skipped << " non-interior grid point(s)\n";
      }
    }
  } catch (const Error& e) {
    report_error(err, name, error_kind(e), e.what());
    return exit_code_for(e);
  }

  std::ofstream file;
  if (!common.output.empty()) {
    file.open(common.output);
    if (!file) {
      report_error(err, name, "IOError", "cannot write '" + common.output + "'");
      return kExitUsage;
    }
  }
  std::ostream& os = common.output.empty() ? out : file;
  if (common.format == "csv") {
    write_csv(report, os);
  } else if (common.format == "json") {
    write_json(report, os);
  } else {
    write_text(report, os);
  }
  return status;
}

}  // namespace funk::cli
