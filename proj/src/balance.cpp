#include "funk/balance.hpp"

#include "funk/errors.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace funk {

namespace {

constexpr int kMaxBacktracks = 60;

// Decrease test with slack for roundoff in the quadrature sum.
bool not_worse(double candidate, double current) {
  return candidate <= current + 8.0 * std::numeric_limits<double>::epsilon() * std::abs(current);
}

}  // namespace

BalanceResult balancing_point(const ConvexBody& body, const SphereRule& rule,
                              const BalanceOptions& options) {
  if (!(options.tol > 0.0)) throw DomainError("balance tolerance must be positive");
  if (options.max_iter < 1) throw DomainError("max_iter must be positive");
  const int n = body.dimension();

  BalanceResult result;
  Vec p = options.start.value_or(Vec::Zero(n));
  body.require_interior(p, options.margin);

  AreaJet jet = area_jet(FunkContext(body, p, options.margin), rule, options.route);
  for (;;) {
    const double grad_norm = jet.gradient.norm();
    IterationRecord record{p, jet.area, grad_norm, 0.0, 0, false};

    if (grad_norm <= options.tol) {
      result.trace.push_back(record);
      result.converged = true;
      result.message = "converged";
      break;
    }
    if (result.iterations >= options.max_iter) {
      result.trace.push_back(record);
      result.message = "maximum number of iterations reached";
      break;
    }

    Vec direction;
    Eigen::LLT<Mat> llt(jet.hessian);
    if (llt.info() == Eigen::Success) direction = -llt.solve(jet.gradient);
    if (direction.size() == 0 || !direction.allFinite() ||
        direction.dot(jet.gradient) >= 0.0) {
      direction = -jet.gradient / jet.hessian.norm();
      record.gradient_step = true;
    }

    double t = 1.0;
    bool accepted = false;
    for (int k = 0; k <= kMaxBacktracks; ++k, t *= 0.5) {
      const Vec trial = p + t * direction;
      if (!body.is_interior(trial, options.margin)) {
        ++record.backtracks;
        continue;
      }
      AreaJet trial_jet = area_jet(FunkContext(body, trial, options.margin), rule, options.route);
      if (not_worse(trial_jet.area, jet.area)) {
        p = trial;
        jet = std::move(trial_jet);
        accepted = true;
        break;
      }
      ++record.backtracks;
    }
    record.step_length = accepted ? t : 0.0;
    result.trace.push_back(record);
    if (!accepted) {
      result.message = "line search failed to decrease the area";
      break;
    }
    ++result.iterations;
  }

  result.point = p;
  result.area = jet.area;
  result.grad_norm = jet.gradient.norm();
  result.beta_norm = 2.0 / (n - 1) * result.grad_norm;
  Eigen::SelfAdjointEigenSolver<Mat> eig(jet.hessian, Eigen::EigenvaluesOnly);
  result.hessian_eigenvalues = eig.eigenvalues();
  result.hessian_min_eigenvalue = eig.eigenvalues().minCoeff();
  return result;
}

Vec randers_center(const Mat& A, const Vec& b) {
  if (A.rows() != A.cols() || A.rows() != b.size()) {
    throw DomainError("randers_center: dimension mismatch");
  }
  Eigen::LLT<Mat> llt(A);
  if (llt.info() != Eigen::Success) throw DomainError("randers_center: A must be SPD");
  const Vec sharp = llt.solve(b);
  const double norm2 = b.dot(sharp);
  if (!(norm2 < 1.0)) throw DomainError("randers_center: |beta| must be < 1");
  return -sharp / (1.0 - norm2);
}

double balance_residual(const ConvexBody& body, const Vec& p, const SphereRule& rule,
                        Route route) {
  const FunkContext ctx(body, p);
  const int n = body.dimension();
  const auto beta = integrate_indicatrix(ctx, rule, route, n, false,
                                         [&](const FunkNode& node, std::span<double> out) {
                                           for (int i = 0; i < n; ++i) out[i] = node.grad_F(i);
                                         });
  return Eigen::Map<const Vec>(beta.data(), n).norm();
}

double GridAxis::at(int i) const {
  if (count == 1) return min;
  return min + (max - min) * i / (count - 1);
}

namespace {

class AffineParser {
 public:
  AffineParser(std::string_view text, const Vec& q) : text_(text), q_(q) {}

  double parse() {
    double value = term();
    for (;;) {
      skip_space();
      if (at_end()) return value;
      const char op = text_[pos_];
      if (op != '+' && op != '-') fail("expected '+' or '-'");
      ++pos_;
      const double rhs = term();
      value = op == '+' ? value + rhs : value - rhs;
    }
  }

 private:
  double term() {
    skip_space();
    double sign = 1.0;
    while (!at_end() && (text_[pos_] == '+' || text_[pos_] == '-')) {
      if (text_[pos_] == '-') sign = -sign;
      ++pos_;
      skip_space();
    }
    const bool first_is_coord = peek_coord();
    double a = first_is_coord ? coordinate() : number();
    skip_space();
    if (!at_end() && text_[pos_] == '*') {
      ++pos_;
      skip_space();
      if (first_is_coord) {
        a *= number();
      } else {
        if (!peek_coord()) fail("expected a coordinate after '*'");
        a *= coordinate();
      }
    }
    return sign * a;
  }

  bool peek_coord() const { return !at_end() && text_[pos_] == 'q'; }

  double coordinate() {
    ++pos_;
    const std::size_t start = pos_;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected a coordinate index after 'q'");
    const int index = std::stoi(std::string(text_.substr(start, pos_ - start)));
    if (index < 1 || index > q_.size()) fail("coordinate index out of range");
    return q_(index - 1);
  }

  double number() {
    const std::string rest(text_.substr(pos_));
    char* end = nullptr;
    const double v = std::strtod(rest.c_str(), &end);
    if (end == rest.c_str()) fail("expected a number");
    pos_ += static_cast<std::size_t>(end - rest.c_str());
    return v;
  }

  void skip_space() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool at_end() const { return pos_ >= text_.size(); }

  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError("affine expression '" + std::string(text_) + "': " + what +
                      " at position " + std::to_string(pos_));
  }

  std::string_view text_;
  const Vec& q_;
  std::size_t pos_ = 0;
};

nlohmann::json substitute(const nlohmann::json& node, const Vec& q, bool is_kind) {
  if (node.is_string()) {
    if (is_kind) return node;
    return evaluate_affine(node.get<std::string>(), q);
  }
  if (node.is_array()) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& x : node) out.push_back(substitute(x, q, false));
    return out;
  }
  if (node.is_object()) {
    nlohmann::json out = nlohmann::json::object();
    for (const auto& [key, value] : node.items()) out[key] = substitute(value, q, key == "kind");
    return out;
  }
  return node;
}

}  // namespace

double evaluate_affine(std::string_view expression, const Vec& q) {
  return AffineParser(expression, q).parse();
}

FieldSpec::FieldSpec(std::vector<GridAxis> axes, nlohmann::json body_template)
    : axes_(std::move(axes)), template_(std::move(body_template)) {
  if (axes_.empty()) throw ConfigError("field grid needs at least one axis");
  for (const auto& a : axes_) {
    if (a.count < 1) throw ConfigError("grid axis count must be positive");
  }
}

std::size_t FieldSpec::size() const {
  std::size_t total = 1;
  for (const auto& a : axes_) total *= static_cast<std::size_t>(a.count);
  return total;
}

std::vector<int> FieldSpec::grid_index(std::size_t flat) const {
  std::vector<int> idx(axes_.size());
  for (std::size_t k = axes_.size(); k-- > 0;) {
    idx[k] = static_cast<int>(flat % axes_[k].count);
    flat /= axes_[k].count;
  }
  return idx;
}

Vec FieldSpec::grid_point(std::size_t flat) const {
  const auto idx = grid_index(flat);
  Vec q(axes_.size());
  for (std::size_t k = 0; k < axes_.size(); ++k) q(k) = axes_[k].at(idx[k]);
  return q;
}

ConvexBody FieldSpec::body_at(const Vec& q) const {
  return body_from_json(substitute(template_, q, false));
}

FieldSpec field_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ConfigError("field description must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (key != "grid" && key != "body_template") throw ConfigError("unknown key '" + key + "'");
  }
  if (!doc.contains("grid") || !doc["grid"].is_array()) {
    throw ConfigError("field needs a 'grid' array of axes");
  }
  if (!doc.contains("body_template") || !doc["body_template"].is_object()) {
    throw ConfigError("field needs a 'body_template' object");
  }
  std::vector<GridAxis> axes;
  for (const auto& a : doc["grid"]) {
    if (!a.is_object()) throw ConfigError("grid axes must be objects");
    for (const auto& [key, value] : a.items()) {
      if (key != "min" && key != "max" && key != "count") {
        throw ConfigError("unknown grid key '" + key + "'");
      }
    }
    if (!a.contains("min") || !a.contains("max") || !a.contains("count") ||
        !a["min"].is_number() || !a["max"].is_number() || !a["count"].is_number_integer()) {
      throw ConfigError("grid axis needs numeric 'min', 'max' and integer 'count'");
    }
    axes.push_back({a["min"].get<double>(), a["max"].get<double>(), a["count"].get<int>()});
  }
  FieldSpec spec(std::move(axes), doc["body_template"]);
  // Surface template errors before any computation.
  spec.body_at(spec.grid_point(0));
  return spec;
}

FieldSpec load_field(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open field file '" + path + "'");
  try {
    return field_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("cannot parse '" + path + "': " + e.what());
  }
}

ConvexBody FieldResult::balanced_body(std::size_t i) const {
  const FieldPoint& pt = points.at(i);
  if (!pt.ok || !pt.body) throw DomainError("field point " + std::to_string(i) + " failed");
  return pt.body->translate(pt.V);
}

double FieldResult::balanced_norm(std::size_t i, const Vec& v) const {
  return balanced_body(i).minkowski(v);
}

FieldResult balanced_field(const FieldSpec& spec, const SphereRule& rule,
                           const FieldOptions& options) {
  FieldResult result;
  const std::size_t count = spec.size();
  result.points.resize(count);
  std::optional<Vec> previous;
  // Failed points keep a NaN vector, even when their body cannot be built.
  const auto& dim = spec.body_template()["dimension"];
  const int n_template = dim.is_number_integer() ? dim.get<int>() : 0;

  for (std::size_t i = 0; i < count; ++i) {
    FieldPoint& pt = result.points[i];
    pt.grid_index = spec.grid_index(i);
    pt.q = spec.grid_point(i);
    pt.V = Vec::Constant(n_template, std::nan(""));
    try {
      pt.body = spec.body_at(pt.q);
      BalanceOptions local = options.balance;
      if (options.warm_start && previous && pt.body->is_interior(*previous, local.margin)) {
        local.start = previous;
      }
      const BalanceResult br = balancing_point(*pt.body, rule, local);
      pt.iterations = br.iterations;
      if (!br.converged) throw ConvergenceError(br.message);
      pt.V = br.point;
      pt.residual = balance_residual(*pt.body, br.point, rule, Route::direct);
      pt.ok = true;
      previous = br.point;
    } catch (const Error& e) {
      pt.ok = false;
      pt.error = e.what();
      ++result.failures;
    }
  }

  // Finite-difference Jacobian of V along each grid axis.
  const int m = spec.grid_dimension();
  std::vector<std::size_t> strides(m, 1);
  for (int k = m - 1; k > 0; --k) strides[k - 1] = strides[k] * spec.axes()[k].count;
  result.jacobians.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    const FieldPoint& pt = result.points[i];
    const Eigen::Index n = pt.V.size();
    Mat J = Mat::Constant(n, m, std::nan(""));
    for (int k = 0; k < m && n > 0; ++k) {
      const int idx = pt.grid_index[k];
      const int last = spec.axes()[k].count - 1;
      if (last == 0) continue;
      const std::size_t lo = idx > 0 ? i - strides[k] : i;
      const std::size_t hi = idx < last ? i + strides[k] : i;
      const FieldPoint& a = result.points[lo];
      const FieldPoint& b = result.points[hi];
      if (!a.ok || !b.ok || a.V.size() != n || b.V.size() != n) continue;
      J.col(k) = (b.V - a.V) / (b.q(k) - a.q(k));
    }
    result.jacobians[i] = J;
  }
  return result;
}

}  // namespace funk
