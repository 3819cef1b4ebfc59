#include "funk/bodies.hpp"

#include "funk/errors.hpp"
#include "funk/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>

namespace funk {

std::string_view to_string(BodyKind kind) {
  switch (kind) {
    case BodyKind::ball:
      return "ball";
    case BodyKind::ellipsoid:
      return "ellipsoid";
    case BodyKind::randers:
      return "randers";
    case BodyKind::radial2d:
      return "radial2d";
    case BodyKind::superellipsoid:
      return "superellipsoid";
  }
  return "unknown";
}

Tensor3 BodyModel::third(const Vec&) const {
  throw DomainError("third derivatives are not available for " +
                    std::string(to_string(kind())) + " bodies");
}

namespace {

std::vector<double> to_std(const Vec& v) { return {v.data(), v.data() + v.size()}; }

nlohmann::json matrix_json(const Mat& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    rows.push_back(to_std(m.row(i).transpose()));
  }
  return rows;
}

void check_dimension(int n) {
  if (n < 2 || n > kMaxDimension) {
    throw DomainError("body dimension must be in [2, " +
                      std::to_string(kMaxDimension) + "], got " +
                      std::to_string(n));
  }
}

void require_spd(const Mat& A, const char* what) {
  if (A.rows() != A.cols()) throw DomainError(std::string(what) + " must be square");
  if (!A.isApprox(A.transpose(), 1e-12)) {
    throw DomainError(std::string(what) + " must be symmetric");
  }
  Eigen::LLT<Mat> llt(A);
  if (llt.info() != Eigen::Success) {
    throw DomainError(std::string(what) + " must be positive definite");
  }
}

// Quadric bodies (balls, ellipsoids, Randers indicatrices). Stored both as
// an ellipsoid {(x - c)^T M (x - c) <= 1} and in Randers form
// L(v) = sqrt(v^T A v) + b.v, which is how L is evaluated. Translating
// only moves the center.
class QuadricModel final : public BodyModel {
 public:
  static std::shared_ptr<const QuadricModel> from_ellipsoid(BodyKind kind,
                                                            Mat M, Vec center) {
    auto model = std::make_shared<QuadricModel>(kind, std::move(M), std::move(center));
    model->derive_randers_form();
    return model;
  }

  static std::shared_ptr<const QuadricModel> from_randers(Mat A, Vec b) {
    const Mat M0 = A - b * b.transpose();
    Eigen::LLT<Mat> llt(M0);
    const Vec m0_inv_b = llt.solve(b);
    const double s = b.dot(m0_inv_b);
    Mat M = M0 / (1.0 + s);
    Vec center = -m0_inv_b;
    auto model = std::make_shared<QuadricModel>(BodyKind::randers, std::move(M),
                                                std::move(center));
    model->A_ = std::move(A);
    model->b_ = std::move(b);
    return model;
  }

  QuadricModel(BodyKind kind, Mat M, Vec center)
      : kind_(kind), M_(std::move(M)), center_(std::move(center)) {}

  int dimension() const override { return static_cast<int>(M_.rows()); }
  BodyKind kind() const override { return kind_; }
  int derivative_order() const override { return 3; }

  double value(const Vec& v) const override {
    return std::sqrt(v.dot(A_ * v)) + b_.dot(v);
  }

  Vec gradient(const Vec& v) const override {
    const Vec Av = A_ * v;
    return Av / std::sqrt(v.dot(Av)) + b_;
  }

  Jet jet(const Vec& v) const override {
    const Vec Av = A_ * v;
    const double alpha = std::sqrt(v.dot(Av));
    const Vec unit = Av / alpha;
    Jet out;
    out.value = alpha + b_.dot(v);
    out.gradient = unit + b_;
    out.hessian = (A_ - unit * unit.transpose()) / alpha;
    return out;
  }

  // Only the sqrt(v^T A v) part contributes:
  // a_ijk = -(a_ij a_k + a_ik a_j + a_jk a_i) / a.
  Tensor3 third(const Vec& v) const override {
    const int n = dimension();
    const Vec Av = A_ * v;
    const double alpha = std::sqrt(v.dot(Av));
    const Vec d1 = Av / alpha;
    const Mat d2 = (A_ - d1 * d1.transpose()) / alpha;
    Tensor3 t(n, Mat::Zero(n, n));
    for (int k = 0; k < n; ++k) {
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          t[k](i, j) =
              -(d2(i, j) * d1(k) + d2(i, k) * d1(j) + d2(j, k) * d1(i)) / alpha;
        }
      }
    }
    return t;
  }

  std::shared_ptr<const BodyModel> shifted(const std::shared_ptr<const BodyModel>&,
                                           const Vec& c) const override {
    return from_ellipsoid(kind_, M_, center_ - c);
  }

  nlohmann::json describe() const override {
    nlohmann::json j;
    j["dimension"] = dimension();
    j["kind"] = std::string(to_string(kind_));
    switch (kind_) {
      case BodyKind::ball:
        j["center"] = to_std(center_);
        j["radius"] = 1.0 / std::sqrt(M_(0, 0));
        break;
      case BodyKind::ellipsoid:
        j["center"] = to_std(center_);
        j["matrix"] = matrix_json(M_);
        break;
      default:
        j["matrix"] = matrix_json(A_);
        j["beta"] = to_std(b_);
        break;
    }
    return j;
  }

 private:
  void derive_randers_form() {
    const Vec Mc = M_ * center_;
    const double kappa = center_.dot(Mc);
    if (!(kappa < 1.0)) {
      throw InteriorViolation("the origin is not inside the body");
    }
    const double s = 1.0 - kappa;
    A_ = (M_ * s + Mc * Mc.transpose()) / (s * s);
    b_ = -Mc / s;
  }

  BodyKind kind_;
  Mat M_;
  Vec center_;
  Mat A_;
  Vec b_;
};

// Star body in the plane, L(v) = |v| h(theta) with h = 1 / rho.
class Radial2dModel final : public BodyModel {
 public:
  Radial2dModel(double a0, std::vector<double> a, std::vector<double> b)
      : a0_(a0), a_(std::move(a)), b_(std::move(b)) {
    double min_rho = std::numeric_limits<double>::infinity();
    constexpr int kScan = 8192;
    for (int i = 0; i < kScan; ++i) {
      const double t = 2.0 * std::numbers::pi * i / kScan;
      min_rho = std::min(min_rho, rho(t)[0]);
    }
    if (!(min_rho > 0.0)) {
      throw DomainError("radial2d: rho(theta) must stay positive");
    }
  }

  int dimension() const override { return 2; }
  BodyKind kind() const override { return BodyKind::radial2d; }
  int derivative_order() const override { return 2; }

  double value(const Vec& v) const override {
    return std::hypot(v(0), v(1)) / rho(std::atan2(v(1), v(0)))[0];
  }

  Vec gradient(const Vec& v) const override { return jet(v).gradient; }

  Jet jet(const Vec& v) const override {
    const double r = std::hypot(v(0), v(1));
    const double t = std::atan2(v(1), v(0));
    const auto [p, dp, ddp] = rho(t);
    const double h = 1.0 / p;
    const double dh = -dp / (p * p);
    const double ddh = -ddp / (p * p) + 2.0 * dp * dp / (p * p * p);
    Vec radial(2), angular(2);
    radial << std::cos(t), std::sin(t);
    angular << -std::sin(t), std::cos(t);
    Jet out;
    out.value = r * h;
    out.gradient = h * radial + dh * angular;
    out.hessian = (h + ddh) / r * angular * angular.transpose();
    return out;
  }

  std::shared_ptr<const BodyModel> shifted(const std::shared_ptr<const BodyModel>& self,
                                           const Vec& c) const override;

  nlohmann::json describe() const override {
    return {{"dimension", 2},
            {"kind", "radial2d"},
            {"fourier", {{"a0", a0_}, {"a", a_}, {"b", b_}}}};
  }

 private:
  std::array<double, 3> rho(double t) const {
    double p = a0_, dp = 0.0, ddp = 0.0;
    const std::size_t terms = std::max(a_.size(), b_.size());
    for (std::size_t i = 0; i < terms; ++i) {
      const double k = static_cast<double>(i + 1);
      const double ak = i < a_.size() ? a_[i] : 0.0;
      const double bk = i < b_.size() ? b_[i] : 0.0;
      const double c = std::cos(k * t), s = std::sin(k * t);
      p += ak * c + bk * s;
      dp += k * (-ak * s + bk * c);
      ddp += -k * k * (ak * c + bk * s);
    }
    return {p, dp, ddp};
  }

  double a0_;
  std::vector<double> a_;
  std::vector<double> b_;
};

// L(v) = (sum (v_i / a_i)^q)^(1/q) for even q, evaluated after scaling by
// the largest |v_i / a_i| to stay in range.
class SuperellipsoidModel final : public BodyModel {
 public:
  SuperellipsoidModel(Vec axes, int exponent)
      : axes_(std::move(axes)), q_(exponent) {}

  int dimension() const override { return static_cast<int>(axes_.size()); }
  BodyKind kind() const override { return BodyKind::superellipsoid; }
  int derivative_order() const override { return 2; }

  double value(const Vec& v) const override {
    const Vec x = v.cwiseQuotient(axes_);
    const double scale = x.cwiseAbs().maxCoeff();
    return scale * std::pow(power_sum(x / scale), 1.0 / q_);
  }

  Vec gradient(const Vec& v) const override { return jet(v).gradient; }

  Jet jet(const Vec& v) const override {
    const int n = dimension();
    const Vec x = v.cwiseQuotient(axes_);
    const double scale = x.cwiseAbs().maxCoeff();
    const Vec y = x / scale;
    const double S = power_sum(y);
    Vec t(n), diag(n);
    for (int i = 0; i < n; ++i) {
      t(i) = std::pow(y(i), q_ - 1) / axes_(i);
      diag(i) = std::pow(y(i), q_ - 2) / (axes_(i) * axes_(i));
    }
    Jet out;
    out.value = scale * std::pow(S, 1.0 / q_);
    out.gradient = std::pow(S, 1.0 / q_ - 1.0) * t;
    out.hessian = ((1.0 - q_) * std::pow(S, 1.0 / q_ - 2.0) * t * t.transpose() +
                   (q_ - 1.0) * std::pow(S, 1.0 / q_ - 1.0) * Mat(diag.asDiagonal())) /
                  scale;
    return out;
  }

  std::shared_ptr<const BodyModel> shifted(const std::shared_ptr<const BodyModel>& self,
                                           const Vec& c) const override;

  nlohmann::json describe() const override {
    return {{"dimension", dimension()},
            {"kind", "superellipsoid"},
            {"axes", to_std(axes_)},
            {"exponent", q_}};
  }

 private:
  double power_sum(const Vec& y) const {
    double s = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) s += std::pow(y(i), q_);
    return s;
  }

  Vec axes_;
  int q_;
};

// K - c for a body without a closed-form translate. L_c(v) = 1 / s where
// s > 0 solves L(c + s v) = 1. Derivatives follow from implicit
// differentiation: with w = c + v / L_c(v), G = dL(w), H = Hess L(w) and
// D = 1 - c.G,
//   dL_c = G / D,   Hess L_c = Q H Q^T / (L_c D),   Q = I + G c^T / D.
class TranslatedModel final : public BodyModel {
 public:
  TranslatedModel(std::shared_ptr<const BodyModel> base, Vec offset)
      : base_(std::move(base)), offset_(std::move(offset)) {}

  int dimension() const override { return base_->dimension(); }
  BodyKind kind() const override { return base_->kind(); }
  int derivative_order() const override { return 2; }

  double value(const Vec& v) const override { return 1.0 / boundary_parameter(v); }

  Vec gradient(const Vec& v) const override {
    const double s = boundary_parameter(v);
    const Vec G = base_->gradient(offset_ + s * v);
    return G / (1.0 - offset_.dot(G));
  }

  Jet jet(const Vec& v) const override {
    const int n = dimension();
    const double s = boundary_parameter(v);
    const Jet base = base_->jet(offset_ + s * v);
    const double D = 1.0 - offset_.dot(base.gradient);
    const Mat Q = Mat::Identity(n, n) + base.gradient * offset_.transpose() / D;
    Jet out;
    out.value = 1.0 / s;
    out.gradient = base.gradient / D;
    out.hessian = Q * base.hessian * Q.transpose() * (s / D);
    return out;
  }

  std::shared_ptr<const BodyModel> shifted(const std::shared_ptr<const BodyModel>&,
                                           const Vec& c) const override {
    return std::make_shared<TranslatedModel>(base_, offset_ + c);
  }

  nlohmann::json describe() const override {
    nlohmann::json j = base_->describe();
    j["center"] = to_std(-offset_);
    return j;
  }

 private:
  // Root of h(s) = L(c + s v) - 1 on s > 0. h(0) < 0 and h is convex for
  // convex bodies, so the root is unique: bracket, then Newton safeguarded
  // by bisection.
  double boundary_parameter(const Vec& v) const {
    auto h = [&](double s) { return base_->value(offset_ + s * v) - 1.0; };
    const double Lv = base_->value(v);
    double lo = std::max(1.0 - base_->value(offset_), 1e-3) / Lv;
    double hi = (1.0 + base_->value(-offset_)) / Lv;
    double h_lo = h(lo);
    for (int i = 0; i < 200 && h_lo > 0.0; ++i) {
      lo *= 0.5;
      h_lo = h(lo);
    }
    double h_hi = h(hi);
    for (int i = 0; i < 200 && h_hi < 0.0; ++i) {
      hi *= 2.0;
      h_hi = h(hi);
    }
    if (h_lo > 0.0 || h_hi < 0.0) {
      throw DomainError("translated body: failed to bracket the boundary");
    }
    if (h_lo == 0.0) return lo;
    if (h_hi == 0.0) return hi;

    double s = hi;
    double hs = h_hi;
    for (int iter = 0; iter < 100; ++iter) {
      const double slope = base_->gradient(offset_ + s * v).dot(v);
      double next = slope > 0.0 ? s - hs / slope : 0.5 * (lo + hi);
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      const double step = std::abs(next - s);
      s = next;
      hs = h(s);
      if (hs == 0.0) return s;
      if (hs < 0.0) {
        lo = s;
      } else {
        hi = s;
      }
      if (step <= 1e-13 * s || (hi - lo) <= 1e-15 * s) return s;
    }
    return s;
  }

  std::shared_ptr<const BodyModel> base_;
  Vec offset_;
};

std::shared_ptr<const BodyModel> Radial2dModel::shifted(
    const std::shared_ptr<const BodyModel>& self, const Vec& c) const {
  return std::make_shared<TranslatedModel>(self, c);
}

std::shared_ptr<const BodyModel> SuperellipsoidModel::shifted(
    const std::shared_ptr<const BodyModel>& self, const Vec& c) const {
  return std::make_shared<TranslatedModel>(self, c);
}

}  // namespace

ConvexBody::ConvexBody(std::shared_ptr<const BodyModel> model) : model_(std::move(model)) {
  if (!model_) throw DomainError("null body model");
  check_dimension(model_->dimension());
}

ConvexBody ConvexBody::ball(const Vec& center, double radius) {
  check_dimension(static_cast<int>(center.size()));
  if (!(radius > 0.0)) throw DomainError("ball radius must be positive");
  const int n = static_cast<int>(center.size());
  const Mat M = Mat::Identity(n, n) / (radius * radius);
  return ConvexBody(QuadricModel::from_ellipsoid(BodyKind::ball, M, center));
}

ConvexBody ConvexBody::ellipsoid(const Mat& A, const Vec& center) {
  check_dimension(static_cast<int>(A.rows()));
  require_spd(A, "ellipsoid matrix");
  if (center.size() != A.rows()) throw DomainError("ellipsoid center has wrong size");
  return ConvexBody(QuadricModel::from_ellipsoid(BodyKind::ellipsoid, A, center));
}

ConvexBody ConvexBody::ellipsoid_axes(const Vec& semi_axes, const Vec& center) {
  if ((semi_axes.array() <= 0.0).any()) {
    throw DomainError("ellipsoid semi-axes must be positive");
  }
  const Vec diag = semi_axes.array().square().inverse();
  return ellipsoid(Mat(diag.asDiagonal()), center);
}

ConvexBody ConvexBody::randers(const Mat& A, const Vec& b) {
  check_dimension(static_cast<int>(A.rows()));
  require_spd(A, "randers matrix");
  if (b.size() != A.rows()) throw DomainError("randers beta has wrong size");
  const double norm2 = b.dot(Eigen::LLT<Mat>(A).solve(b));
  if (!(norm2 < 1.0)) {
    throw DomainError("randers: b^T A^{-1} b must be < 1");
  }
  return ConvexBody(QuadricModel::from_randers(A, b));
}

ConvexBody ConvexBody::radial2d(double a0, std::vector<double> a, std::vector<double> b) {
  return ConvexBody(std::make_shared<Radial2dModel>(a0, std::move(a), std::move(b)));
}

ConvexBody ConvexBody::superellipsoid(const Vec& semi_axes, int exponent) {
  check_dimension(static_cast<int>(semi_axes.size()));
  if ((semi_axes.array() <= 0.0).any()) {
    throw DomainError("superellipsoid semi-axes must be positive");
  }
  if (exponent < 2 || exponent > 8 || exponent % 2 != 0) {
    throw DomainError("superellipsoid exponent must be one of 2, 4, 6, 8");
  }
  return ConvexBody(std::make_shared<SuperellipsoidModel>(semi_axes, exponent));
}

void ConvexBody::check_argument(const Vec& v) const {
  if (v.size() != dimension()) {
    throw DomainError("vector of size " + std::to_string(v.size()) +
                      " passed to a body of dimension " + std::to_string(dimension()));
  }
  if (!v.allFinite()) throw DomainError("non-finite vector");
  if (v.isZero(0.0)) throw DomainError("Minkowski functional evaluated at the zero vector");
}

double ConvexBody::minkowski(const Vec& v) const {
  check_argument(v);
  return model_->value(v);
}

Vec ConvexBody::gradient(const Vec& v) const {
  check_argument(v);
  return model_->gradient(v);
}

Mat ConvexBody::hessian(const Vec& v) const {
  check_argument(v);
  return model_->jet(v).hessian;
}

Jet ConvexBody::jet(const Vec& v) const {
  check_argument(v);
  return model_->jet(v);
}

Tensor3 ConvexBody::third(const Vec& v) const {
  check_argument(v);
  if (derivative_order() < 3) {
    throw DomainError("third derivatives are not available for " +
                      std::string(to_string(kind())) + " bodies");
  }
  return model_->third(v);
}

bool ConvexBody::is_interior(const Vec& p, double margin) const {
  if (p.size() != dimension() || !p.allFinite()) return false;
  if (p.isZero(0.0)) return true;
  return model_->value(p) <= 1.0 - margin;
}

void ConvexBody::require_interior(const Vec& p, double margin) const {
  if (p.size() != dimension()) {
    throw DomainError("point has wrong dimension");
  }
  if (!is_interior(p, margin)) {
    std::ostringstream os;
    os << "point (" << p.transpose() << ") is not interior: L(p) = "
       << (p.allFinite() ? model_->value(p) : std::nan("")) << " > 1 - " << margin;
    throw InteriorViolation(os.str());
  }
}

ConvexBody ConvexBody::translate(const Vec& c, double margin) const {
  require_interior(c, margin);
  if (c.isZero(0.0)) return *this;
  return ConvexBody(model_->shifted(model_, c));
}

RegularityReport validate(const ConvexBody& body, const SphereRule& rule) {
  if (rule.dimension() != body.dimension()) {
    throw DomainError("validate: rule and body dimensions differ");
  }
  RegularityReport report;
  report.min_metric_eigenvalue = std::numeric_limits<double>::infinity();
  report.max_metric_eigenvalue = 0.0;
  for (const Vec& u : rule.nodes()) {
    const Jet j = body.jet(u);
    const Mat g = j.value * j.hessian + j.gradient * j.gradient.transpose();
    Eigen::SelfAdjointEigenSolver<Mat> eig(g, Eigen::EigenvaluesOnly);
    const double lo = eig.eigenvalues().minCoeff();
    const double hi = eig.eigenvalues().maxCoeff();
    report.max_metric_eigenvalue = std::max(report.max_metric_eigenvalue, hi);
    if (lo < report.min_metric_eigenvalue) {
      report.min_metric_eigenvalue = lo;
      report.worst_node = u;
    }
  }
  // Eigenvalues at roundoff level are treated as exact zeros.
  if (std::abs(report.min_metric_eigenvalue) <= 1e-12 * report.max_metric_eigenvalue) {
    report.min_metric_eigenvalue = 0.0;
  }
  report.is_strongly_convex = report.min_metric_eigenvalue > 0.0;
  report.margin = report.min_metric_eigenvalue / report.max_metric_eigenvalue;
  return report;
}

namespace {

using nlohmann::json;

double get_number(const json& j, const std::string& what) {
  if (!j.is_number()) throw ConfigError("'" + what + "' must be a number");
  return j.get<double>();
}

Vec get_vector(const json& j, const std::string& what, int n) {
  if (!j.is_array() || static_cast<int>(j.size()) != n) {
    throw ConfigError("'" + what + "' must be an array of " + std::to_string(n) +
                      " numbers");
  }
  Vec v(n);
  for (int i = 0; i < n; ++i) v(i) = get_number(j[i], what);
  return v;
}

std::vector<double> get_list(const json& j, const std::string& what) {
  if (!j.is_array()) throw ConfigError("'" + what + "' must be an array");
  std::vector<double> out;
  for (const auto& x : j) out.push_back(get_number(x, what));
  return out;
}

Mat get_matrix(const json& j, const std::string& what, int n) {
  if (!j.is_array() || static_cast<int>(j.size()) != n) {
    throw ConfigError("'" + what + "' must be an " + std::to_string(n) + "x" +
                      std::to_string(n) + " array");
  }
  Mat m(n, n);
  for (int i = 0; i < n; ++i) m.row(i) = get_vector(j[i], what, n).transpose();
  return m;
}

void check_keys(const json& doc, const std::set<std::string>& allowed) {
  for (const auto& [key, value] : doc.items()) {
    if (!allowed.contains(key)) throw ConfigError("unknown key '" + key + "'");
  }
}

}  // namespace

ConvexBody body_from_json(const json& doc) {
  if (!doc.is_object()) throw ConfigError("body description must be a JSON object");
  if (!doc.contains("dimension")) throw ConfigError("missing 'dimension'");
  if (!doc.contains("kind") || !doc["kind"].is_string()) {
    throw ConfigError("missing or non-string 'kind'");
  }
  if (!doc["dimension"].is_number_integer()) {
    throw ConfigError("'dimension' must be an integer");
  }
  const int n = doc["dimension"].get<int>();
  if (n < 2 || n > kMaxDimension) {
    throw ConfigError("'dimension' must be in [2, " + std::to_string(kMaxDimension) + "]");
  }
  const std::string kind = doc["kind"].get<std::string>();
  const Vec center = doc.contains("center") ? get_vector(doc["center"], "center", n)
                                            : Vec(Vec::Zero(n));

  try {
    if (kind == "ball") {
      check_keys(doc, {"dimension", "kind", "center", "radius"});
      const double radius = doc.contains("radius") ? get_number(doc["radius"], "radius") : 1.0;
      return ConvexBody::ball(center, radius);
    }
    if (kind == "ellipsoid") {
      check_keys(doc, {"dimension", "kind", "center", "axes", "matrix"});
      if (doc.contains("axes") == doc.contains("matrix")) {
        throw ConfigError("ellipsoid needs exactly one of 'axes' or 'matrix'");
      }
      if (doc.contains("axes")) {
        return ConvexBody::ellipsoid_axes(get_vector(doc["axes"], "axes", n), center);
      }
      return ConvexBody::ellipsoid(get_matrix(doc["matrix"], "matrix", n), center);
    }

    ConvexBody base = [&]() {
      if (kind == "randers") {
        check_keys(doc, {"dimension", "kind", "center", "matrix", "beta"});
        if (!doc.contains("beta")) throw ConfigError("randers body needs 'beta'");
        const Mat A = doc.contains("matrix") ? get_matrix(doc["matrix"], "matrix", n)
                                             : Mat(Mat::Identity(n, n));
        return ConvexBody::randers(A, get_vector(doc["beta"], "beta", n));
      }
      if (kind == "radial2d") {
        check_keys(doc, {"dimension", "kind", "center", "fourier"});
        if (n != 2) throw ConfigError("radial2d bodies are planar (dimension 2)");
        if (!doc.contains("fourier") || !doc["fourier"].is_object()) {
          throw ConfigError("radial2d body needs a 'fourier' object");
        }
        const json& f = doc["fourier"];
        check_keys(f, {"a0", "a", "b"});
        if (!f.contains("a0")) throw ConfigError("'fourier' needs 'a0'");
        return ConvexBody::radial2d(get_number(f["a0"], "a0"),
                                    f.contains("a") ? get_list(f["a"], "a") : std::vector<double>{},
                                    f.contains("b") ? get_list(f["b"], "b") : std::vector<double>{});
      }
      if (kind == "superellipsoid") {
        check_keys(doc, {"dimension", "kind", "center", "axes", "exponent"});
        if (!doc.contains("axes") || !doc.contains("exponent")) {
          throw ConfigError("superellipsoid needs 'axes' and 'exponent'");
        }
        if (!doc["exponent"].is_number_integer()) {
          throw ConfigError("'exponent' must be an integer");
        }
        return ConvexBody::superellipsoid(get_vector(doc["axes"], "axes", n),
                                          doc["exponent"].get<int>());
      }
      throw ConfigError("unknown body kind '" + kind + "'");
    }();
    // A center c places the body at K + c, i.e. moves the origin to -c.
    return center.isZero(0.0) ? base : base.translate(-center, kDefaultMargin);
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(std::string("invalid ") + kind + " body: " + e.what());
  }
}

ConvexBody load_body(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open body file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("cannot parse '" + path + "': " + e.what());
  }
  return body_from_json(doc);
}

}  // namespace funk
