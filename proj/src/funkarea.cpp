#include "funk/funkarea.hpp"

#include "funk/errors.hpp"
#include "funk/metric.hpp"

#include <cmath>
#include <sstream>

namespace funk {

FunkContext::FunkContext(ConvexBody body, Vec base_point, double margin)
    : body_(std::move(body)),
      base_point_(std::move(base_point)),
      translated_(body_.translate(base_point_, margin)),
      margin_(margin) {}

double funk_norm(const FunkContext& ctx, const Vec& v) {
  return ctx.translated().minkowski(v);
}

Vec central_projection(const FunkContext& ctx, const Vec& v) {
  return ctx.base_point() + v / funk_norm(ctx, v);
}

Vec funk_gradient(const FunkContext& ctx, const Vec& v) {
  const Vec G = ctx.body().gradient(central_projection(ctx, v));
  return G / (1.0 - ctx.base_point().dot(G));
}

double conformal_factor(const FunkContext& ctx, const Vec& v) {
  const Vec G = ctx.body().gradient(central_projection(ctx, v));
  return 1.0 - ctx.base_point().dot(G);
}

std::vector<double> integrate_indicatrix(
    const FunkContext& ctx, const SphereRule& rule, Route route,
    std::size_t width, bool need_metric,
    const std::function<void(const FunkNode&, std::span<double>)>& eval) {
  const int n = ctx.dimension();
  if (rule.dimension() != n) throw DomainError("rule and body dimensions differ");
  const Vec& p = ctx.base_point();
  const double exponent = -0.5 * (n - 1);

  return integrate_sphere(rule, width, [&](const Vec& u, std::span<double> out) {
    FunkNode node;
    if (route == Route::direct) {
      const Jet j = ctx.translated().jet(u);
      node.density = volume_weight_from_jet(j, u);
      node.grad_F = j.gradient;
      if (need_metric) node.metric = metric_from_jet(j, u);
    } else {
      // u represents the point w = u / L(u) of dK and v_p = w - p of dK_p.
      const Jet j = ctx.body().jet(u);
      const double D = 1.0 - p.dot(j.gradient);
      if (!(D > 0.0)) {
        throw InteriorViolation("conformal factor is not positive; base point too close to the boundary");
      }
      node.density = volume_weight_from_jet(j, u) * std::pow(D, exponent);
      node.grad_F = j.gradient / D;
      if (need_metric) {
        const Mat Q = Mat::Identity(n, n) + j.gradient * p.transpose() / D;
        const Mat hess_F = Q * (j.hessian * j.value) * Q.transpose() / D;
        node.metric = hess_F + node.grad_F * node.grad_F.transpose();
      }
    }
    eval(node, out);
    for (double& x : out) x *= node.density;
  });
}

double area(const FunkContext& ctx, const SphereRule& rule, Route method) {
  if (method == Route::direct) {
    return indicatrix_integral(ctx.translated(), [](const Vec&) { return 1.0; }, rule);
  }
  const Vec& p = ctx.base_point();
  const double exponent = -0.5 * (ctx.dimension() - 1);
  return indicatrix_integral(
      ctx.body(),
      [&](const Vec& u) {
        const double D = 1.0 - p.dot(ctx.body().gradient(u));
        if (!(D > 0.0)) {
          throw InteriorViolation("conformal factor is not positive");
        }
        return std::pow(D, exponent);
      },
      rule);
}

double cm_coefficient(int dimension, int order) {
  if (order < 0) throw DomainError("derivative order must be non-negative");
  double c = 1.0;
  for (int j = 0; j < order; ++j) c *= ((dimension - 1) + 2.0 * j) / 2.0;
  return c;
}

int multi_index_order(const MultiIndex& alpha) {
  int m = 0;
  for (int a : alpha) {
    if (a < 0) throw DomainError("multi-index entries must be non-negative");
    m += a;
  }
  return m;
}

std::uint64_t multi_index_factorial(const MultiIndex& alpha) {
  std::uint64_t f = 1;
  for (int a : alpha) {
    for (int k = 2; k <= a; ++k) f *= static_cast<std::uint64_t>(k);
  }
  return f;
}

std::vector<MultiIndex> multi_indices(int dimension, int max_order) {
  std::vector<MultiIndex> out;
  MultiIndex alpha(dimension, 0);
  // For each total order m, enumerate compositions in lexicographically
  // decreasing order of alpha (x^m first, ..., z^m last).
  for (int m = 0; m <= max_order; ++m) {
    std::function<void(int, int)> fill = [&](int pos, int left) {
      if (pos == dimension - 1) {
        alpha[pos] = left;
        out.push_back(alpha);
        return;
      }
      for (int a = left; a >= 0; --a) {
        alpha[pos] = a;
        fill(pos + 1, left - a);
      }
    };
    fill(0, m);
  }
  return out;
}

namespace {

void check_alpha(const MultiIndex& alpha, int dimension, int cap) {
  if (static_cast<int>(alpha.size()) != dimension) {
    throw DomainError("multi-index length must equal the dimension");
  }
  const int m = multi_index_order(alpha);
  if (m > cap) {
    throw DomainError("derivative order " + std::to_string(m) + " exceeds the cap " +
                      std::to_string(cap));
  }
}

double monomial(const Vec& x, const MultiIndex& alpha) {
  double v = 1.0;
  for (std::size_t k = 0; k < alpha.size(); ++k) {
    for (int e = 0; e < alpha[k]; ++e) v *= x(static_cast<Eigen::Index>(k));
  }
  return v;
}

}  // namespace

double area_derivative(const FunkContext& ctx, const SphereRule& rule,
                       const MultiIndex& alpha, Route route) {
  check_alpha(alpha, ctx.dimension(), kMaxDerivativeOrder);
  const auto sums = integrate_indicatrix(
      ctx, rule, route, 1, false,
      [&](const FunkNode& node, std::span<double> out) { out[0] = monomial(node.grad_F, alpha); });
  return cm_coefficient(ctx.dimension(), multi_index_order(alpha)) * sums[0];
}

AreaJet area_jet(const FunkContext& ctx, const SphereRule& rule, Route route) {
  const int n = ctx.dimension();
  const std::size_t width = 1 + n + n * n;
  const auto sums = integrate_indicatrix(
      ctx, rule, route, width, false, [&](const FunkNode& node, std::span<double> out) {
        out[0] = 1.0;
        for (int i = 0; i < n; ++i) {
          out[1 + i] = node.grad_F(i);
          for (int j = 0; j <= i; ++j) out[1 + n + i * n + j] = node.grad_F(i) * node.grad_F(j);
        }
      });
  AreaJet jet;
  jet.area = sums[0];
  jet.gradient = Vec(n);
  jet.hessian = Mat(n, n);
  const double c1 = cm_coefficient(n, 1);
  const double c2 = cm_coefficient(n, 2);
  for (int i = 0; i < n; ++i) {
    jet.gradient(i) = c1 * sums[1 + i];
    for (int j = 0; j <= i; ++j) {
      jet.hessian(i, j) = jet.hessian(j, i) = c2 * sums[1 + n + i * n + j];
    }
  }
  return jet;
}

Vec area_gradient(const FunkContext& ctx, const SphereRule& rule, Route route) {
  const int n = ctx.dimension();
  const auto sums = integrate_indicatrix(
      ctx, rule, route, n, false,
      [&](const FunkNode& node, std::span<double> out) {
        for (int i = 0; i < n; ++i) out[i] = node.grad_F(i);
      });
  return Eigen::Map<const Vec>(sums.data(), n) * cm_coefficient(n, 1);
}

Mat area_hessian(const FunkContext& ctx, const SphereRule& rule, Route route) {
  const int n = ctx.dimension();
  const auto sums = integrate_indicatrix(
      ctx, rule, route, n * n, false, [&](const FunkNode& node, std::span<double> out) {
        for (int i = 0; i < n; ++i) {
          for (int j = 0; j <= i; ++j) out[i * n + j] = node.grad_F(i) * node.grad_F(j);
        }
      });
  Mat h(n, n);
  const double c2 = cm_coefficient(n, 2);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) h(i, j) = h(j, i) = c2 * sums[i * n + j];
  }
  return h;
}

TaylorModel::TaylorModel(FunkContext center_context, int order,
                         std::vector<MultiIndex> indices,
                         std::vector<double> coefficients, double guard)
    : context_(std::move(center_context)),
      order_(order),
      indices_(std::move(indices)),
      coefficients_(std::move(coefficients)),
      guard_(guard) {
  if (indices_.size() != coefficients_.size()) {
    throw DomainError("Taylor model: index and coefficient tables differ");
  }
}

double TaylorModel::coefficient(const MultiIndex& alpha) const {
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    if (indices_[i] == alpha) return coefficients_[i];
  }
  throw DomainError("multi-index not present in the Taylor model");
}

bool TaylorModel::in_domain(const Vec& p) const {
  if (p.size() != dimension() || !p.allFinite()) return false;
  const Vec q = p - center();
  if (q.isZero(0.0)) return true;
  const ConvexBody& local = context_.translated();
  return local.minkowski(q) < 1.0 - guard_ && local.minkowski(-q) < 1.0 - guard_;
}

double TaylorModel::evaluate(const Vec& p, int max_order) const {
  if (max_order < 0) max_order = order_;
  const Vec q = p - center();
  CompensatedSum sum;
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    if (multi_index_order(indices_[i]) > max_order) continue;
    sum.add(coefficients_[i] * monomial(q, indices_[i]));
  }
  return sum.value();
}

TaylorModel taylor_build(const ConvexBody& body, const Vec& center, int order,
                         const SphereRule& rule, Route route) {
  if (order < 0 || order > kMaxTaylorOrder) {
    throw DomainError("Taylor order must be in [0, " + std::to_string(kMaxTaylorOrder) + "]");
  }
  FunkContext ctx(body, center);
  const int n = body.dimension();
  auto indices = multi_indices(n, order);
  const auto sums = integrate_indicatrix(
      ctx, rule, route, indices.size(), false,
      [&](const FunkNode& node, std::span<double> out) {
        // powers[k][e] = (dF/dy^k)^e
        std::vector<std::vector<double>> powers(n, std::vector<double>(order + 1, 1.0));
        for (int k = 0; k < n; ++k) {
          for (int e = 1; e <= order; ++e) powers[k][e] = powers[k][e - 1] * node.grad_F(k);
        }
        for (std::size_t i = 0; i < indices.size(); ++i) {
          double v = 1.0;
          for (int k = 0; k < n; ++k) v *= powers[k][indices[i][k]];
          out[i] = v;
        }
      });
  std::vector<double> coefficients(indices.size());
  for (std::size_t i = 0; i < indices.size(); ++i) {
    const int m = multi_index_order(indices[i]);
    coefficients[i] = cm_coefficient(n, m) * sums[i] /
                      static_cast<double>(multi_index_factorial(indices[i]));
  }
  return TaylorModel(std::move(ctx), order, std::move(indices), std::move(coefficients));
}

double taylor_eval(const TaylorModel& model, const Vec& p) {
  if (!model.in_domain(p)) {
    std::ostringstream os;
    os << "point (" << p.transpose()
       << ") is outside the convergence guard of the Taylor model centered at ("
       << model.center().transpose() << ")";
    throw DomainError(os.str());
  }
  return model.evaluate(p);
}

AveragedMetrics averaged_metrics(const FunkContext& ctx, const SphereRule& rule, Route route) {
  const int n = ctx.dimension();
  const int nn = n * n;
  const auto sums = integrate_indicatrix(
      ctx, rule, route, 1 + n + 3 * nn, true, [&](const FunkNode& node, std::span<double> out) {
        out[0] = 1.0;
        for (int i = 0; i < n; ++i) {
          out[1 + i] = node.grad_F(i);
          for (int j = 0; j < n; ++j) {
            const double outer = node.grad_F(i) * node.grad_F(j);
            out[1 + n + i * n + j] = node.metric(i, j);
            out[1 + n + nn + i * n + j] = node.metric(i, j) - outer;
            out[1 + n + 2 * nn + i * n + j] = outer;
          }
        }
      });
  AveragedMetrics avg;
  avg.area = sums[0];
  avg.beta = Eigen::Map<const Vec>(sums.data() + 1, n);
  avg.gamma1 = Eigen::Map<const Mat>(sums.data() + 1 + n, n, n);
  avg.gamma2 = Eigen::Map<const Mat>(sums.data() + 1 + n + nn, n, n);
  avg.gamma3 = Eigen::Map<const Mat>(sums.data() + 1 + n + 2 * nn, n, n);
  return avg;
}

RandersFunctional::RandersFunctional(Mat gamma, Vec linear)
    : gamma_(std::move(gamma)), linear_(std::move(linear)) {}

double RandersFunctional::operator()(const Vec& v) const {
  return std::sqrt(v.dot(gamma_ * v)) + linear_.dot(v);
}

RandersFunctional associated_randers(const AveragedMetrics& averages, AveragedKind which) {
  const Mat& gamma = which == AveragedKind::F1 ? averages.gamma1 : averages.gamma3;
  return RandersFunctional(gamma / averages.area, averages.beta / averages.area);
}

RandersFunctional associated_randers(const FunkContext& ctx, const SphereRule& rule,
                                     AveragedKind which, Route route) {
  return associated_randers(averaged_metrics(ctx, rule, route), which);
}

}  // namespace funk
