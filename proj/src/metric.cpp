#include "funk/metric.hpp"

#include "funk/errors.hpp"

#include <cmath>
#include <sstream>

namespace funk {

namespace {

constexpr double kDegenerateRatio = 1e-12;
constexpr double kCartanAnalyticTol = 1e-8;
constexpr double kCartanFiniteDiffTol = 1e-4;

[[noreturn]] void throw_degenerate(const Vec& direction) {
  std::ostringstream os;
  os << "metric tensor is not positive definite at direction ("
     << direction.transpose() << ")";
  throw RegularityError(os.str());
}

// Cholesky factor of g, with pivots at roundoff level counted as failure.
Eigen::LLT<Mat> checked_cholesky(const Mat& g, const Vec& direction) {
  Eigen::LLT<Mat> llt(g);
  if (llt.info() != Eigen::Success) throw_degenerate(direction);
  const Vec pivots = Mat(llt.matrixL()).diagonal();
  if (pivots.array().square().minCoeff() <= kDegenerateRatio * g.trace()) {
    throw_degenerate(direction);
  }
  return llt;
}

Tensor3 cartan_analytic(const ConvexBody& body, const Vec& v) {
  const int n = body.dimension();
  const Jet j = body.jet(v);
  const Tensor3 d3 = body.third(v);
  Tensor3 c(n, Mat::Zero(n, n));
  for (int k = 0; k < n; ++k) {
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        c[k](a, b) = 0.5 * (j.value * d3[k](a, b) + j.hessian(a, b) * j.gradient(k) +
                            j.hessian(a, k) * j.gradient(b) +
                            j.hessian(b, k) * j.gradient(a));
      }
    }
  }
  return c;
}

// 1/2 dg/dy^k by central differences with one Richardson step.
Tensor3 cartan_finite_difference(const ConvexBody& body, const Vec& v) {
  const int n = body.dimension();
  const double h = 1e-4 * v.norm();
  auto g_at = [&](const Vec& y) {
    const Jet j = body.jet(y);
    return Mat(j.value * j.hessian + j.gradient * j.gradient.transpose());
  };
  auto central = [&](int k, double step) {
    Vec plus = v, minus = v;
    plus(k) += step;
    minus(k) -= step;
    return Mat((g_at(plus) - g_at(minus)) / (2.0 * step));
  };
  Tensor3 c(n);
  for (int k = 0; k < n; ++k) {
    const Mat coarse = central(k, h);
    const Mat fine = central(k, 0.5 * h);
    c[k] = 0.5 * (4.0 * fine - coarse) / 3.0;
  }
  return c;
}

}  // namespace

Mat metric_from_jet(const Jet& jet, const Vec& direction) {
  Mat g = jet.value * jet.hessian + jet.gradient * jet.gradient.transpose();
  g = 0.5 * (g + g.transpose());
  checked_cholesky(g, direction);
  return g;
}

MetricSample metric_tensor(const ConvexBody& body, const Vec& v) {
  const Jet j = body.jet(v);
  MetricSample s;
  s.direction = v;
  s.g = metric_from_jet(j, v);
  s.grad_L = j.gradient;
  s.L = j.value;
  return s;
}

AngularSample angular_metric(const ConvexBody& body, const Vec& v) {
  const MetricSample s = metric_tensor(body, v);
  return {s.g - s.grad_L * s.grad_L.transpose()};
}

Tensor3 cartan_tensor(const ConvexBody& body, const Vec& v, CartanMode mode) {
  if (mode == CartanMode::analytic) return cartan_analytic(body, v);
  return cartan_finite_difference(body, v);
}

CartanTrace cartan_trace(const ConvexBody& body, const Vec& v, CartanMode mode) {
  const int n = body.dimension();
  const MetricSample s = metric_tensor(body, v);
  const Tensor3 c = cartan_tensor(body, v, mode);
  const Mat g_inv = s.g.inverse();

  CartanTrace out;
  out.mode = mode;
  out.C = Vec::Zero(n);
  Mat contracted = Mat::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      // C_ijk is symmetric, so the k-slice holds C_{i,j,k} for all i, j.
      out.C(i) += (g_inv.row(k) * c[k].col(i))(0);
      contracted.row(i) += v(k) * c[k].row(i);
    }
  }
  out.euler_residual = contracted.cwiseAbs().maxCoeff() / s.g.norm();
  const double tol =
      mode == CartanMode::analytic ? kCartanAnalyticTol : kCartanFiniteDiffTol;
  if (!(out.euler_residual <= tol)) {
    std::ostringstream os;
    os << "Cartan tensor fails y^k C_ijk = 0 at (" << v.transpose()
       << "): residual " << out.euler_residual;
    throw RegularityError(os.str());
  }
  return out;
}

CartanTrace cartan_trace(const ConvexBody& body, const Vec& v,
                         bool allow_finite_difference) {
  if (body.derivative_order() >= 3) return cartan_trace(body, v, CartanMode::analytic);
  if (!allow_finite_difference) {
    throw DomainError(std::string(to_string(body.kind())) +
                      " bodies have no analytic third derivatives; enable "
                      "finite-difference mode");
  }
  return cartan_trace(body, v, CartanMode::finite_difference);
}

double volume_weight_from_jet(const Jet& jet, const Vec& u) {
  const int n = static_cast<int>(u.size());
  Mat g = jet.value * jet.hessian + jet.gradient * jet.gradient.transpose();
  g = 0.5 * (g + g.transpose());
  const Eigen::LLT<Mat> llt = checked_cholesky(g, u);
  const double half_log_det = Mat(llt.matrixL()).diagonal().array().log().sum();
  const double log_phi = std::log(u.norm()) - std::log(jet.value);
  return std::exp(n * log_phi + half_log_det);
}

double volume_weight(const ConvexBody& body, const Vec& u) {
  return volume_weight_from_jet(body.jet(u), u);
}

}  // namespace funk
