#include "funk/reference.hpp"

#include "funk/errors.hpp"
#include "funk/random.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <thread>
#include <vector>

namespace funk::reference {

namespace {

constexpr int kShards = 16;
constexpr double kBoxPadding = 0.02;

void check_speed(double s) {
  if (!(s >= 0.0 && s < 1.0)) {
    throw DomainError("closed-form ball area needs 0 <= s < 1, got " + std::to_string(s));
  }
}

// Midpoint rule on [0, 2 pi), doubled until the relative change is tiny.
double ball_area_2d(double s) {
  const double pi = std::numbers::pi;
  auto integrand = [s](double t) { return 1.0 / std::sqrt(1.0 - s * std::sin(t)); };
  int count = 16;
  double previous = 0.0;
  for (int k = 0; k < 16; ++k) {
    const double h = 2.0 * pi / count;
    double sum = 0.0;
    for (int i = 0; i < count; ++i) sum += integrand((i + 0.5) * h);
    const double current = sum * h;
    if (k > 0 && std::abs(current - previous) <= 1e-13 * std::abs(current)) return current;
    previous = current;
    count *= 2;
  }
  throw ConvergenceError("2-D ball oracle did not converge at s = " + std::to_string(s));
}

struct Box {
  Vec lo, hi;
};

// Extent of K along each axis from boundary points u / L(u).
Box bounding_box(const ConvexBody& body, std::uint64_t seed) {
  const int n = body.dimension();
  Box box{Vec::Zero(n), Vec::Zero(n)};
  auto include = [&](const Vec& u) {
    const Vec x = u / body.minkowski(u);
    box.lo = box.lo.cwiseMin(x);
    box.hi = box.hi.cwiseMax(x);
  };
  for (int i = 0; i < n; ++i) {
    include(Vec::Unit(n, i));
    include(-Vec::Unit(n, i));
  }
  Rng rng(sub_seed(seed, 0xb0b));
  for (int k = 0; k < 20000 * n; ++k) {
    Vec u(n);
    for (int i = 0; i < n; ++i) u(i) = rng.normal();
    if (u.norm() > 1e-12) include(u);
  }
  const Vec pad = kBoxPadding * (box.hi - box.lo);
  box.lo -= pad;
  box.hi += pad;
  return box;
}

double sqrt_det_metric(const ConvexBody& body, const Vec& x) {
  const Jet j = body.jet(x);
  const Mat g = j.value * j.hessian + j.gradient * j.gradient.transpose();
  return std::sqrt(std::max(g.determinant(), 0.0));
}

struct ShardSums {
  double sum = 0.0;
  double sum_sq = 0.0;
  std::size_t accepted = 0;
};

}  // namespace

void OracleConfig::check() const {
  if (sample_count < 10'000) throw ConfigError("oracle sample_count must be at least 1e4");
  if (!(fd_step > 0.0 && fd_step <= 1e-2)) throw ConfigError("oracle fd_step must lie in (0, 1e-2]");
}

double ball_funk_area_closed(int dimension, double s) {
  check_speed(s);
  if (dimension == 3) {
    if (s == 0.0) return 4.0 * std::numbers::pi;
    return 2.0 * std::numbers::pi / s * std::log1p(2.0 * s / (1.0 - s));
  }
  if (dimension == 2) return ball_area_2d(s);
  throw DomainError("closed-form ball area exists for n = 2, 3 only");
}

double ball_funk_area_closed_derivative3(double s) {
  check_speed(s);
  const double pi = std::numbers::pi;
  if (s == 0.0) return 0.0;
  // r(s) = 4 pi atanh(s) / s
  return 4.0 * pi * (1.0 / (s * (1.0 - s * s)) - std::atanh(s) / (s * s));
}

MonteCarloEstimate montecarlo_body_integral(const ConvexBody& body,
                                            const std::function<double(const Vec&)>& f,
                                            const OracleConfig& cfg) {
  cfg.check();
  const int n = body.dimension();
  const Box box = bounding_box(body, cfg.seed);
  const double volume = (box.hi - box.lo).prod();

  std::array<ShardSums, kShards> shards{};
  std::vector<std::thread> workers;
  for (int s = 0; s < kShards; ++s) {
    const std::size_t begin = cfg.sample_count * s / kShards;
    const std::size_t end = cfg.sample_count * (s + 1) / kShards;
    workers.emplace_back([&, s, begin, end] {
      Rng rng(sub_seed(cfg.seed, static_cast<std::uint64_t>(s)));
      ShardSums local;
      Vec x(n);
      for (std::size_t i = begin; i < end; ++i) {
        for (int k = 0; k < n; ++k) x(k) = rng.uniform(box.lo(k), box.hi(k));
        if (x.norm() == 0.0 || body.minkowski(x) > 1.0) continue;
        const double y = f(x) * sqrt_det_metric(body, x);
        local.sum += y;
        local.sum_sq += y * y;
        ++local.accepted;
      }
      shards[s] = local;
    });
  }
  for (auto& w : workers) w.join();

  ShardSums total;
  for (const auto& s : shards) {
    total.sum += s.sum;
    total.sum_sq += s.sum_sq;
    total.accepted += s.accepted;
  }
  const double N = static_cast<double>(cfg.sample_count);
  MonteCarloEstimate est;
  est.accepted = total.accepted;
  est.acceptance_rate = total.accepted / N;
  if (est.acceptance_rate < 1e-3) {
    throw DomainError("Monte Carlo acceptance rate below 1e-3; bounding box too loose");
  }
  // Samples are y * 1_K over the box, so the mean and variance run over all N.
  const double mean = total.sum / N;
  const double variance = std::max(total.sum_sq / N - mean * mean, 0.0) * N / (N - 1.0);
  est.estimate = volume * mean;
  est.standard_error = volume * std::sqrt(variance / N);
  return est;
}

FdEstimate finite_difference(const std::function<double(double)>& f, double x, int order,
                             const OracleConfig& cfg) {
  if (order != 1 && order != 2) throw DomainError("finite_difference order must be 1 or 2");
  if (!(cfg.fd_step > 0.0)) throw DomainError("finite_difference step must be positive");
  auto stencil = [&](double h) {
    if (h <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x))) {
      throw DomainError("finite_difference step underflow");
    }
    if (order == 1) return (f(x + h) - f(x - h)) / (2.0 * h);
    return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
  };
  const double h = cfg.fd_step;
  const std::array<double, 3> d{stencil(h), stencil(0.5 * h), stencil(0.25 * h)};
  // Error expansions are in h^2, h^4.
  const double r1a = (4.0 * d[1] - d[0]) / 3.0;
  const double r1b = (4.0 * d[2] - d[1]) / 3.0;
  const double r2 = (16.0 * r1b - r1a) / 15.0;
  return {r2, std::abs(r2 - r1b)};
}

Vec fd_gradient(const std::function<double(const Vec&)>& f, const Vec& x,
                const OracleConfig& cfg) {
  Vec g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    g(i) = finite_difference(
               [&](double t) {
                 Vec y = x;
                 y(i) = t;
                 return f(y);
               },
               x(i), 1, cfg)
               .value;
  }
  return g;
}

Mat fd_jacobian(const std::function<Vec(const Vec&)>& f, const Vec& x,
                const OracleConfig& cfg) {
  if (!(cfg.fd_step > 0.0)) throw DomainError("finite_difference step must be positive");
  Mat J;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    auto stencil = [&](double h) {
      if (h <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x(i)))) {
        throw DomainError("finite_difference step underflow");
      }
      Vec plus = x, minus = x;
      plus(i) += h;
      minus(i) -= h;
      return Vec((f(plus) - f(minus)) / (2.0 * h));
    };
    const double h = cfg.fd_step;
    const Vec d0 = stencil(h), d1 = stencil(0.5 * h), d2 = stencil(0.25 * h);
    const Vec r1a = (4.0 * d1 - d0) / 3.0;
    const Vec r1b = (4.0 * d2 - d1) / 3.0;
    if (i == 0) J.resize(d0.size(), x.size());
    J.col(i) = (16.0 * r1b - r1a) / 15.0;
  }
  return J;
}

}  // namespace funk::reference
