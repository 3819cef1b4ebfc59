#include "funk/quadrature.hpp"

#include "funk/errors.hpp"
#include "funk/metric.hpp"
#include "funk/random.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace funk {

void CompensatedSum::add(double x) {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x)) {
    carry_ += (sum_ - t) + x;
  } else {
    carry_ += (x - t) + sum_;
  }
  sum_ = t;
}

SphereRule::SphereRule(int dimension, std::vector<Vec> nodes,
                       std::vector<double> weights, int resolution,
                       int exact_degree, bool monte_carlo)
    : dimension_(dimension),
      nodes_(std::move(nodes)),
      weights_(std::move(weights)),
      resolution_(resolution),
      exact_degree_(exact_degree),
      monte_carlo_(monte_carlo) {
  if (nodes_.size() != weights_.size()) {
    throw DomainError("sphere rule: nodes and weights differ in length");
  }
}

int default_resolution(int dimension) {
  switch (dimension) {
    case 2:
      return kDefaultResolution2d;
    case 3:
      return kDefaultResolution3d;
    default:
      return kDefaultSamples4d;
  }
}

double sphere_area(int dimension) {
  // 2 pi^(n/2) / Gamma(n/2)
  return 2.0 * std::pow(std::numbers::pi, 0.5 * dimension) / std::tgamma(0.5 * dimension);
}

void gauss_legendre(int count, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(count, 0.0);
  weights.assign(count, 0.0);
  const int half = (count + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (count + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= count; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = count * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) <= 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes[i] = -x;
    nodes[count - 1 - i] = x;
    weights[i] = w;
    weights[count - 1 - i] = w;
  }
}

SphereRule build_rule(int dimension, int resolution, std::uint64_t seed) {
  if (resolution < 8) throw DomainError("sphere rule resolution must be at least 8");
  std::vector<Vec> nodes;
  std::vector<double> weights;
  const double pi = std::numbers::pi;

  if (dimension == 2) {
    nodes.reserve(resolution);
    for (int k = 0; k < resolution; ++k) {
      const double t = 2.0 * pi * k / resolution;
      Vec u(2);
      u << std::cos(t), std::sin(t);
      nodes.push_back(u);
      weights.push_back(2.0 * pi / resolution);
    }
    return SphereRule(2, std::move(nodes), std::move(weights), resolution,
                      resolution - 1, false);
  }

  if (dimension == 3) {
    std::vector<double> x, w;
    gauss_legendre(resolution, x, w);
    const int azimuths = 2 * resolution;
    nodes.reserve(static_cast<std::size_t>(resolution) * azimuths);
    for (int i = 0; i < resolution; ++i) {
      const double sin_theta = std::sqrt(1.0 - x[i] * x[i]);
      for (int j = 0; j < azimuths; ++j) {
        const double phi = 2.0 * pi * j / azimuths;
        Vec u(3);
        u << sin_theta * std::cos(phi), sin_theta * std::sin(phi), x[i];
        nodes.push_back(u);
        weights.push_back(w[i] * 2.0 * pi / azimuths);
      }
    }
    return SphereRule(3, std::move(nodes), std::move(weights), resolution,
                      2 * resolution - 1, false);
  }

  if (dimension == 4) {
    Rng rng(seed);
    const double w = sphere_area(4) / resolution;
    nodes.reserve(resolution);
    for (int k = 0; k < resolution; ++k) {
      Vec u(4);
      do {
        for (int i = 0; i < 4; ++i) u(i) = rng.normal();
      } while (u.norm() < 1e-12);
      nodes.push_back(u.normalized());
      weights.push_back(w);
    }
    return SphereRule(4, std::move(nodes), std::move(weights), resolution, -1, true);
  }

  throw DomainError("sphere rules exist for dimensions 2, 3 and 4, got " +
                    std::to_string(dimension));
}

std::vector<double> integrate_sphere(
    const SphereRule& rule, std::size_t width,
    const std::function<void(const Vec& node, std::span<double> out)>& eval) {
  std::vector<CompensatedSum> sums(width);
  std::vector<double> buffer(width);
  const auto& nodes = rule.nodes();
  const auto& weights = rule.weights();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    std::fill(buffer.begin(), buffer.end(), 0.0);
    eval(nodes[i], buffer);
    for (std::size_t k = 0; k < width; ++k) sums[k].add(weights[i] * buffer[k]);
  }
  std::vector<double> out(width);
  for (std::size_t k = 0; k < width; ++k) out[k] = sums[k].value();
  return out;
}

IntegralEstimate indicatrix_integral_estimate(const ConvexBody& body,
                                              const ZeroHomogeneousField& f,
                                              const SphereRule& rule) {
  if (rule.dimension() != body.dimension()) {
    throw DomainError("rule and body dimensions differ");
  }
  // Samples of density * f, plus their squares for the Monte Carlo error.
  const auto sums = integrate_sphere(rule, 2, [&](const Vec& u, std::span<double> out) {
    const double x = volume_weight(body, u) * f(u);
    out[0] = x;
    out[1] = x * x;
  });
  IntegralEstimate est;
  est.value = sums[0];
  if (rule.monte_carlo()) {
    const double N = static_cast<double>(rule.size());
    const double omega = sphere_area(rule.dimension());
    const double mean = sums[0] / omega;
    const double mean_sq = sums[1] / omega;
    const double variance = std::max(mean_sq - mean * mean, 0.0) * N / (N - 1.0);
    est.standard_error = omega * std::sqrt(variance / N);
  }
  return est;
}

double indicatrix_integral(const ConvexBody& body, const ZeroHomogeneousField& f,
                           const SphereRule& rule) {
  return indicatrix_integral_estimate(body, f, rule).value;
}

double body_integral(const ConvexBody& body, const ZeroHomogeneousField& f,
                     const SphereRule& rule) {
  return indicatrix_integral(body, f, rule) / body.dimension();
}

}  // namespace funk
