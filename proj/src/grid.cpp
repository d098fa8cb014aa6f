#include "wavedof/grid.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace wavedof::rankcheck {

QuadratureRule gauss_legendre(int n, double a, double b) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: need at least one node");
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const int roots = (n + 1) / 2;
  for (int i = 0; i < roots; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
      }
      dp = n * (z * p1 - p2) / (z * z - 1.0);
      const double step = p1 / dp;
      z -= step;
      if (std::abs(step) < 1e-16) break;
    }
    // Recompute the derivative at the converged root for the weight.
    {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
      }
      dp = n * (z * p1 - p2) / (z * z - 1.0);
    }
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    rule.nodes[i] = mid - half * z;
    rule.nodes[n - 1 - i] = mid + half * z;
    rule.weights[i] = half * w;
    rule.weights[n - 1 - i] = half * w;
  }
  return rule;
}

double SpaceTimeGrid::total_weight() const {
  const double s = std::accumulate(space_weights.begin(), space_weights.end(), 0.0);
  const double t = std::accumulate(time_weights.begin(), time_weights.end(), 0.0);
  return s * t;
}

SpaceTimeGrid build_space_grid(Dimension dim, double radius, GridResolution resolution) {
  if (resolution.radial < 1 || resolution.angular < 1 || resolution.time < 1)
    throw std::invalid_argument("grid resolution counts must be >= 1");
  if (!(radius > 0.0)) throw ConfigError("grid requires R > 0");

  SpaceTimeGrid grid;
  grid.dim = dim;
  grid.resolution = resolution;
  grid.radius = radius;

  const QuadratureRule radial = gauss_legendre(resolution.radial, 0.0, radius);
  const int n_az = resolution.angular;
  const double w_az = 2.0 * std::numbers::pi / n_az;

  if (dim == Dimension::ThreeD) {
    const QuadratureRule polar = gauss_legendre((resolution.angular + 1) / 2, -1.0, 1.0);
    for (std::size_t ir = 0; ir < radial.nodes.size(); ++ir) {
      const double r = radial.nodes[ir];
      const double wr = radial.weights[ir] * r * r;
      for (std::size_t ip = 0; ip < polar.nodes.size(); ++ip) {
        const double u = polar.nodes[ip];
        const double s = std::sqrt((1.0 - u) * (1.0 + u));
        for (int ia = 0; ia < n_az; ++ia) {
          const double phi = w_az * ia;
          grid.space_nodes.push_back({r * s * std::cos(phi), r * s * std::sin(phi), r * u});
          grid.space_weights.push_back(wr * polar.weights[ip] * w_az);
        }
      }
    }
  } else {
    for (std::size_t ir = 0; ir < radial.nodes.size(); ++ir) {
      const double r = radial.nodes[ir];
      const double wr = radial.weights[ir] * r;
      for (int ia = 0; ia < n_az; ++ia) {
        const double phi = w_az * ia;
        grid.space_nodes.push_back({r * std::cos(phi), r * std::sin(phi), 0.0});
        grid.space_weights.push_back(wr * w_az);
      }
    }
  }

  grid.time_nodes = {0.0};
  grid.time_weights = {1.0};
  return grid;
}

SpaceTimeGrid build_grid(Dimension dim, const PhysicalConfig& cfg, GridResolution resolution) {
  cfg.validate();
  if (!(cfg.radius > 0.0) || !(cfg.duration > 0.0))
    throw ConfigError("grid requires a region of nonzero measure (R > 0 and T > 0)");
  SpaceTimeGrid grid = build_space_grid(dim, cfg.radius, resolution);
  const QuadratureRule time = gauss_legendre(resolution.time, 0.0, cfg.duration);
  grid.time_nodes = time.nodes;
  grid.time_weights = time.weights;
  grid.duration = cfg.duration;
  return grid;
}

}  // namespace wavedof::rankcheck
