#pragma once

// Tensor-product quadrature over the observation region (ball or disk of
// radius R) times the time window [0, T].
//
// Node layout
//   radial   n_radial Gauss-Legendre nodes on [0, R], weighted by r^2 (3D) or r (2D)
//   angular  3D: (n_angular + 1) / 2 Gauss-Legendre nodes in cos(theta) times
//            n_angular uniform azimuths; 2D: n_angular uniform azimuths
//   time     n_time Gauss-Legendre nodes on [0, T]
// With n_angular >= 2L + 1 products of harmonics up to degree L integrate
// exactly over the angles.

#include <cstddef>
#include <vector>

#include "wavedof/config.hpp"
#include "wavedof/geometry.hpp"

namespace wavedof::rankcheck {

struct GridResolution {
  int radial = 1;
  int angular = 1;
  int time = 1;

  GridResolution doubled() const { return {2 * radial, 2 * angular, 2 * time}; }
  bool operator==(const GridResolution&) const = default;
};

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [a, b].
QuadratureRule gauss_legendre(int n, double a, double b);

struct SpaceTimeGrid {
  Dimension dim = Dimension::ThreeD;
  GridResolution resolution;
  double radius = 0.0;
  double duration = 0.0;

  // Factors of the tensor product.
  std::vector<Vec3> space_nodes;
  std::vector<double> space_weights;  // m^3 (3D) or m^2 (2D)
  std::vector<double> time_nodes;
  std::vector<double> time_weights;   // s

  std::size_t space_size() const { return space_nodes.size(); }
  std::size_t time_size() const { return time_nodes.size(); }
  /// Flattened point count; point p is (space p / n_t, time p % n_t).
  std::size_t size() const { return space_size() * time_size(); }

  const Vec3& position(std::size_t p) const { return space_nodes[p / time_size()]; }
  double time(std::size_t p) const { return time_nodes[p % time_size()]; }
  double weight(std::size_t p) const {
    return space_weights[p / time_size()] * time_weights[p % time_size()];
  }
  double total_weight() const;
};

/// Throws ConfigError for R = 0 or T = 0 and std::invalid_argument for
/// resolution counts below 1.
SpaceTimeGrid build_grid(Dimension dim, const PhysicalConfig& cfg, GridResolution resolution);

/// Spatial-only quadrature over the ball/disk of radius R (the time factor is
/// a single unit-weight node at t = 0).
SpaceTimeGrid build_space_grid(Dimension dim, double radius, GridResolution resolution);

}  // namespace wavedof::rankcheck
