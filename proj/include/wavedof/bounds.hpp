#pragma once

// Closed-form degrees-of-freedom counts and the exact discrete mode sums for
// a ball of radius R observed over F_o +- W for a time T.

#include <cstdint>

#include "wavedof/config.hpp"

namespace wavedof::bounds {

/// ceil(2WT) + 1: orthogonal time-limited sinusoids in a band of width 2W.
std::int64_t dof_time_band(double half_bandwidth, double duration);

/// Single-frequency spatial count: ceil(e pi F R / c) + 1 in 2D, its square in 3D.
std::int64_t dof_space(Dimension dim, double freq, double radius, double wave_speed);

/// ceil(e k R / 2), the highest harmonic degree observable at wave-number k.
std::int64_t truncation_degree(double radius, double wavenumber);

/// Integer frequency bins i with f(i) = i/T inside [F_o - W, F_o + W].
/// Empty when first > last.
struct BinRange {
  std::int64_t first = 0;
  std::int64_t last = -1;
  bool empty() const { return first > last; }
  std::int64_t size() const { return empty() ? 0 : last - first + 1; }
};

/// Requires T > 0.
BinRange frequency_bins(const PhysicalConfig& cfg);

/// Spatial degree N at frequency f: ceil(e pi R f / c).
std::int64_t spatial_degree(double freq, const PhysicalConfig& cfg);

/// Spatial degree of bin i, i.e. spatial_degree(i / T).
std::int64_t bin_degree(std::int64_t bin, const PhysicalConfig& cfg);

/// Exact count of the discrete mode set: sum over bins of (N(i)+1)^2 in 3D
/// or N(i)+1 in 2D. An empty bin range falls back to the single-frequency
/// count at F_o. Throws ConfigError for T <= 0 and std::overflow_error if the
/// count does not fit in 64 bits.
std::int64_t exact_mode_sum(Dimension dim, const PhysicalConfig& cfg);

/// The closed forms reproduced verbatim. 3D:
///   TW[(2W^2/3 + 2F_o^2)(e pi R/c)^2 + 6 e pi R F_o/c + 13/3] + ((F_o - W) e pi R/c + 1)^2
/// 2D:
///   4WT + 1 + 2 e pi R F_o/c + 2 e pi R T W^2/c
/// These are not certified upper bounds on exact_mode_sum; at fractional
/// grouping the 3D form can fall a few percent below the exact count.
double closed_form_bound(Dimension dim, const PhysicalConfig& cfg);

/// Large-T, W, R approximation 2TW(W^2/3 + F_o^2)(e pi R/c)^2.
double asymptotic_dof_3d(const PhysicalConfig& cfg);

/// Average number of 3D spatial modes per Hz across the band, (F_o^2 + W^2)(e pi R/c)^2.
double average_mode_density_3d(const PhysicalConfig& cfg);

struct BoundReport {
  PhysicalConfig config;
  double d_2wt = 0.0;
  double d_space2d = 0.0;
  double d_space3d = 0.0;
  double thm1 = 0.0;
  double thm2 = 0.0;
  std::int64_t exact2d = 0;
  std::int64_t exact3d = 0;
  double asym3d = 0.0;
  double avg_density = 0.0;
  double n0 = 0.0;  // (F_o - W) e pi R / c
};

/// Every report field for one configuration. The spatial counts use F_o; the
/// exact sums use dof_space at F_o when T = 0.
BoundReport bound_report(const PhysicalConfig& cfg);

}  // namespace wavedof::bounds
