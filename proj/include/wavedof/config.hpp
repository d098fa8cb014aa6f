#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace wavedof {

inline constexpr double kDefaultWaveSpeed = 3e8;  // m/s

enum class Dimension { TwoD, ThreeD };

std::string_view to_string(Dimension dim);
/// Accepts "2d"/"2D"/"3d"/"3D"; throws ConfigError otherwise.
Dimension parse_dimension(std::string_view text);

/// Violated configuration invariant (CLI exit code 2).
class ConfigError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Requested mode set exceeds the configured cap (CLI exit code 3).
class CapExceeded : public std::runtime_error {
public:
  CapExceeded(std::int64_t requested, std::int64_t cap);
  std::int64_t requested() const { return requested_; }
  std::int64_t cap() const { return cap_; }

private:
  std::int64_t requested_;
  std::int64_t cap_;
};

/// Quadrature grid too coarse for the requested basis (CLI exit code 4).
class ResolutionError : public std::runtime_error {
public:
  ResolutionError(const std::string& what, int min_angular, int min_time);
  int min_angular() const { return min_angular_; }
  int min_time() const { return min_time_; }

private:
  int min_angular_;
  int min_time_;
};

/// Observation constraints: a ball of radius R, the band F_o +- W and the
/// time window [0, T].
struct PhysicalConfig {
  double radius = 0.0;          // R, m
  double half_bandwidth = 0.0;  // W, Hz
  double duration = 0.0;        // T, s
  double center_freq = 0.0;     // F_o, Hz
  double wave_speed = kDefaultWaveSpeed;  // c, m/s

  /// Throws ConfigError naming the first violated invariant.
  void validate() const;

  double lower_edge() const { return center_freq - half_bandwidth; }
  double upper_edge() const { return center_freq + half_bandwidth; }
  /// e*pi*R/c, the spatial-mode growth rate per Hz.
  double modes_per_hz() const;
};

// Ceiling and floor of computed reals. Values within 1e-9 (relative) of an
// integer are treated as that integer, so R = c/(e*pi) counts as e*pi*R/c = 1.
inline constexpr double kIntegerSnap = 1e-9;
std::int64_t snapped_ceil(double x);
std::int64_t snapped_floor(double x);

}  // namespace wavedof
