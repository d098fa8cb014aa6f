#include "wavedof/config.hpp"

#include <cmath>
#include <numbers>

namespace wavedof {

std::string_view to_string(Dimension dim) { return dim == Dimension::TwoD ? "2d" : "3d"; }

Dimension parse_dimension(std::string_view text) {
  if (text == "2d" || text == "2D") return Dimension::TwoD;
  if (text == "3d" || text == "3D") return Dimension::ThreeD;
  throw ConfigError("dimension must be 2d or 3d, got '" + std::string(text) + "'");
}

CapExceeded::CapExceeded(std::int64_t requested, std::int64_t cap)
    : std::runtime_error("mode count " + std::to_string(requested) + " exceeds cap " + std::to_string(cap)),
      requested_(requested),
      cap_(cap) {}

ResolutionError::ResolutionError(const std::string& what, int min_angular, int min_time)
    : std::runtime_error(what), min_angular_(min_angular), min_time_(min_time) {}

void PhysicalConfig::validate() const {
  auto finite = [](double v) { return std::isfinite(v); };
  if (!finite(radius) || !finite(half_bandwidth) || !finite(duration) || !finite(center_freq) ||
      !finite(wave_speed))
    throw ConfigError("configuration values must be finite");
  if (radius < 0.0) throw ConfigError("radius R must be >= 0");
  if (half_bandwidth < 0.0) throw ConfigError("half-bandwidth W must be >= 0");
  if (duration < 0.0) throw ConfigError("observation time T must be >= 0");
  if (center_freq - half_bandwidth < 0.0)
    throw ConfigError("band edge below zero: F0 - W < 0 (F0 must be >= W)");
  if (!(wave_speed > 0.0)) throw ConfigError("wave speed c must be > 0");
}

double PhysicalConfig::modes_per_hz() const {
  return std::numbers::e * std::numbers::pi * radius / wave_speed;
}

namespace {
bool near_integer(double x, double r) {
  return std::abs(x - r) <= kIntegerSnap * std::max(1.0, std::abs(x));
}
}  // namespace

std::int64_t snapped_ceil(double x) {
  const double r = std::nearbyint(x);
  if (near_integer(x, r)) return static_cast<std::int64_t>(r);
  return static_cast<std::int64_t>(std::ceil(x));
}

std::int64_t snapped_floor(double x) {
  const double r = std::nearbyint(x);
  if (near_integer(x, r)) return static_cast<std::int64_t>(r);
  return static_cast<std::int64_t>(std::floor(x));
}

}  // namespace wavedof
