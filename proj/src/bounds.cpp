#include "wavedof/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace wavedof::bounds {

namespace {

constexpr double kE = std::numbers::e;
constexpr double kPi = std::numbers::pi;

__int128 space_term(Dimension dim, std::int64_t degree) {
  const __int128 n1 = static_cast<__int128>(degree) + 1;
  return dim == Dimension::ThreeD ? n1 * n1 : n1;
}

std::int64_t narrow_count(__int128 value) {
  if (value > std::numeric_limits<std::int64_t>::max())
    throw std::overflow_error("mode count does not fit in 64 bits");
  return static_cast<std::int64_t>(value);
}

}  // namespace

std::int64_t dof_time_band(double half_bandwidth, double duration) {
  if (half_bandwidth < 0.0 || duration < 0.0)
    throw ConfigError("dof_time_band: W and T must be >= 0");
  return snapped_ceil(2.0 * half_bandwidth * duration) + 1;
}

std::int64_t dof_space(Dimension dim, double freq, double radius, double wave_speed) {
  if (freq < 0.0 || radius < 0.0) throw ConfigError("dof_space: F and R must be >= 0");
  if (!(wave_speed > 0.0)) throw ConfigError("dof_space: c must be > 0");
  const std::int64_t n = snapped_ceil(kE * kPi * freq * radius / wave_speed);
  return narrow_count(space_term(dim, n));
}

std::int64_t truncation_degree(double radius, double wavenumber) {
  if (radius < 0.0 || wavenumber < 0.0)
    throw std::invalid_argument("truncation_degree: R and k must be >= 0");
  return snapped_ceil(kE * wavenumber * radius / 2.0);
}

BinRange frequency_bins(const PhysicalConfig& cfg) {
  if (!(cfg.duration > 0.0)) throw ConfigError("frequency bins require T > 0");
  return BinRange{snapped_ceil(cfg.lower_edge() * cfg.duration),
                  snapped_floor(cfg.upper_edge() * cfg.duration)};
}

std::int64_t spatial_degree(double freq, const PhysicalConfig& cfg) {
  return snapped_ceil(cfg.modes_per_hz() * freq);
}

std::int64_t bin_degree(std::int64_t bin, const PhysicalConfig& cfg) {
  return spatial_degree(static_cast<double>(bin) / cfg.duration, cfg);
}

std::int64_t exact_mode_sum(Dimension dim, const PhysicalConfig& cfg) {
  cfg.validate();
  if (!(cfg.duration > 0.0))
    throw ConfigError("exact_mode_sum requires T > 0 (use dof_space for the narrowband case)");

  const BinRange bins = frequency_bins(cfg);
  if (bins.empty()) return dof_space(dim, cfg.center_freq, cfg.radius, cfg.wave_speed);

  // Walk runs of bins sharing one spatial degree; N(i) is nondecreasing in i,
  // so the end of each run is found by bisection.
  __int128 total = 0;
  std::int64_t i = bins.first;
  while (i <= bins.last) {
    const std::int64_t v = bin_degree(i, cfg);
    std::int64_t lo = i, hi = bins.last;  // bin_degree(lo) == v
    while (lo < hi) {
      const std::int64_t mid = lo + (hi - lo + 1) / 2;
      if (bin_degree(mid, cfg) <= v) lo = mid;
      else hi = mid - 1;
    }
    total += static_cast<__int128>(lo - i + 1) * space_term(dim, v);
    if (total > std::numeric_limits<std::int64_t>::max()) narrow_count(total);  // throws
    i = lo + 1;
  }
  return narrow_count(total);
}

double closed_form_bound(Dimension dim, const PhysicalConfig& cfg) {
  cfg.validate();
  const double a = cfg.modes_per_hz();
  const double w = cfg.half_bandwidth;
  const double t = cfg.duration;
  const double f0 = cfg.center_freq;
  if (dim == Dimension::ThreeD) {
    const double lower = (f0 - w) * a + 1.0;
    return t * w * ((2.0 * w * w / 3.0 + 2.0 * f0 * f0) * a * a + 6.0 * a * f0 + 13.0 / 3.0) +
           lower * lower;
  }
  return 4.0 * w * t + 1.0 + 2.0 * a * f0 + 2.0 * a * t * w * w;
}

double asymptotic_dof_3d(const PhysicalConfig& cfg) {
  cfg.validate();
  const double a = cfg.modes_per_hz();
  const double w = cfg.half_bandwidth;
  const double f0 = cfg.center_freq;
  return 2.0 * cfg.duration * w * (w * w / 3.0 + f0 * f0) * a * a;
}

double average_mode_density_3d(const PhysicalConfig& cfg) {
  cfg.validate();
  const double a = cfg.modes_per_hz();
  const double w = cfg.half_bandwidth;
  const double f0 = cfg.center_freq;
  return (f0 * f0 + w * w) * a * a;
}

BoundReport bound_report(const PhysicalConfig& cfg) {
  cfg.validate();
  BoundReport r;
  r.config = cfg;
  r.d_2wt = static_cast<double>(dof_time_band(cfg.half_bandwidth, cfg.duration));
  r.d_space2d = static_cast<double>(dof_space(Dimension::TwoD, cfg.center_freq, cfg.radius, cfg.wave_speed));
  r.d_space3d = static_cast<double>(dof_space(Dimension::ThreeD, cfg.center_freq, cfg.radius, cfg.wave_speed));
  r.thm1 = closed_form_bound(Dimension::TwoD, cfg);
  r.thm2 = closed_form_bound(Dimension::ThreeD, cfg);
  if (cfg.duration > 0.0) {
    r.exact2d = exact_mode_sum(Dimension::TwoD, cfg);
    r.exact3d = exact_mode_sum(Dimension::ThreeD, cfg);
  } else {
    r.exact2d = dof_space(Dimension::TwoD, cfg.center_freq, cfg.radius, cfg.wave_speed);
    r.exact3d = dof_space(Dimension::ThreeD, cfg.center_freq, cfg.radius, cfg.wave_speed);
  }
  r.asym3d = asymptotic_dof_3d(cfg);
  r.avg_density = average_mode_density_3d(cfg);
  r.n0 = cfg.lower_edge() * cfg.modes_per_hz();
  return r;
}

}  // namespace wavedof::bounds
