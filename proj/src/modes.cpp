#include "wavedof/modes.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <stdexcept>

#include "wavedof/bounds.hpp"
#include "wavedof/parallel.hpp"
#include "wavedof/specfun.hpp"

namespace wavedof::modes {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr std::size_t kBlock = 64;

// i^n
cplx i_pow(int n) {
  switch (((n % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

void require_positive_duration(const PhysicalConfig& cfg) {
  if (!(cfg.duration > 0.0)) throw ConfigError("the mode basis requires T > 0");
}

struct BinPlan {
  bool fallback = false;
  std::int64_t first = 0;
  std::int64_t last = -1;
  std::int64_t fallback_bin = 0;
  std::int64_t fallback_degree = 0;
};

BinPlan plan_bins(const PhysicalConfig& cfg) {
  BinPlan plan;
  const bounds::BinRange bins = bounds::frequency_bins(cfg);
  if (bins.empty()) {
    plan.fallback = true;
    plan.fallback_bin = static_cast<std::int64_t>(std::nearbyint(cfg.center_freq * cfg.duration));
    plan.fallback_degree = bounds::spatial_degree(cfg.center_freq, cfg);
  } else {
    plan.first = bins.first;
    plan.last = bins.last;
  }
  return plan;
}

// Uniform double in [0, 1) from the top 53 bits.
double uniform01(std::mt19937_64& gen) { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }

// Standard normal via the cosine branch of Box-Muller.
double standard_normal(std::mt19937_64& gen) {
  const double u1 = (static_cast<double>(gen() >> 11) + 0.5) * 0x1.0p-53;
  const double u2 = uniform01(gen);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

}  // namespace

std::int64_t mode_count(Dimension dim, const PhysicalConfig& cfg, const EnumerateOptions& options) {
  cfg.validate();
  require_positive_duration(cfg);
  const std::int64_t counted = bounds::exact_mode_sum(dim, cfg);
  if (dim == Dimension::ThreeD || !options.full_orders) return counted;
  // sum (2N+1) = 2 sum (N+1) - #bins
  const bounds::BinRange bins = bounds::frequency_bins(cfg);
  const std::int64_t nbins = bins.empty() ? 1 : bins.size();
  return 2 * counted - nbins;
}

std::vector<ModeIndex> enumerate_modes(Dimension dim, const PhysicalConfig& cfg, const EnumerateOptions& options) {
  const std::int64_t count = mode_count(dim, cfg, options);
  if (count > options.cap) throw CapExceeded(count, options.cap);

  std::vector<ModeIndex> out;
  out.reserve(static_cast<std::size_t>(count));
  auto emit_bin = [&](std::int64_t bin, std::int64_t degree) {
    const int top = static_cast<int>(degree);
    if (dim == Dimension::ThreeD) {
      for (int n = 0; n <= top; ++n)
        for (int m = -n; m <= n; ++m) out.push_back({bin, n, m, dim});
    } else {
      for (int m = options.full_orders ? -top : 0; m <= top; ++m) out.push_back({bin, 0, m, dim});
    }
  };

  const BinPlan plan = plan_bins(cfg);
  if (plan.fallback) {
    emit_bin(plan.fallback_bin, plan.fallback_degree);
  } else {
    for (std::int64_t i = plan.first; i <= plan.last; ++i) emit_bin(i, bounds::bin_degree(i, cfg));
  }
  return out;
}

BinWavenumber mode_wavenumber(std::int64_t bin, const PhysicalConfig& cfg) {
  require_positive_duration(cfg);
  const double i = static_cast<double>(bin);
  return {i / cfg.duration, kTwoPi * i / (cfg.wave_speed * cfg.duration)};
}

cplx mode_time_factor(std::int64_t bin, double t, double duration) {
  // Reduce the cycle count before multiplying by 2 pi.
  double cycles = static_cast<double>(bin) * (t / duration);
  cycles -= std::floor(cycles);
  return std::polar(1.0 / std::sqrt(duration), kTwoPi * cycles);
}

cplx evaluate_mode(const ModeIndex& index, const Vec3& position, double t, const PhysicalConfig& cfg) {
  require_positive_duration(cfg);
  const double r = position.norm();
  if (r > cfg.radius * (1.0 + 1e-12)) throw std::out_of_range("evaluate_mode: position outside the region");
  if (t < -1e-12 * cfg.duration || t > cfg.duration * (1.0 + 1e-12))
    throw std::out_of_range("evaluate_mode: time outside [0, T]");

  const double k = mode_wavenumber(index.i, cfg).wavenumber;
  const cplx time = mode_time_factor(index.i, t, cfg.duration);
  if (index.dim == Dimension::ThreeD) {
    const double radial = specfun::spherical_bessel_j(index.n, k * r);
    if (radial == 0.0) return {0.0, 0.0};
    const auto angle = specfun::Angle::from_cartesian(position.x, position.y, position.z);
    return radial * specfun::sph_harm(index.n, index.m, angle) * time;
  }
  if (position.z != 0.0) throw std::out_of_range("evaluate_mode: 2D positions must have z = 0");
  const int am = std::abs(index.m);
  double radial = specfun::bessel_J(am, k * r);
  if (index.m < 0 && (am & 1)) radial = -radial;
  const double theta = std::atan2(position.y, position.x);
  return radial * std::polar(1.0, index.m * theta) * time;
}

Eigen::MatrixXcd evaluate_spatial_on_grid(std::span<const ModeIndex> modes, const rankcheck::SpaceTimeGrid& grid,
                                          const PhysicalConfig& cfg) {
  require_positive_duration(cfg);
  const std::size_t nx = grid.space_size();
  const std::size_t np = modes.size();
  Eigen::MatrixXcd out(static_cast<Eigen::Index>(nx), static_cast<Eigen::Index>(np));
  if (np == 0) return out;

  // Distinct bins and the highest degree/order needed in each.
  std::map<std::int64_t, int> top_by_bin;
  int global_top = 0;
  for (const ModeIndex& mi : modes) {
    if (mi.dim != grid.dim) throw std::invalid_argument("mode dimension does not match the grid");
    const int deg = mi.dim == Dimension::ThreeD ? mi.n : std::abs(mi.m);
    auto [it, inserted] = top_by_bin.emplace(mi.i, deg);
    if (!inserted) it->second = std::max(it->second, deg);
    global_top = std::max(global_top, deg);
  }
  std::vector<std::int64_t> bins;
  std::vector<int> tops;
  std::map<std::int64_t, std::size_t> slot_of_bin;
  for (const auto& [bin, top] : top_by_bin) {
    slot_of_bin[bin] = bins.size();
    bins.push_back(bin);
    tops.push_back(top);
  }
  std::vector<std::size_t> slot(np);
  for (std::size_t p = 0; p < np; ++p) slot[p] = slot_of_bin[modes[p].i];
  std::vector<double> wavenumbers(bins.size());
  for (std::size_t b = 0; b < bins.size(); ++b) wavenumbers[b] = mode_wavenumber(bins[b], cfg).wavenumber;

  const std::size_t blocks = (nx + kBlock - 1) / kBlock;
  parallel_blocks(blocks, [&](std::size_t block) {
    const std::size_t end = std::min(nx, (block + 1) * kBlock);
    std::vector<std::vector<double>> radial(bins.size());
    for (std::size_t x = block * kBlock; x < end; ++x) {
      const Vec3& pos = grid.space_nodes[x];
      const double r = pos.norm();
      for (std::size_t b = 0; b < bins.size(); ++b) {
        radial[b] = grid.dim == Dimension::ThreeD ? specfun::spherical_bessel_j_all(tops[b], wavenumbers[b] * r)
                                                  : specfun::bessel_J_all(tops[b], wavenumbers[b] * r);
      }
      const auto row = static_cast<Eigen::Index>(x);
      if (grid.dim == Dimension::ThreeD) {
        const auto harmonics =
            specfun::sph_harm_all(global_top, specfun::Angle::from_cartesian(pos.x, pos.y, pos.z));
        for (std::size_t p = 0; p < np; ++p) {
          const ModeIndex& mi = modes[p];
          out(row, static_cast<Eigen::Index>(p)) = radial[slot[p]][mi.n] * harmonics[specfun::harmonic_index(mi.n, mi.m)];
        }
      } else {
        const double theta = std::atan2(pos.y, pos.x);
        for (std::size_t p = 0; p < np; ++p) {
          const ModeIndex& mi = modes[p];
          const int am = std::abs(mi.m);
          double value = radial[slot[p]][am];
          if (mi.m < 0 && (am & 1)) value = -value;
          out(row, static_cast<Eigen::Index>(p)) = value * std::polar(1.0, mi.m * theta);
        }
      }
    }
  });
  return out;
}

Eigen::MatrixXcd evaluate_modes_on_grid(std::span<const ModeIndex> modes, const rankcheck::SpaceTimeGrid& grid,
                                        const PhysicalConfig& cfg) {
  const Eigen::MatrixXcd spatial = evaluate_spatial_on_grid(modes, grid, cfg);
  const std::size_t nt = grid.time_size();
  Eigen::MatrixXcd out(static_cast<Eigen::Index>(grid.size()), static_cast<Eigen::Index>(modes.size()));
  for (std::size_t p = 0; p < modes.size(); ++p) {
    std::vector<cplx> time(nt);
    for (std::size_t it = 0; it < nt; ++it) time[it] = mode_time_factor(modes[p].i, grid.time_nodes[it], cfg.duration);
    for (std::size_t x = 0; x < grid.space_size(); ++x)
      for (std::size_t it = 0; it < nt; ++it)
        out(static_cast<Eigen::Index>(x * nt + it), static_cast<Eigen::Index>(p)) =
            spatial(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(p)) * time[it];
  }
  return out;
}

WaveVector::WaveVector(Dimension dim, const Vec3& direction, double freq, double wave_speed) : dim_(dim) {
  if (dim == Dimension::TwoD && direction.z != 0.0)
    throw std::invalid_argument("WaveVector: 2D directions must have z = 0");
  const double len = direction.norm();
  if (!(len > 0.0) || !std::isfinite(len)) throw std::invalid_argument("WaveVector: direction must be nonzero");
  if (!(freq >= 0.0) || !std::isfinite(freq)) throw std::invalid_argument("WaveVector: frequency must be >= 0");
  if (!(wave_speed > 0.0)) throw std::invalid_argument("WaveVector: wave speed must be > 0");
  direction_ = direction.scaled(1.0 / len);
  freq_ = freq;
  wavenumber_ = kTwoPi * freq / wave_speed;
}

cplx plane_wave(const WaveVector& wave, const Vec3& position, double t) {
  return std::polar(1.0, wave.wavenumber() * wave.direction().dot(position) + kTwoPi * wave.frequency() * t);
}

std::vector<cplx> jacobi_anger_terms(const WaveVector& wave, const Vec3& position, int max_degree) {
  if (max_degree < 0) throw std::invalid_argument("jacobi_anger: degree must be >= 0");
  std::vector<cplx> terms(static_cast<std::size_t>(max_degree) + 1);
  const double kr = wave.wavenumber() * position.norm();

  if (wave.dim() == Dimension::ThreeD) {
    const auto radial = specfun::spherical_bessel_j_all(max_degree, kr);
    const auto yr = specfun::sph_harm_all(max_degree, specfun::Angle::from_cartesian(position.x, position.y, position.z));
    const Vec3& d = wave.direction();
    const auto yk = specfun::sph_harm_all(max_degree, specfun::Angle::from_cartesian(d.x, d.y, d.z));
    for (int n = 0; n <= max_degree; ++n) {
      cplx angular{0.0, 0.0};
      for (int m = -n; m <= n; ++m) {
        const int idx = specfun::harmonic_index(n, m);
        angular += yr[idx] * std::conj(yk[idx]);
      }
      terms[n] = 4.0 * kPi * i_pow(n) * radial[n] * angular;
    }
    return terms;
  }

  const auto radial = specfun::bessel_J_all(max_degree, kr);
  const double delta = std::atan2(position.y, position.x) - std::atan2(wave.direction().y, wave.direction().x);
  terms[0] = radial[0];
  for (int n = 1; n <= max_degree; ++n) terms[n] = i_pow(n) * radial[n] * (2.0 * std::cos(n * delta));
  return terms;
}

cplx jacobi_anger_partial(const WaveVector& wave, const Vec3& position, int max_degree) {
  cplx sum{0.0, 0.0};
  for (const cplx& t : jacobi_anger_terms(wave, position, max_degree)) sum += t;
  return sum;
}

cplx PlaneWaveSet::evaluate(const Vec3& position, double t) const {
  cplx sum{0.0, 0.0};
  for (const PlaneWave& pw : waves) sum += pw.amplitude * plane_wave(pw.wave, position, t);
  return sum;
}

PlaneWaveSet synthesize_field(Dimension dim, const PhysicalConfig& cfg, int num_waves, std::uint64_t seed) {
  cfg.validate();
  if (num_waves < 1) throw std::invalid_argument("synthesize_field: num_waves must be >= 1");

  std::mt19937_64 gen(seed);
  PlaneWaveSet set;
  set.dim = dim;
  set.seed = seed;
  set.waves.reserve(static_cast<std::size_t>(num_waves));
  const double lo = cfg.lower_edge();
  const double span = 2.0 * cfg.half_bandwidth;
  for (int w = 0; w < num_waves; ++w) {
    Vec3 dir;
    do {
      dir.x = standard_normal(gen);
      dir.y = standard_normal(gen);
      dir.z = dim == Dimension::ThreeD ? standard_normal(gen) : 0.0;
    } while (dir.norm() == 0.0);
    const double freq = lo + span * uniform01(gen);
    const double re = standard_normal(gen);
    const double im = standard_normal(gen);
    set.waves.push_back({cplx(re, im) * std::sqrt(0.5), WaveVector(dim, dir, freq, cfg.wave_speed)});
  }
  return set;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t member) {
  std::uint64_t z = seed + (member + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::vector<cplx> sample_field(const PlaneWaveSet& field, const rankcheck::SpaceTimeGrid& grid) {
  std::vector<cplx> out(grid.size());
  const std::size_t blocks = (grid.size() + kBlock - 1) / kBlock;
  parallel_blocks(blocks, [&](std::size_t block) {
    const std::size_t end = std::min(grid.size(), (block + 1) * kBlock);
    for (std::size_t p = block * kBlock; p < end; ++p) out[p] = field.evaluate(grid.position(p), grid.time(p));
  });
  return out;
}

CoefficientVector project_field(std::span<const cplx> samples, std::span<const ModeIndex> modes,
                                const rankcheck::SpaceTimeGrid& grid, const PhysicalConfig& cfg) {
  if (samples.size() != grid.size())
    throw std::invalid_argument("project_field: one sample per grid point is required");
  if (modes.empty()) throw std::invalid_argument("project_field: empty mode set");
  if (modes.size() > grid.size())
    throw std::invalid_argument("project_field: more modes than grid points");

  Eigen::MatrixXcd design = evaluate_modes_on_grid(modes, grid, cfg);
  Eigen::VectorXcd rhs(design.rows());
  for (Eigen::Index s = 0; s < design.rows(); ++s) {
    const double sw = std::sqrt(grid.weight(static_cast<std::size_t>(s)));
    design.row(s) *= sw;
    rhs(s) = sw * samples[static_cast<std::size_t>(s)];
  }

  Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(design);
  qr.setThreshold(1e-9);
  if (qr.rank() < design.cols()) {
    int top = 0;
    for (const ModeIndex& mi : modes) top = std::max(top, mi.dim == Dimension::ThreeD ? mi.n : std::abs(mi.m));
    throw ResolutionError("project_field: weighted mode matrix is rank-deficient (rank " +
                              std::to_string(qr.rank()) + " of " + std::to_string(design.cols()) +
                              "); refine the grid",
                          2 * top + 1, grid.resolution.time);
  }
  const Eigen::VectorXcd coeffs = qr.solve(rhs);

  CoefficientVector result;
  result.modes.assign(modes.begin(), modes.end());
  result.coefficients.assign(coeffs.data(), coeffs.data() + coeffs.size());
  const double norm = rhs.norm();
  result.residual = norm > 0.0 ? (rhs - design * coeffs).norm() / norm : 0.0;
  return result;
}

std::vector<cplx> reconstruct_field(const CoefficientVector& coefficients, const rankcheck::SpaceTimeGrid& grid,
                                    const PhysicalConfig& cfg) {
  const Eigen::MatrixXcd basis = evaluate_modes_on_grid(coefficients.modes, grid, cfg);
  const Eigen::Map<const Eigen::VectorXcd> c(coefficients.coefficients.data(),
                                             static_cast<Eigen::Index>(coefficients.coefficients.size()));
  const Eigen::VectorXcd values = basis * c;
  return {values.data(), values.data() + values.size()};
}

}  // namespace wavedof::modes
