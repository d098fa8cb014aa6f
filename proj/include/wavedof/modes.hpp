#pragma once

// The space-time-frequency basis: frequency bins f(i) = i/T, spatial
// harmonics up to the truncation degree of each bin, plane waves and their
// Jacobi-Anger partial sums, random band-limited fields and weighted
// least-squares projection onto the enumerated basis.
//
// Mode functions
//   3D: j_n(k r) Y_n^m(r_hat) exp(+i 2 pi i t / T) / sqrt(T)
//   2D: J_|m|(k r) (-1)^m[m<0] exp(i m theta) exp(+i 2 pi i t / T) / sqrt(T)
// with k = 2 pi i / (c T). The positive time sign is used throughout; mode
// counts do not depend on it.

#include <complex>
#include <compare>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "wavedof/config.hpp"
#include "wavedof/geometry.hpp"
#include "wavedof/grid.hpp"

namespace wavedof::modes {

using cplx = std::complex<double>;

struct ModeIndex {
  std::int64_t i = 0;  // frequency bin
  int n = 0;           // degree (0 in 2D)
  int m = 0;           // order
  Dimension dim = Dimension::ThreeD;

  auto operator<=>(const ModeIndex&) const = default;
};

struct EnumerateOptions {
  /// 2D only: orders -N..N instead of the 0..N set that matches ceil(.)+1.
  bool full_orders = false;
  std::int64_t cap = 10'000'000;
};

/// Number of modes enumerate_modes would return; equals
/// bounds::exact_mode_sum unless full_orders is set.
std::int64_t mode_count(Dimension dim, const PhysicalConfig& cfg, const EnumerateOptions& options = {});

/// Modes ordered by (i, n, m). If no integer bin falls inside the band, the
/// single bin nearest F_o*T is used with the spatial degree taken at F_o.
/// Throws CapExceeded when the count exceeds options.cap.
std::vector<ModeIndex> enumerate_modes(Dimension dim, const PhysicalConfig& cfg,
                                       const EnumerateOptions& options = {});

struct BinWavenumber {
  double freq = 0.0;        // Hz
  double wavenumber = 0.0;  // rad/m
};

/// f = i/T, k = 2 pi i/(c T). Requires T > 0.
BinWavenumber mode_wavenumber(std::int64_t bin, const PhysicalConfig& cfg);

/// exp(i 2 pi bin t / T) / sqrt(T), defined for every t.
cplx mode_time_factor(std::int64_t bin, double t, double duration);

/// Pointwise mode value. Throws std::out_of_range for |r| > R or t outside
/// [0, T]; 2D modes also require position.z == 0.
cplx evaluate_mode(const ModeIndex& index, const Vec3& position, double t, const PhysicalConfig& cfg);

/// Column p holds modes[p] at every flattened grid point.
Eigen::MatrixXcd evaluate_modes_on_grid(std::span<const ModeIndex> modes,
                                        const rankcheck::SpaceTimeGrid& grid,
                                        const PhysicalConfig& cfg);

/// Spatial factor only (no time dependence, no 1/sqrt(T)), one row per
/// spatial node of the grid.
Eigen::MatrixXcd evaluate_spatial_on_grid(std::span<const ModeIndex> modes,
                                          const rankcheck::SpaceTimeGrid& grid,
                                          const PhysicalConfig& cfg);

/// Propagation direction, frequency and wave-number of one plane wave.
class WaveVector {
public:
  /// Normalizes direction; 2D requires direction.z == 0. Throws
  /// std::invalid_argument for a zero direction, negative frequency or c <= 0.
  WaveVector(Dimension dim, const Vec3& direction, double freq, double wave_speed);

  Dimension dim() const { return dim_; }
  const Vec3& direction() const { return direction_; }
  double frequency() const { return freq_; }
  double wavenumber() const { return wavenumber_; }

  bool operator==(const WaveVector&) const = default;

private:
  Dimension dim_;
  Vec3 direction_;
  double freq_;
  double wavenumber_;
};

/// exp(i (k k_hat . r + 2 pi f t)).
cplx plane_wave(const WaveVector& wave, const Vec3& position, double t);

/// Spatial factor exp(i k k_hat . r) truncated at degree N:
///   3D: 4 pi sum_{n<=N} i^n j_n(k r) sum_m Y_n^m(r_hat) conj(Y_n^m(k_hat))
///   2D: sum_{|m|<=N} i^m J_m(k r) exp(i m (theta - theta_k))
cplx jacobi_anger_partial(const WaveVector& wave, const Vec3& position, int max_degree);

/// The individual degree terms of jacobi_anger_partial (index n = 0..N).
std::vector<cplx> jacobi_anger_terms(const WaveVector& wave, const Vec3& position, int max_degree);

struct PlaneWave {
  cplx amplitude;
  WaveVector wave;

  bool operator==(const PlaneWave&) const = default;
};

/// Superposition of plane waves drawn from one seed.
struct PlaneWaveSet {
  Dimension dim = Dimension::ThreeD;
  std::uint64_t seed = 0;
  std::vector<PlaneWave> waves;

  cplx evaluate(const Vec3& position, double t) const;
  bool operator==(const PlaneWaveSet&) const = default;
};

/// Generator recorded in run metadata.
inline constexpr std::string_view kPrngAlgorithm = "mt19937_64+box-muller";

/// num_waves plane waves: isotropic directions (normalized Gaussian
/// vectors), frequencies uniform on [F_o - W, F_o + W], amplitudes complex
/// Gaussian with unit variance. Identical arguments give identical sets on
/// every platform.
PlaneWaveSet synthesize_field(Dimension dim, const PhysicalConfig& cfg, int num_waves, std::uint64_t seed);

/// Per-member seed for ensembles: splitmix64 of (seed, member).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t member);

struct CoefficientVector {
  std::vector<ModeIndex> modes;
  std::vector<cplx> coefficients;
  double residual = 0.0;  // ||x - sum c_p psi_p|| / ||x|| in the grid-weighted norm
};

/// Weighted least-squares fit of samples (one per flattened grid point) onto
/// the modes. Throws ResolutionError if the weighted system is numerically
/// rank-deficient and std::invalid_argument on size mismatches.
CoefficientVector project_field(std::span<const cplx> samples, std::span<const ModeIndex> modes,
                                const rankcheck::SpaceTimeGrid& grid, const PhysicalConfig& cfg);

/// Samples of sum_p c_p psi_p at every flattened grid point.
std::vector<cplx> reconstruct_field(const CoefficientVector& coefficients,
                                    const rankcheck::SpaceTimeGrid& grid, const PhysicalConfig& cfg);

/// Samples of a plane-wave superposition at every flattened grid point.
std::vector<cplx> sample_field(const PlaneWaveSet& field, const rankcheck::SpaceTimeGrid& grid);

}  // namespace wavedof::modes
