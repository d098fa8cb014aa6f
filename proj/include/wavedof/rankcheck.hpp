#pragma once

// Numerical dimension checks: Gram matrices of the enumerated basis,
// ensemble covariances of random fields, Hermitian spectra and two
// effective-rank readouts, plus Jacobi-Anger truncation error.
//
// Effective rank
//   threshold rank  #{ lambda >= epsilon * lambda_max }
//   energy rank     min m such that the top m eigenvalues hold eta * trace

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "wavedof/config.hpp"
#include "wavedof/grid.hpp"
#include "wavedof/modes.hpp"

namespace wavedof::rankcheck {

using HermitianMatrix = Eigen::MatrixXcd;

struct RankPolicy {
  double epsilon = 1e-3;
  double eta = 0.99;

  /// Throws std::invalid_argument unless 0 < epsilon < 1 and 0 < eta < 1.
  void validate() const;
};

struct SpectrumReport {
  std::vector<double> eigenvalues;  // descending; roundoff negatives are kept
  double trace = 0.0;
  std::int64_t dimension = 0;       // matrix size (eigenvalues beyond the stored ones are zero)
  std::int64_t rank_threshold = 0;
  std::int64_t rank_energy = 0;
  RankPolicy policy;
};

struct EffectiveRank {
  std::int64_t threshold = 0;
  std::int64_t energy = 0;
};

/// Smallest grid that resolves the modes: angular >= 2 * (max degree) + 1 and
/// time >= 4 (F_o + W) T + 8. The radial count is a suggested default.
GridResolution minimum_resolution(std::span<const modes::ModeIndex> modes, const PhysicalConfig& cfg);

/// Throws ResolutionError naming the required minimums when the grid is too coarse.
void check_resolution(std::span<const modes::ModeIndex> modes, const SpaceTimeGrid& grid, const PhysicalConfig& cfg);

/// G[p][q] = sum_s w_s psi_p(s) conj(psi_q(s)); exactly Hermitian. The
/// tensor-product grid lets the sum split into space and time factors.
HermitianMatrix gram_of_modes(std::span<const modes::ModeIndex> modes, const SpaceTimeGrid& grid,
                              const PhysicalConfig& cfg);

/// D^{-1/2} G D^{-1/2} with D = diag(G).
HermitianMatrix normalized_gram(const HermitianMatrix& gram);

/// C[s][s'] = (1/M) sum_f sqrt(w_s w_s') x_f(s) conj(x_f(s')); zero-mean
/// ensemble, no centering.
HermitianMatrix ensemble_covariance(std::span<const modes::PlaneWaveSet> fields, const SpaceTimeGrid& grid);

/// Spectrum of ensemble_covariance computed through the smaller of the two
/// equivalent Gram forms (grid-by-grid or field-by-field).
SpectrumReport ensemble_spectrum(std::span<const modes::PlaneWaveSet> fields, const SpaceTimeGrid& grid,
                                 const RankPolicy& policy = {});

struct EigenDecomposition {
  Eigen::VectorXd values;   // descending
  Eigen::MatrixXcd vectors; // column j pairs with values(j)
};

/// Throws std::invalid_argument if m is not Hermitian to 1e-10 (relative).
EigenDecomposition hermitian_eigen(const HermitianMatrix& m);

SpectrumReport eigen_spectrum(const HermitianMatrix& m, const RankPolicy& policy = {});

/// Throws std::invalid_argument for an empty spectrum.
EffectiveRank effective_rank(const SpectrumReport& spectrum, const RankPolicy& policy);

/// Grid fine enough to integrate the truncation error of a plane wave with
/// k R = kr truncated at max_degree.
GridResolution default_truncation_resolution(double kr, int max_degree);

/// Relative ball-averaged L2 error between exp(i k . r) and its Jacobi-Anger
/// partial sum, for every truncation degree 0..max_degree.
std::vector<double> truncation_error_profile(const modes::WaveVector& wave, double radius, int max_degree,
                                             GridResolution resolution);

double truncation_error(const modes::WaveVector& wave, double radius, int max_degree, GridResolution resolution);

}  // namespace wavedof::rankcheck
