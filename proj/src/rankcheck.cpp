#include "wavedof/rankcheck.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

#include "wavedof/parallel.hpp"

namespace wavedof::rankcheck {

namespace {

using modes::cplx;
constexpr std::size_t kBlock = 64;

// Keep the upper triangle of m, mirror it and drop imaginary roundoff on the
// diagonal.
HermitianMatrix mirror_upper(const Eigen::MatrixXcd& m) {
  const Eigen::Index n = m.rows();
  HermitianMatrix out(n, n);
  for (Eigen::Index p = 0; p < n; ++p) {
    out(p, p) = cplx(m(p, p).real(), 0.0);
    for (Eigen::Index q = p + 1; q < n; ++q) {
      out(p, q) = m(p, q);
      out(q, p) = std::conj(m(p, q));
    }
  }
  return out;
}

int max_degree(std::span<const modes::ModeIndex> modes) {
  int top = 0;
  for (const auto& mi : modes) top = std::max(top, mi.dim == Dimension::ThreeD ? mi.n : std::abs(mi.m));
  return top;
}

// Weighted field samples, one column per member, scaled by 1/sqrt(M).
Eigen::MatrixXcd weighted_samples(std::span<const modes::PlaneWaveSet> fields, const SpaceTimeGrid& grid) {
  const auto s = static_cast<Eigen::Index>(grid.size());
  const auto m = static_cast<Eigen::Index>(fields.size());
  Eigen::MatrixXcd x(s, m);
  const double inv_sqrt_m = 1.0 / std::sqrt(static_cast<double>(fields.size()));
  std::vector<double> sw(grid.size());
  for (std::size_t p = 0; p < grid.size(); ++p) sw[p] = std::sqrt(grid.weight(p)) * inv_sqrt_m;

  const std::size_t blocks = (grid.size() + kBlock - 1) / kBlock;
  parallel_blocks(blocks, [&](std::size_t block) {
    const std::size_t end = std::min(grid.size(), (block + 1) * kBlock);
    for (std::size_t p = block * kBlock; p < end; ++p) {
      const Vec3& pos = grid.position(p);
      const double t = grid.time(p);
      for (Eigen::Index f = 0; f < m; ++f)
        x(static_cast<Eigen::Index>(p), f) = sw[p] * fields[static_cast<std::size_t>(f)].evaluate(pos, t);
    }
  });
  return x;
}

}  // namespace

void RankPolicy::validate() const {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("rank policy: epsilon must lie in (0, 1)");
  if (!(eta > 0.0 && eta < 1.0)) throw std::invalid_argument("rank policy: eta must lie in (0, 1)");
}

GridResolution minimum_resolution(std::span<const modes::ModeIndex> modes, const PhysicalConfig& cfg) {
  const int top = max_degree(modes);
  GridResolution res;
  res.angular = 2 * top + 1;
  res.time = static_cast<int>(std::ceil(4.0 * cfg.upper_edge() * cfg.duration + 8.0));
  // Radial nodes: enough for the highest wave-number's oscillation across R.
  const double kr_max = 2.0 * std::numbers::pi * cfg.upper_edge() * cfg.radius / cfg.wave_speed;
  res.radial = static_cast<int>(std::ceil(kr_max / 2.0)) + 12;
  return res;
}

void check_resolution(std::span<const modes::ModeIndex> modes, const SpaceTimeGrid& grid, const PhysicalConfig& cfg) {
  const GridResolution need = minimum_resolution(modes, cfg);
  if (grid.resolution.angular < need.angular || grid.resolution.time < need.time) {
    throw ResolutionError("grid too coarse for the mode set: need n_angular >= " + std::to_string(need.angular) +
                              " and n_time >= " + std::to_string(need.time) + " (have n_angular = " +
                              std::to_string(grid.resolution.angular) +
                              ", n_time = " + std::to_string(grid.resolution.time) + ")",
                          need.angular, need.time);
  }
}

HermitianMatrix gram_of_modes(std::span<const modes::ModeIndex> modes, const SpaceTimeGrid& grid,
                              const PhysicalConfig& cfg) {
  if (modes.empty()) throw std::invalid_argument("gram_of_modes: empty mode set");
  check_resolution(modes, grid, cfg);

  Eigen::MatrixXcd spatial = modes::evaluate_spatial_on_grid(modes, grid, cfg);
  for (Eigen::Index x = 0; x < spatial.rows(); ++x)
    spatial.row(x) *= std::sqrt(grid.space_weights[static_cast<std::size_t>(x)]);
  // S[p][q] = sum_x w_x phi_p(x) conj(phi_q(x))
  const Eigen::MatrixXcd space_part = spatial.transpose() * spatial.conjugate();

  const std::size_t np = modes.size();
  const std::size_t nt = grid.time_size();
  Eigen::MatrixXcd time_samples(static_cast<Eigen::Index>(nt), static_cast<Eigen::Index>(np));
  for (std::size_t p = 0; p < np; ++p)
    for (std::size_t it = 0; it < nt; ++it)
      time_samples(static_cast<Eigen::Index>(it), static_cast<Eigen::Index>(p)) =
          std::sqrt(grid.time_weights[it]) * modes::mode_time_factor(modes[p].i, grid.time_nodes[it], cfg.duration);
  const Eigen::MatrixXcd time_part = time_samples.transpose() * time_samples.conjugate();

  return mirror_upper(space_part.cwiseProduct(time_part));
}

HermitianMatrix normalized_gram(const HermitianMatrix& gram) {
  const Eigen::Index n = gram.rows();
  Eigen::VectorXd inv(n);
  for (Eigen::Index p = 0; p < n; ++p) {
    const double d = gram(p, p).real();
    if (!(d > 0.0)) throw std::invalid_argument("normalized_gram: diagonal must be positive");
    inv(p) = 1.0 / std::sqrt(d);
  }
  Eigen::MatrixXcd scaled = inv.asDiagonal() * gram * inv.asDiagonal();
  return mirror_upper(scaled);
}

HermitianMatrix ensemble_covariance(std::span<const modes::PlaneWaveSet> fields, const SpaceTimeGrid& grid) {
  if (fields.empty()) throw std::invalid_argument("ensemble_covariance: empty ensemble");
  const Eigen::MatrixXcd x = weighted_samples(fields, grid);
  return mirror_upper(x * x.adjoint());
}

SpectrumReport ensemble_spectrum(std::span<const modes::PlaneWaveSet> fields, const SpaceTimeGrid& grid,
                                 const RankPolicy& policy) {
  if (fields.empty()) throw std::invalid_argument("ensemble_spectrum: empty ensemble");
  if (fields.size() >= grid.size()) {
    return eigen_spectrum(ensemble_covariance(fields, grid), policy);
  }
  // X X^H and X^H X share their nonzero eigenvalues.
  const Eigen::MatrixXcd x = weighted_samples(fields, grid);
  SpectrumReport report = eigen_spectrum(mirror_upper(x.adjoint() * x), policy);
  report.dimension = static_cast<std::int64_t>(grid.size());
  return report;
}

EigenDecomposition hermitian_eigen(const HermitianMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("hermitian_eigen: matrix must be square");
  const double scale = m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
  const double asym = m.size() == 0 ? 0.0 : (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (asym > 1e-10 * std::max(scale, 1e-300)) throw std::invalid_argument("hermitian_eigen: matrix is not Hermitian");

  EigenDecomposition out;
  if (m.rows() == 0) return out;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m);
  if (solver.info() != Eigen::Success) throw std::runtime_error("hermitian_eigen: solver did not converge");
  out.values = solver.eigenvalues().reverse();
  out.vectors = solver.eigenvectors().rowwise().reverse();
  return out;
}

SpectrumReport eigen_spectrum(const HermitianMatrix& m, const RankPolicy& policy) {
  policy.validate();
  if (m.rows() != m.cols()) throw std::invalid_argument("eigen_spectrum: matrix must be square");
  const double scale = m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
  const double asym = m.size() == 0 ? 0.0 : (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (asym > 1e-10 * std::max(scale, 1e-300)) throw std::invalid_argument("eigen_spectrum: matrix is not Hermitian");

  SpectrumReport report;
  report.policy = policy;
  report.dimension = m.rows();
  if (m.rows() == 0) return report;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigen_spectrum: solver did not converge");
  const Eigen::VectorXd ascending = solver.eigenvalues();
  report.eigenvalues.assign(ascending.data(), ascending.data() + ascending.size());
  std::reverse(report.eigenvalues.begin(), report.eigenvalues.end());
  report.trace = m.diagonal().real().sum();
  const EffectiveRank ranks = effective_rank(report, policy);
  report.rank_threshold = ranks.threshold;
  report.rank_energy = ranks.energy;
  return report;
}

EffectiveRank effective_rank(const SpectrumReport& spectrum, const RankPolicy& policy) {
  policy.validate();
  const auto& ev = spectrum.eigenvalues;
  if (ev.empty()) throw std::invalid_argument("effective_rank: empty spectrum");

  EffectiveRank out;
  const double top = ev.front();
  if (!(top > 0.0)) return out;
  out.threshold = std::count_if(ev.begin(), ev.end(), [&](double v) { return v >= policy.epsilon * top; });

  const double target = policy.eta * spectrum.trace;
  double cumulative = 0.0;
  out.energy = static_cast<std::int64_t>(ev.size());
  for (std::size_t j = 0; j < ev.size(); ++j) {
    cumulative += ev[j];
    if (cumulative >= target) {
      out.energy = static_cast<std::int64_t>(j + 1);
      break;
    }
  }
  return out;
}

GridResolution default_truncation_resolution(double kr, int max_degree) {
  const int effective = std::max(max_degree, static_cast<int>(std::ceil(std::numbers::e * kr / 2.0))) + 20;
  GridResolution res;
  res.radial = static_cast<int>(std::ceil(kr)) + 24;
  res.angular = 2 * effective + 1;
  res.time = 1;
  return res;
}

std::vector<double> truncation_error_profile(const modes::WaveVector& wave, double radius, int max_degree,
                                             GridResolution resolution) {
  if (max_degree < 0) throw std::invalid_argument("truncation_error: degree must be >= 0");
  if (radius < 0.0) throw std::invalid_argument("truncation_error: radius must be >= 0");
  const auto levels = static_cast<std::size_t>(max_degree) + 1;
  if (radius == 0.0) return std::vector<double>(levels, 0.0);

  const SpaceTimeGrid grid = build_space_grid(wave.dim(), radius, resolution);
  const std::size_t nx = grid.space_size();
  const std::size_t blocks = (nx + kBlock - 1) / kBlock;
  std::vector<std::vector<double>> block_err(blocks, std::vector<double>(levels, 0.0));
  std::vector<double> block_norm(blocks, 0.0);

  parallel_blocks(blocks, [&](std::size_t block) {
    const std::size_t end = std::min(nx, (block + 1) * kBlock);
    auto& err = block_err[block];
    for (std::size_t x = block * kBlock; x < end; ++x) {
      const Vec3& pos = grid.space_nodes[x];
      const double w = grid.space_weights[x];
      const cplx exact = modes::plane_wave(wave, pos, 0.0);
      const auto terms = modes::jacobi_anger_terms(wave, pos, max_degree);
      cplx partial{0.0, 0.0};
      for (std::size_t n = 0; n < levels; ++n) {
        partial += terms[n];
        err[n] += w * std::norm(exact - partial);
      }
      block_norm[block] += w * std::norm(exact);
    }
  });

  std::vector<double> total(levels, 0.0);
  double norm = 0.0;
  for (std::size_t b = 0; b < blocks; ++b) {
    for (std::size_t n = 0; n < levels; ++n) total[n] += block_err[b][n];
    norm += block_norm[b];
  }
  for (double& v : total) v = std::sqrt(v / norm);
  return total;
}

double truncation_error(const modes::WaveVector& wave, double radius, int max_degree, GridResolution resolution) {
  return truncation_error_profile(wave, radius, max_degree, resolution).back();
}

}  // namespace wavedof::rankcheck
