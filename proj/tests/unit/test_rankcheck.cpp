#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "../oracles/charpoly.hpp"
#include "wavedof/grid.hpp"
#include "wavedof/modes.hpp"
#include "wavedof/rankcheck.hpp"
#include "wavedof/specfun.hpp"

using namespace wavedof;
using namespace wavedof::rankcheck;
using wavedof::modes::cplx;
using std::numbers::e;
using std::numbers::pi;

namespace {

PhysicalConfig calibration() { return {1.0 / (e * pi), 1.0, 1.0, 10.0, 1.0}; }

std::vector<modes::PlaneWaveSet> ensemble(Dimension dim, const PhysicalConfig& cfg, int members, int waves,
                                          std::uint64_t seed) {
  std::vector<modes::PlaneWaveSet> out;
  for (int f = 0; f < members; ++f)
    out.push_back(modes::synthesize_field(dim, cfg, waves, modes::derive_seed(seed, static_cast<std::uint64_t>(f))));
  return out;
}

Eigen::MatrixXcd random_hermitian(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g;
  Eigen::MatrixXcd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = cplx(g(rng), g(rng));
  return (a + a.adjoint()) * 0.5;
}

Eigen::MatrixXcd random_unitary(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g;
  Eigen::MatrixXcd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = cplx(g(rng), g(rng));
  return Eigen::HouseholderQR<Eigen::MatrixXcd>(a).householderQ();
}

const PhysicalConfig kLadderBase{0.5, 0.25, 2.0, 1.0, 1.0};

}  // namespace

TEST_CASE("Gauss-Legendre rules integrate polynomials exactly") {
  for (int n : {1, 2, 5, 12, 40}) {
    const auto q = gauss_legendre(n, -1.0, 3.0);
    REQUIRE(q.nodes.size() == static_cast<std::size_t>(n));
    for (int d = 0; d <= 2 * n - 1; ++d) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) s += q.weights[k] * std::pow(q.nodes[k], d);
      const double want = (std::pow(3.0, d + 1) - std::pow(-1.0, d + 1)) / (d + 1);
      CHECK(s == doctest::Approx(want).epsilon(1e-12));
    }
  }
  CHECK_THROWS(gauss_legendre(0, 0.0, 1.0));
}

TEST_CASE("grid weights and exactness") {
  const PhysicalConfig cfg{1.0, 1.0, 2.0, 10.0, 1.0};
  const auto ball = build_grid(Dimension::ThreeD, cfg, {4, 5, 3});
  CHECK(ball.total_weight() == doctest::Approx(4.0 / 3.0 * pi * 2.0).epsilon(1e-12));
  CHECK(ball.space_size() == 4u * 3u * 5u);
  const auto disk = build_grid(Dimension::TwoD, {0.5, 1.0, 3.0, 10.0, 1.0}, {4, 7, 2});
  CHECK(disk.total_weight() == doctest::Approx(pi * 0.25 * 3.0).epsilon(1e-12));
  for (const auto& p : disk.space_nodes) CHECK(p.z == 0.0);

  // |Y_1^0|^2 r^0 over the unit ball is R^3 / 3.
  const auto s = build_space_grid(Dimension::ThreeD, 1.0, {3, 4, 1});
  double integral = 0.0;
  for (std::size_t p = 0; p < s.size(); ++p) {
    const Vec3& x = s.position(p);
    integral += s.weight(p) * std::norm(specfun::sph_harm(1, 0, specfun::Angle::from_cartesian(x.x, x.y, x.z)));
  }
  CHECK(integral == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

  // A full period of exp(2 pi i t / T) integrates to zero.
  const auto t = build_grid(Dimension::TwoD, cfg, {1, 1, 16});
  cplx tsum = 0.0;
  for (std::size_t k = 0; k < t.time_size(); ++k)
    tsum += t.time_weights[k] * std::exp(cplx(0, 2 * pi * t.time_nodes[k] / cfg.duration));
  CHECK(std::abs(tsum) < 1e-12);

  CHECK_THROWS_AS(build_grid(Dimension::ThreeD, {0.0, 1.0, 1.0, 10.0, 1.0}, {2, 2, 2}), ConfigError);
  CHECK_THROWS_AS(build_grid(Dimension::ThreeD, {1.0, 1.0, 0.0, 10.0, 1.0}, {2, 2, 2}), ConfigError);
  CHECK_THROWS_AS(build_grid(Dimension::ThreeD, cfg, {0, 2, 2}), std::invalid_argument);
  CHECK_THROWS_AS(build_grid(Dimension::ThreeD, cfg, {2, 2, -1}), std::invalid_argument);
}

TEST_CASE("Gram matrix of a single mode is its squared norm") {
  const auto cfg = calibration();
  const std::vector<modes::ModeIndex> one{{10, 0, 0, Dimension::TwoD}};
  const auto grid = build_grid(Dimension::TwoD, cfg, minimum_resolution(one, cfg));
  const auto g = gram_of_modes(one, grid, cfg);
  REQUIRE(g.rows() == 1);
  double direct = 0.0;
  for (std::size_t p = 0; p < grid.size(); ++p)
    direct += grid.weight(p) * std::norm(modes::evaluate_mode(one[0], grid.position(p), grid.time(p), cfg));
  CHECK(g(0, 0).real() == doctest::Approx(direct).epsilon(1e-12));
  CHECK(g(0, 0).imag() == 0.0);
}

TEST_CASE("factorized Gram agrees with the flattened sum and is exactly Hermitian") {
  const auto cfg = calibration();
  const auto list = modes::enumerate_modes(Dimension::ThreeD, cfg);
  const std::vector<modes::ModeIndex> some(list.begin(), list.begin() + 60);
  const auto grid = build_grid(Dimension::ThreeD, cfg, {6, 2 * 11 + 1, 52});
  const auto g = gram_of_modes(some, grid, cfg);
  CHECK(g == g.adjoint());
  for (Eigen::Index i = 0; i < g.rows(); ++i) CHECK(g(i, i).imag() == 0.0);

  const Eigen::MatrixXcd a = modes::evaluate_modes_on_grid(some, grid, cfg);
  Eigen::VectorXd w(static_cast<Eigen::Index>(grid.size()));
  for (std::size_t p = 0; p < grid.size(); ++p) w(static_cast<Eigen::Index>(p)) = grid.weight(p);
  const Eigen::MatrixXcd brute = a.transpose() * w.asDiagonal() * a.conjugate();
  CHECK((g - brute).norm() <= 1e-12 * brute.norm());
}

TEST_CASE("Gram spectrum at the 2D calibration config") {
  const auto cfg = calibration();
  const auto list = modes::enumerate_modes(Dimension::TwoD, cfg);
  const auto res = minimum_resolution(list, cfg);
  CHECK(res.angular == 23);
  CHECK(res.time == 52);
  const auto grid = build_grid(Dimension::TwoD, cfg, res);
  const auto g = gram_of_modes(list, grid, cfg);
  const auto ng = normalized_gram(g);
  const auto nspec = eigen_spectrum(ng);
  CHECK(nspec.eigenvalues.back() >= 0.99);
  const RankPolicy strict{1e-6, 0.99};
  const auto spec = eigen_spectrum(g, strict);
  CHECK(spec.rank_threshold == 33);

  const auto fine = eigen_spectrum(gram_of_modes(list, build_grid(Dimension::TwoD, cfg, res.doubled()), cfg), strict);
  CHECK(std::abs(fine.rank_threshold - spec.rank_threshold) <= 1);
  CHECK(std::abs(fine.rank_energy - spec.rank_energy) <= 1);

  auto coarse = res;
  coarse.angular = 21;
  CHECK_THROWS_AS(gram_of_modes(list, build_grid(Dimension::TwoD, cfg, coarse), cfg), ResolutionError);
  coarse = res;
  coarse.time = 40;
  CHECK_THROWS_AS(gram_of_modes(list, build_grid(Dimension::TwoD, cfg, coarse), cfg), ResolutionError);
}

TEST_CASE("Gram energy rank at the 2D calibration config equals the mode count") {
  const auto cfg = calibration();
  const auto list = modes::enumerate_modes(Dimension::TwoD, cfg);
  const auto grid = build_grid(Dimension::TwoD, cfg, minimum_resolution(list, cfg));
  const auto spec = eigen_spectrum(gram_of_modes(list, grid, cfg), {1e-6, 0.99});
  CHECK(spec.rank_energy == static_cast<std::int64_t>(list.size()));
}

TEST_CASE("ensemble of a single plane wave has rank one") {
  const PhysicalConfig cfg{1.0, 0.0, 1.0, 2.0, 1.0};
  const auto grid = build_grid(Dimension::ThreeD, cfg, {6, 9, 8});
  const auto fields = ensemble(Dimension::ThreeD, cfg, 1, 1, 5);
  const auto spec = ensemble_spectrum(fields, grid);
  CHECK(spec.rank_threshold == 1);
  CHECK(spec.rank_energy == 1);
  CHECK(spec.dimension == static_cast<std::int64_t>(grid.size()));
  if (spec.eigenvalues.size() > 1) CHECK(std::abs(spec.eigenvalues[1]) <= 1e-10 * spec.eigenvalues[0]);
  // lambda_1 = sum_s w_s |a|^2
  CHECK(spec.eigenvalues[0] ==
        doctest::Approx(grid.total_weight() * std::norm(fields[0].waves[0].amplitude)).epsilon(1e-10));
}

TEST_CASE("ensemble spectrum: dual form, PSD, trace") {
  const PhysicalConfig cfg{0.3, 0.25, 1.0, 1.0, 1.0};
  const auto grid = build_grid(Dimension::TwoD, cfg, {5, 9, 6});  // 270 points
  for (int members : {30, 600}) {
    const auto fields = ensemble(Dimension::TwoD, cfg, members, 4, 11);
    const auto cov = ensemble_covariance(fields, grid);
    const auto direct = eigen_spectrum(cov);
    const auto fast = ensemble_spectrum(fields, grid);
    CHECK(fast.trace == doctest::Approx(direct.trace).epsilon(1e-10));
    const std::size_t k = std::min(direct.eigenvalues.size(), fast.eigenvalues.size());
    for (std::size_t i = 0; i < k; ++i)
      CHECK(std::abs(fast.eigenvalues[i] - direct.eigenvalues[i]) <= 1e-10 * direct.trace);
    CHECK(fast.rank_threshold == direct.rank_threshold);
    CHECK(fast.rank_energy == direct.rank_energy);

    double sum = 0.0;
    for (double v : direct.eigenvalues) {
      CHECK(v >= -1e-10 * direct.trace);
      sum += v;
    }
    CHECK(sum == doctest::Approx(direct.trace).epsilon(1e-8));
    const auto bound = std::min<std::int64_t>(static_cast<std::int64_t>(grid.size()), members);
    CHECK(fast.rank_threshold <= bound);
    CHECK(fast.rank_energy <= bound);
  }
}

TEST_CASE("ensemble rank is stable under ensemble and grid refinement") {
  const auto cfg = kLadderBase;
  const GridResolution res{8, 23, 16};
  const auto grid = build_grid(Dimension::TwoD, cfg, res);
  const auto small = ensemble_spectrum(ensemble(Dimension::TwoD, cfg, 200, 8, 3), grid);
  const auto large = ensemble_spectrum(ensemble(Dimension::TwoD, cfg, 400, 8, 3), grid);
  INFO("energy ranks " << small.rank_energy << " / " << large.rank_energy);
  CHECK(std::abs(large.rank_energy - small.rank_energy) <= 0.05 * static_cast<double>(large.rank_energy));
  CHECK(std::abs(large.rank_threshold - small.rank_threshold) <= 0.05 * static_cast<double>(large.rank_threshold));

  const auto fine = ensemble_spectrum(ensemble(Dimension::TwoD, cfg, 200, 8, 3), build_grid(Dimension::TwoD, cfg, res.doubled()));
  INFO("grid ranks " << small.rank_energy << " / " << fine.rank_energy);
  CHECK(std::abs(fine.rank_energy - small.rank_energy) <= 1);
  CHECK(std::abs(fine.rank_threshold - small.rank_threshold) <= 1);
}

TEST_CASE("Hermitian eigensolver") {
  const auto id = eigen_spectrum(Eigen::MatrixXcd::Identity(5, 5));
  for (double v : id.eigenvalues) CHECK(v == doctest::Approx(1.0).epsilon(1e-14));

  std::mt19937_64 rng(21);
  const Eigen::MatrixXcd u = random_unitary(rng, 3);
  const Eigen::MatrixXcd m = u * Eigen::Vector3d(1, 3, 2).cast<cplx>().asDiagonal() * u.adjoint();
  const auto d = eigen_spectrum(m);
  REQUIRE(d.eigenvalues.size() == 3);
  CHECK(d.eigenvalues[0] == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(d.eigenvalues[1] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(d.eigenvalues[2] == doctest::Approx(1.0).epsilon(1e-12));

  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::MatrixXcd h = random_hermitian(rng, 4);
    const auto want = oracle::charpoly_eigenvalues(h);
    const auto got = hermitian_eigen(h);
    for (int i = 0; i < 4; ++i) CHECK(got.values(i) == doctest::Approx(want[i]).epsilon(1e-8));
    const Eigen::MatrixXcd back = got.vectors * got.values.cast<cplx>().asDiagonal() * got.vectors.adjoint();
    CHECK((back - h).norm() <= 1e-12 * h.norm());
    const auto again = hermitian_eigen(h);
    CHECK(again.values == got.values);
  }

  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::MatrixXcd a = random_hermitian(rng, 4);
    const Eigen::MatrixXcd psd = a * a.adjoint();
    const auto want = oracle::charpoly_eigenvalues(psd);
    const auto got = eigen_spectrum(psd);
    for (int i = 0; i < 4; ++i) CHECK(got.eigenvalues[i] == doctest::Approx(want[i]).epsilon(1e-8));
  }

  Eigen::MatrixXcd bad = Eigen::MatrixXcd::Identity(3, 3);
  bad(0, 1) = cplx(0.5, 0.0);
  CHECK_THROWS_AS(eigen_spectrum(bad), std::invalid_argument);
  CHECK_THROWS_AS(hermitian_eigen(bad), std::invalid_argument);
  CHECK_THROWS_AS(eigen_spectrum(Eigen::MatrixXcd::Identity(2, 3)), std::invalid_argument);
}

TEST_CASE("effective rank readouts") {
  SpectrumReport s;
  s.eigenvalues = {10.0, 5.0, 1.0, 0.01, 0.0};
  s.trace = 16.01;
  s.dimension = 5;
  CHECK(effective_rank(s, {1e-3, 0.99}).threshold == 4);
  CHECK(effective_rank(s, {0.2, 0.99}).threshold == 2);
  CHECK(effective_rank(s, {1e-3, 0.99}).energy == 3);
  CHECK(effective_rank(s, {1e-3, 0.9}).energy == 2);
  CHECK(effective_rank(s, {1e-3, 0.5}).energy == 1);
  CHECK(effective_rank(SpectrumReport{.eigenvalues = {1.0, 1e-6}, .trace = 1.0 + 1e-6}, {1e-3, 0.99}).threshold == 1);
  CHECK(effective_rank(SpectrumReport{.eigenvalues = std::vector<double>(7, 0.3), .trace = 2.1}, {1e-3, 0.99}).energy == 7);
  CHECK(effective_rank(SpectrumReport{.eigenvalues = {0.5, 0.3, 0.15, 0.05}, .trace = 1.0}, {1e-3, 0.9}).energy == 3);
  s.eigenvalues = {0.0, 0.0};
  s.trace = 0.0;
  CHECK(effective_rank(s, {}).threshold == 0);
  CHECK(effective_rank(s, {}).energy == 0);
  s.eigenvalues.clear();
  CHECK_THROWS_AS(effective_rank(s, {}), std::invalid_argument);
  CHECK_THROWS_AS(effective_rank(SpectrumReport{.eigenvalues = {1.0}, .trace = 1.0}, {0.0, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(RankPolicy({0.1, 1.0}).validate(), std::invalid_argument);
}

TEST_CASE("Jacobi-Anger truncation error") {
  const modes::WaveVector still(Dimension::ThreeD, {0, 0, 1}, 0.0, 1.0);
  CHECK(truncation_error(still, 1.0, 0, default_truncation_resolution(0.0, 0)) <= 1e-14);

  for (Dimension dim : {Dimension::ThreeD, Dimension::TwoD}) {
    const modes::WaveVector wv(dim, {0.6, 0.8, 0.0}, 5.0 / (2 * pi), 1.0);
    const auto profile = truncation_error_profile(wv, 1.0, 12, default_truncation_resolution(5.0, 12));
    REQUIRE(profile.size() == 13);
    CHECK(profile[7] <= 0.1);
    CHECK(profile[12] <= profile[7] / 100);
    for (std::size_t n = 1; n < profile.size(); ++n) CHECK(profile[n] <= profile[n - 1]);
    CHECK(truncation_error(wv, 1.0, 7, default_truncation_resolution(5.0, 7)) == doctest::Approx(profile[7]).epsilon(1e-10));
    CHECK(truncation_error(wv, 0.0, 3, {2, 3, 1}) == 0.0);
  }
}
