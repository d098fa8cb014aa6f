#pragma once

// Scalar special functions for the free-space mode basis.
//
// Conventions
//   assoc_legendre(n, m, u) is the unnormalized associated Legendre function
//   with the Condon-Shortley phase:
//       P_n^m(u) = (-1)^m (1 - u^2)^{m/2} d^m/du^m P_n(u),           m >= 0
//       P_n^{-m}(u) = (-1)^m (n-m)!/(n+m)! P_n^m(u)
//   sph_harm(n, m, angle) is the orthonormal spherical harmonic
//       Y_n^m(theta, phi) = sqrt((2n+1)/(4 pi) (n-m)!/(n+m)!) P_n^m(cos theta) e^{i m phi}
//   so that Y_n^{-m} = (-1)^m conj(Y_n^m) and the set is orthonormal on S^2.

#include <complex>
#include <vector>

namespace wavedof::specfun {

/// Direction on the unit sphere. theta is the colatitude in [0, pi];
/// phi is stored reduced to [0, 2 pi).
class Angle {
public:
  Angle() = default;
  Angle(double theta, double phi);

  /// Direction of a (not necessarily unit) Cartesian vector; the zero vector
  /// maps to theta = phi = 0.
  static Angle from_cartesian(double x, double y, double z);

  double theta() const { return theta_; }
  double phi() const { return phi_; }

private:
  double theta_ = 0.0;
  double phi_ = 0.0;
};

/// Spherical Bessel function of the first kind j_n(x), n >= 0, x >= 0.
double spherical_bessel_j(int n, double x);

/// j_0(x) .. j_nmax(x) from a single downward recurrence.
std::vector<double> spherical_bessel_j_all(int nmax, double x);

/// Cylindrical Bessel function of the first kind J_n(x), n >= 0, x >= 0.
double bessel_J(int n, double x);

/// J_0(x) .. J_nmax(x) from a single downward recurrence.
std::vector<double> bessel_J_all(int nmax, double x);

/// Legendre polynomial P_n(u).
double legendre(int n, double u);

/// Associated Legendre function P_n^m(u); throws std::invalid_argument for
/// |m| > n or |u| > 1.
double assoc_legendre(int n, int m, double u);

/// Orthonormal complex spherical harmonic Y_n^m; throws for |m| > n.
std::complex<double> sph_harm(int n, int m, const Angle& angle);

/// Index of (n, m) inside a harmonic table: n*n + n + m.
constexpr int harmonic_index(int n, int m) { return n * n + n + m; }

/// All Y_n^m for 0 <= n <= nmax, laid out by harmonic_index.
std::vector<std::complex<double>> sph_harm_all(int nmax, const Angle& angle);

}  // namespace wavedof::specfun
