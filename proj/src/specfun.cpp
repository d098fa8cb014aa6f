#include "wavedof/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace wavedof::specfun {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Miller recurrences rescale once the running values pass this magnitude so
// that the accumulated sum of squares stays finite.
constexpr double kRescaleAt = 1e100;
constexpr double kRescaleBy = 1e-100;

void require_order_and_argument(int n, double x, const char* who) {
  if (n < 0) throw std::invalid_argument(std::string(who) + ": order must be >= 0");
  if (!(x >= 0.0) || !std::isfinite(x))
    throw std::invalid_argument(std::string(who) + ": argument must be finite and >= 0");
}

// Starting order for the downward recurrences. The minimal solution has to be
// dominant by the time the recurrence reaches max(nmax, x).
int miller_start(int nmax, double x) {
  const double top = std::max(static_cast<double>(nmax), std::ceil(x));
  const int start = static_cast<int>(top) + 32 + static_cast<int>(std::ceil(std::sqrt(40.0 * top)));
  return start + (start & 1);  // even, for the cylindrical even-order sum
}

// Normalized P_n^m for m >= 0 (includes sqrt((2n+1)/4pi (n-m)!/(n+m)!) and
// the Condon-Shortley phase).
double normalized_plm(int n, int m, double u) {
  double pmm = 1.0;
  if (m > 0) {
    const double omx2 = (1.0 - u) * (1.0 + u);
    double fact = 1.0;
    for (int i = 1; i <= m; ++i) {
      pmm *= omx2 * fact / (fact + 1.0);
      fact += 2.0;
    }
  }
  pmm = std::sqrt((2 * m + 1) * pmm / (4.0 * kPi));
  if (m & 1) pmm = -pmm;
  if (n == m) return pmm;

  double pmmp1 = u * std::sqrt(2.0 * m + 3.0) * pmm;
  if (n == m + 1) return pmmp1;

  double oldfact = std::sqrt(2.0 * m + 3.0);
  double pll = 0.0;
  for (int ll = m + 2; ll <= n; ++ll) {
    const double fact = std::sqrt((4.0 * ll * ll - 1.0) / (static_cast<double>(ll) * ll - static_cast<double>(m) * m));
    pll = (u * pmmp1 - pmm / oldfact) * fact;
    oldfact = fact;
    pmm = pmmp1;
    pmmp1 = pll;
  }
  return pll;
}

// (n+m)! / (n-m)! for 0 <= m <= n.
double factorial_ratio(int n, int m) {
  double r = 1.0;
  for (int k = n - m + 1; k <= n + m; ++k) r *= k;
  return r;
}

}  // namespace

Angle::Angle(double theta, double phi) {
  if (!(theta >= 0.0 && theta <= kPi))
    throw std::invalid_argument("Angle: theta must lie in [0, pi]");
  if (!std::isfinite(phi)) throw std::invalid_argument("Angle: phi must be finite");
  double p = std::fmod(phi, kTwoPi);
  if (p < 0.0) p += kTwoPi;
  if (p >= kTwoPi) p = 0.0;
  theta_ = theta;
  phi_ = p;
}

Angle Angle::from_cartesian(double x, double y, double z) {
  const double rho = std::hypot(x, y);
  if (rho == 0.0 && z == 0.0) return Angle{};
  return Angle(std::atan2(rho, z), std::atan2(y, x));
}

std::vector<double> spherical_bessel_j_all(int nmax, double x) {
  require_order_and_argument(nmax, x, "spherical_bessel_j");
  std::vector<double> out(static_cast<std::size_t>(nmax) + 1, 0.0);
  if (x == 0.0) {
    out[0] = 1.0;
    return out;
  }

  const int start = miller_start(nmax, x);
  std::vector<double> f(static_cast<std::size_t>(start) + 2, 0.0);
  f[start] = 1.0;
  // sum_{n>=0} (2n+1) j_n(x)^2 = 1
  double sumsq = (2.0 * start + 1.0);
  for (int n = start; n >= 1; --n) {
    f[n - 1] = (2.0 * n + 1.0) / x * f[n] - f[n + 1];
    if (std::abs(f[n - 1]) > kRescaleAt) {
      for (int k = n - 1; k <= start; ++k) f[k] *= kRescaleBy;
      sumsq *= kRescaleBy * kRescaleBy;
    }
    sumsq += (2.0 * (n - 1) + 1.0) * f[n - 1] * f[n - 1];
  }

  // Fix the overall sign against whichever closed form is larger.
  const double j0 = std::sin(x) / x;
  const double j1 = std::sin(x) / (x * x) - std::cos(x) / x;
  const bool use_j0 = std::abs(j0) >= std::abs(j1);
  const double ref = use_j0 ? j0 : j1;
  const double got = use_j0 ? f[0] : f[1];
  double scale = 1.0 / std::sqrt(sumsq);
  if ((ref < 0.0) != (got < 0.0)) scale = -scale;

  for (int n = 0; n <= nmax; ++n) out[n] = f[n] * scale;
  return out;
}

double spherical_bessel_j(int n, double x) {
  require_order_and_argument(n, x, "spherical_bessel_j");
  if (x == 0.0) return n == 0 ? 1.0 : 0.0;
  return spherical_bessel_j_all(n, x)[n];
}

std::vector<double> bessel_J_all(int nmax, double x) {
  require_order_and_argument(nmax, x, "bessel_J");
  std::vector<double> out(static_cast<std::size_t>(nmax) + 1, 0.0);
  if (x == 0.0) {
    out[0] = 1.0;
    return out;
  }

  const int start = miller_start(nmax, x);
  std::vector<double> f(static_cast<std::size_t>(start) + 2, 0.0);
  f[start] = 1.0;
  // J_0^2 + 2 sum_{k>=1} J_k^2 = 1 fixes the magnitude,
  // J_0 + 2 sum_{k>=1} J_{2k} = 1 fixes the sign.
  double sumsq = 2.0;
  double sum_even = 2.0;  // start is even
  for (int n = start; n >= 1; --n) {
    f[n - 1] = (2.0 * n) / x * f[n] - f[n + 1];
    if (std::abs(f[n - 1]) > kRescaleAt) {
      for (int k = n - 1; k <= start; ++k) f[k] *= kRescaleBy;
      sumsq *= kRescaleBy * kRescaleBy;
      sum_even *= kRescaleBy;
    }
    const int m = n - 1;
    const double w = (m == 0) ? 1.0 : 2.0;
    sumsq += w * f[m] * f[m];
    if (m % 2 == 0) sum_even += w * f[m];
  }

  double scale = 1.0 / std::sqrt(sumsq);
  if (sum_even < 0.0) scale = -scale;
  for (int n = 0; n <= nmax; ++n) out[n] = f[n] * scale;
  return out;
}

double bessel_J(int n, double x) {
  require_order_and_argument(n, x, "bessel_J");
  if (x == 0.0) return n == 0 ? 1.0 : 0.0;
  return bessel_J_all(n, x)[n];
}

double legendre(int n, double u) {
  if (n < 0) throw std::invalid_argument("legendre: degree must be >= 0");
  if (n == 0) return 1.0;
  double pm1 = 1.0, p = u;
  for (int k = 1; k < n; ++k) {
    const double next = ((2.0 * k + 1.0) * u * p - k * pm1) / (k + 1.0);
    pm1 = p;
    p = next;
  }
  return p;
}

double assoc_legendre(int n, int m, double u) {
  if (n < 0) throw std::invalid_argument("assoc_legendre: degree must be >= 0");
  if (std::abs(m) > n) throw std::invalid_argument("assoc_legendre: |m| must not exceed n");
  if (!(std::abs(u) <= 1.0)) throw std::invalid_argument("assoc_legendre: |u| must not exceed 1");

  const int am = std::abs(m);
  const double ratio = factorial_ratio(n, am);  // (n+|m|)!/(n-|m|)!
  double unnorm = 0.0;
  if (am <= 100) {
    // Direct recurrence; (2m-1)!! stays finite for these orders.
    double pmm = 1.0;
    const double s = std::sqrt((1.0 - u) * (1.0 + u));
    for (int i = 1; i <= am; ++i) pmm *= -(2.0 * i - 1.0) * s;
    if (n == am) {
      unnorm = pmm;
    } else {
      double pm1 = u * (2.0 * am + 1.0) * pmm;
      for (int l = am + 2; l <= n; ++l) {
        const double pl = (u * (2.0 * l - 1.0) * pm1 - (l + am - 1.0) * pmm) / (l - am);
        pmm = pm1;
        pm1 = pl;
      }
      unnorm = pm1;
    }
  } else {
    unnorm = normalized_plm(n, am, u) * std::sqrt(4.0 * kPi * ratio / (2.0 * n + 1.0));
  }
  if (m >= 0) return unnorm;
  return ((am & 1) ? -1.0 : 1.0) * unnorm / ratio;
}

std::complex<double> sph_harm(int n, int m, const Angle& angle) {
  if (n < 0) throw std::invalid_argument("sph_harm: degree must be >= 0");
  if (std::abs(m) > n) throw std::invalid_argument("sph_harm: |m| must not exceed n");
  const int am = std::abs(m);
  const double nbar = normalized_plm(n, am, std::cos(angle.theta()));
  const std::complex<double> y = std::polar(nbar, am * angle.phi());
  if (m >= 0) return y;
  return ((am & 1) ? -1.0 : 1.0) * std::conj(y);
}

std::vector<std::complex<double>> sph_harm_all(int nmax, const Angle& angle) {
  if (nmax < 0) throw std::invalid_argument("sph_harm_all: degree must be >= 0");
  const std::size_t count = static_cast<std::size_t>(nmax + 1) * static_cast<std::size_t>(nmax + 1);
  std::vector<std::complex<double>> out(count);
  const double u = std::cos(angle.theta());
  const double omx2 = (1.0 - u) * (1.0 + u);

  // pmm carries the normalized sectoral value across m.
  double pmm_unscaled = 1.0;  // prod_{i=1}^{m} omx2 (2i-1)/(2i)
  for (int m = 0; m <= nmax; ++m) {
    if (m > 0) pmm_unscaled *= omx2 * (2.0 * m - 1.0) / (2.0 * m);
    double pmm = std::sqrt((2 * m + 1) * pmm_unscaled / (4.0 * kPi));
    if (m & 1) pmm = -pmm;

    const std::complex<double> phase = std::polar(1.0, m * angle.phi());
    const double sign = (m & 1) ? -1.0 : 1.0;
    auto store = [&](int n, double value) {
      const std::complex<double> y = value * phase;
      out[harmonic_index(n, m)] = y;
      if (m > 0) out[harmonic_index(n, -m)] = sign * std::conj(y);
    };

    store(m, pmm);
    if (m == nmax) continue;
    double prev = pmm;
    double cur = u * std::sqrt(2.0 * m + 3.0) * pmm;
    store(m + 1, cur);
    double oldfact = std::sqrt(2.0 * m + 3.0);
    for (int ll = m + 2; ll <= nmax; ++ll) {
      const double fact = std::sqrt((4.0 * ll * ll - 1.0) / (static_cast<double>(ll) * ll - static_cast<double>(m) * m));
      const double next = (u * cur - prev / oldfact) * fact;
      oldfact = fact;
      prev = cur;
      cur = next;
      store(ll, cur);
    }
  }
  return out;
}

}  // namespace wavedof::specfun
