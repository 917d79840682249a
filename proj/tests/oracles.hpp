#pragma once

// Independent reference computations used by the tests. Nothing here calls
// into the library; closed forms are written out from first principles.

#include <cmath>
#include <cstdint>
#include <vector>

namespace oracle {

inline constexpr double c_nm_per_ps = 299792.458;
inline constexpr double pi = 3.14159265358979323846;

inline double delay_ps(double dL_nm) { return dL_nm / c_nm_per_ps; }

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

/// P(|X| < h) for X ~ N(mu, sigma).
inline double gaussian_window_mass(double mu, double sigma, double h) {
  return normal_cdf((h - mu) / sigma) - normal_cdf((-h - mu) / sigma);
}

/// Raised-cosine flat top written independently: amplitude 1 on
/// [c - W/2 + E/2, c + W/2 - E/2], cosine edges of width E around the
/// half-amplitude points c -+ W/2.
inline double flat_top(double t, double centre, double fwhm, double edge) {
  const double a = std::abs(t - centre);
  const double inner = 0.5 * fwhm - 0.5 * edge;
  if (a <= inner) return 1.0;
  if (a >= inner + edge) return 0.0;
  return 0.5 * (1.0 + std::cos(pi * (a - inner) / edge));
}

/// Simpson integral of f over [a, b] with n (even) intervals.
template <class F>
double simpson(F f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

/// O(N*M) pair count with |t2 - shift - t1| < h.
inline std::uint64_t brute_pairs(const std::vector<std::int64_t>& a,
                                 const std::vector<std::int64_t>& b, double h,
                                 std::int64_t shift = 0) {
  std::uint64_t n = 0;
  for (auto t1 : a)
    for (auto t2 : b)
      if (std::abs(static_cast<double>(t2 - shift - t1)) < h) ++n;
  return n;
}

/// Pearson chi-square for observed counts against expected probabilities.
inline double chi_square(const std::vector<double>& observed, const std::vector<double>& p,
                         double n) {
  double chi = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double e = n * p[i];
    if (e > 0.0) chi += (observed[i] - e) * (observed[i] - e) / e;
  }
  return chi;
}

} // namespace oracle
