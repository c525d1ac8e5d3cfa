// gbeam - shared numeric helpers

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace gbeam {

using Complex = std::complex<double>;

// C-infinity bump: exp(1 - 1/(1-s)) for s < 1, else 0 (s = squared scaled radius).
inline double bump_c_inf(double s) {
  if (s >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - s));
}

// Ordinary least squares slope of y vs x, plus 95% confidence half-width.
struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double ci95 = 0.0;  // half-width on the slope
};
SlopeFit fit_slope(const std::vector<double>& x, const std::vector<double>& y);

// log-log slope of values vs scales (both positive); drops non-finite pairs.
SlopeFit fit_loglog_slope(const std::vector<double>& scale, const std::vector<double>& value);

// Composite Simpson on uniformly spaced samples (n odd treated exactly,
// even sample counts fall back to trapezoid on the last interval).
double simpson(const std::vector<double>& f, double dx);
Complex simpson(const std::vector<Complex>& f, double dx);

// Cumulative integral (trapezoid) of uniformly spaced samples, out[0] = 0.
std::vector<double> cumtrapz(const std::vector<double>& f, double dx);
std::vector<Complex> cumtrapz(const std::vector<Complex>& f, double dx);

// 6-point (quintic) Lagrange interpolation on a uniform grid.
// Values outside the grid clamp to the boundary stencil.
double interp6(const std::vector<double>& f, double x0, double dx, double x);
Complex interp6(const std::vector<Complex>& f, double x0, double dx, double x);

// FNV-1a 64-bit content hash, hex string; stable across runs.
std::uint64_t fnv1a64(const void* data, std::size_t n);
std::string fnv1a64_hex(const std::string& content);

// Deterministic uniform double in [a, b) from a seeded engine.
inline double uniform(std::mt19937_64& rng, double a, double b) {
  // fixed 53-bit mapping; avoids distribution implementation differences
  const double u = (rng() >> 11) * (1.0 / 9007199254740992.0);
  return a + (b - a) * u;
}
inline int uniform_int(std::mt19937_64& rng, int lo, int hi) {  // inclusive
  return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

}  // namespace gbeam
