#include "gbeam/util.hpp"

#include <algorithm>
#include <cstdio>

namespace gbeam {

SlopeFit fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  SlopeFit out;
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) return out;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double d = n * sxx - sx * sx;
  if (std::abs(d) < 1e-300) return out;
  out.slope = (n * sxy - sx * sy) / d;
  out.intercept = (sy - out.slope * sx) / n;
  if (n > 2) {
    double ss = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = y[i] - (out.intercept + out.slope * x[i]);
      ss += r * r;
    }
    const double se = std::sqrt(ss / (n - 2) / (sxx - sx * sx / n));
    out.ci95 = 1.96 * se;
  }
  return out;
}

SlopeFit fit_loglog_slope(const std::vector<double>& scale, const std::vector<double>& value) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < scale.size() && i < value.size(); ++i) {
    if (scale[i] > 0 && value[i] > 0 && std::isfinite(value[i])) {
      lx.push_back(std::log(scale[i]));
      ly.push_back(std::log(value[i]));
    }
  }
  return fit_slope(lx, ly);
}

template <typename T>
static T simpson_impl(const std::vector<T>& f, double dx) {
  const std::size_t n = f.size();
  if (n < 2) return T(0);
  T acc(0);
  std::size_t last = n - 1;
  if (n % 2 == 0) last = n - 2;  // leave one trapezoid interval
  for (std::size_t i = 0; i + 2 <= last; i += 2)
    acc += (f[i] + 4.0 * f[i + 1] + f[i + 2]) * (dx / 3.0);
  if (n % 2 == 0) acc += (f[n - 2] + f[n - 1]) * (0.5 * dx);
  return acc;
}

double simpson(const std::vector<double>& f, double dx) { return simpson_impl(f, dx); }
Complex simpson(const std::vector<Complex>& f, double dx) { return simpson_impl(f, dx); }

template <typename T>
static std::vector<T> cumtrapz_impl(const std::vector<T>& f, double dx) {
  std::vector<T> out(f.size(), T(0));
  for (std::size_t i = 1; i < f.size(); ++i)
    out[i] = out[i - 1] + (f[i - 1] + f[i]) * (0.5 * dx);
  return out;
}

std::vector<double> cumtrapz(const std::vector<double>& f, double dx) { return cumtrapz_impl(f, dx); }
std::vector<Complex> cumtrapz(const std::vector<Complex>& f, double dx) { return cumtrapz_impl(f, dx); }

template <typename T>
static T interp6_impl(const std::vector<T>& f, double x0, double dx, double x) {
  const int n = static_cast<int>(f.size());
  if (n == 0) return T(0);
  if (n < 6) {  // degenerate grids: nearest value
    int i = static_cast<int>(std::lround((x - x0) / dx));
    return f[std::clamp(i, 0, n - 1)];
  }
  const double s = (x - x0) / dx;
  int i0 = static_cast<int>(std::floor(s)) - 2;
  i0 = std::clamp(i0, 0, n - 6);
  T acc(0);
  for (int j = 0; j < 6; ++j) {
    double w = 1.0;
    for (int k = 0; k < 6; ++k) {
      if (k == j) continue;
      w *= (s - (i0 + k)) / double(j - k);
    }
    acc += w * f[i0 + j];
  }
  return acc;
}

double interp6(const std::vector<double>& f, double x0, double dx, double x) {
  return interp6_impl(f, x0, dx, x);
}
Complex interp6(const std::vector<Complex>& f, double x0, double dx, double x) {
  return interp6_impl(f, x0, dx, x);
}

std::uint64_t fnv1a64(const void* data, std::size_t n) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = 14695981039346656037ull;
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
  return h;
}

std::string fnv1a64_hex(const std::string& content) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(content.data(), content.size())));
  return std::string(buf);
}

}  // namespace gbeam
