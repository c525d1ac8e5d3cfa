// gbeam - adaptive Dormand-Prince RK5(4) integrator
//
// Works for any state type with vector-space ops and a .norm() (Eigen types).
// Coefficients from Dormand & Prince 1980 (RK5(4)7M).

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace gbeam {

template <typename State>
struct OdeResult {
  std::vector<double> t;
  std::vector<State> y;
};

struct OdeOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  double h_init = 1e-3;
  double h_max = 0.1;
  std::size_t max_steps = 2000000;
};

// Integrates y' = f(t, y) from t0 to t1 (t1 > t0 or t1 < t0), recording every
// accepted step. An optional monitor can reject states (e.g. positivity loss);
// rejection triggers step-size refinement.
template <typename State, typename Rhs>
OdeResult<State> integrate_rk45(Rhs&& f, double t0, double t1, const State& y0,
                                const OdeOptions& opt = {},
                                std::function<bool(double, const State&)> monitor = nullptr,
                                std::function<bool(double, const State&)> stop_when = nullptr) {
  static const double A21 = 1.0 / 5;
  static const double A31 = 3.0 / 40, A32 = 9.0 / 40;
  static const double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9;
  static const double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187, A53 = 64448.0 / 6561,
                      A54 = -212.0 / 729;
  static const double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247,
                      A64 = 49.0 / 176, A65 = -5103.0 / 18656;
  static const double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192,
                      B5 = -2187.0 / 6784, B6 = 11.0 / 84;
  static const double E1 = 71.0 / 57600, E3 = -71.0 / 16695, E4 = 71.0 / 1920,
                      E5 = -17253.0 / 339200, E6 = 22.0 / 525, E7 = -1.0 / 40;
  static const double C2 = 1.0 / 5, C3 = 3.0 / 10, C4 = 4.0 / 5, C5 = 8.0 / 9;

  const double dir = (t1 >= t0) ? 1.0 : -1.0;
  double t = t0;
  State y = y0;
  OdeResult<State> out;
  out.t.push_back(t);
  out.y.push_back(y);

  double h = std::min(opt.h_init, opt.h_max) * dir;
  State k1 = f(t, y);
  std::size_t steps = 0;
  while (dir * (t1 - t) > 1e-15 * std::max(1.0, std::abs(t1))) {
    if (++steps > opt.max_steps) throw std::runtime_error("ode: step limit exceeded");
    if (dir * (t + h - t1) > 0) h = t1 - t;

    State k2 = f(t + C2 * h, y + h * (A21 * k1));
    State k3 = f(t + C3 * h, y + h * (A31 * k1 + A32 * k2));
    State k4 = f(t + C4 * h, y + h * (A41 * k1 + A42 * k2 + A43 * k3));
    State k5 = f(t + C5 * h, y + h * (A51 * k1 + A52 * k2 + A53 * k3 + A54 * k4));
    State k6 = f(t + h, y + h * (A61 * k1 + A62 * k2 + A63 * k3 + A64 * k4 + A65 * k5));
    State ynew = y + h * (B1 * k1 + B3 * k3 + B4 * k4 + B5 * k5 + B6 * k6);
    State k7 = f(t + h, ynew);
    State errv = h * (E1 * k1 + E3 * k3 + E4 * k4 + E5 * k5 + E6 * k6 + E7 * k7);

    const double sc = opt.abs_tol + opt.rel_tol * std::max(y.norm(), ynew.norm());
    const double err = errv.norm() / sc;
    bool accept = err <= 1.0;
    if (accept && monitor && !monitor(t + h, ynew)) accept = false;

    if (accept) {
      t += h;
      y = ynew;
      k1 = k7;  // FSAL
      out.t.push_back(t);
      out.y.push_back(y);
      if (stop_when && stop_when(t, y)) break;
    }
    double fac = 0.9 * std::pow(std::max(err, 1e-12), -0.2);
    fac = std::clamp(fac, 0.2, 5.0);
    h *= fac;
    if (std::abs(h) > opt.h_max) h = opt.h_max * dir;
    if (std::abs(h) < 1e-14) throw std::runtime_error("ode: step underflow");
  }
  return out;
}

}  // namespace gbeam
