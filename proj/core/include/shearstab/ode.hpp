#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "shearstab/errors.hpp"
#include "shearstab/grid.hpp"

namespace shearstab {

struct OdeState {
  cplx psi, dpsi;
};

/// Adaptive Dormand-Prince 5(4) for psi'' = q(z) psi along the straight
/// segment z0 -> z1. If `stops` is non-empty it lists fractions t in (0,1]
/// where the integrator must land exactly; `on_stop` is called at each.
template <class Q>
OdeState integrate_second_order(Q&& q, cplx z0, cplx z1, OdeState y0, double rtol = 1e-11,
                                double atol = 1e-14, const std::vector<double>* stops = nullptr,
                                const std::function<void(int, const OdeState&)>& on_stop = {}) {
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                          e4 = 125.0 / 192 - 393.0 / 640, e5 = -2187.0 / 6784 + 92097.0 / 339200,
                          e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;

  const cplx dz = z1 - z0;
  auto f = [&](double t, const OdeState& y) -> OdeState {
    cplx z = z0 + t * dz;
    return {y.dpsi * dz, q(z) * y.psi * dz};
  };

  OdeState y = y0;
  double t = 0.0;
  double h = 1e-3;
  size_t stop_idx = 0;
  long steps = 0;
  OdeState k1 = f(t, y);
  const double hmin = 1e-14;

  while (t < 1.0) {
    double t_target = 1.0;
    int stop_id = -1;
    if (stops && stop_idx < stops->size()) {
      t_target = (*stops)[stop_idx];
      stop_id = static_cast<int>(stop_idx);
    }
    if (h > t_target - t) h = t_target - t;
    if (h < hmin) h = hmin;

    auto adv = [&](const OdeState& yy, cplx w1p, cplx w1d) { return OdeState{yy.psi + w1p, yy.dpsi + w1d}; };
    OdeState k2 = f(t + c2 * h, adv(y, h * a21 * k1.psi, h * a21 * k1.dpsi));
    OdeState k3 = f(t + c3 * h, adv(y, h * (a31 * k1.psi + a32 * k2.psi), h * (a31 * k1.dpsi + a32 * k2.dpsi)));
    OdeState k4 = f(t + c4 * h, adv(y, h * (a41 * k1.psi + a42 * k2.psi + a43 * k3.psi),
                                    h * (a41 * k1.dpsi + a42 * k2.dpsi + a43 * k3.dpsi)));
    OdeState k5 = f(t + c5 * h, adv(y, h * (a51 * k1.psi + a52 * k2.psi + a53 * k3.psi + a54 * k4.psi),
                                    h * (a51 * k1.dpsi + a52 * k2.dpsi + a53 * k3.dpsi + a54 * k4.dpsi)));
    OdeState k6 = f(t + h, adv(y, h * (a61 * k1.psi + a62 * k2.psi + a63 * k3.psi + a64 * k4.psi + a65 * k5.psi),
                               h * (a61 * k1.dpsi + a62 * k2.dpsi + a63 * k3.dpsi + a64 * k4.dpsi + a65 * k5.dpsi)));
    OdeState ynew{y.psi + h * (b1 * k1.psi + b3 * k3.psi + b4 * k4.psi + b5 * k5.psi + b6 * k6.psi),
                  y.dpsi + h * (b1 * k1.dpsi + b3 * k3.dpsi + b4 * k4.dpsi + b5 * k5.dpsi + b6 * k6.dpsi)};
    OdeState k7 = f(t + h, ynew);
    cplx errp = h * (e1 * k1.psi + e3 * k3.psi + e4 * k4.psi + e5 * k5.psi + e6 * k6.psi + e7 * k7.psi);
    cplx errd = h * (e1 * k1.dpsi + e3 * k3.dpsi + e4 * k4.dpsi + e5 * k5.dpsi + e6 * k6.dpsi + e7 * k7.dpsi);

    double scale_p = atol + rtol * std::max(std::abs(y.psi), std::abs(ynew.psi));
    double scale_d = atol + rtol * std::max(std::abs(y.dpsi), std::abs(ynew.dpsi));
    double err = std::max(std::abs(errp) / scale_p, std::abs(errd) / scale_d);

    if (err <= 1.0 || h <= hmin * 1.01) {
      t += h;
      y = ynew;
      k1 = k7;
      if (stop_id >= 0 && t >= t_target - 1e-15) {
        if (on_stop) on_stop(stop_id, y);
        ++stop_idx;
      }
    }
    double fac = 0.9 * std::pow(std::max(err, 1e-10), -0.2);
    h *= std::min(5.0, std::max(0.2, fac));
    if (++steps > 4000000)
      fail(errc::not_converged, "ode: step limit exceeded on segment");
  }
  return y;
}

/// Taylor coefficients (about a regular point) of the solution of
///   (U - c)(psi'' - alpha^2 psi) = U'' psi
/// given the Taylor coefficients of U at the same point and initial data
/// psi0, dpsi0. Requires U(center) != c.
std::vector<cplx> rayleigh_taylor_coeffs(const std::vector<cplx>& u_taylor, cplx c, double alpha,
                                         cplx psi0, cplx dpsi0, int nterms);

}  // namespace shearstab
