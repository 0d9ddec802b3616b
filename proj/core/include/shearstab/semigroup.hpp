#pragma once

#include <vector>

#include "shearstab/grid.hpp"
#include "shearstab/profile.hpp"

namespace shearstab::semigroup {

/// Single-Fourier-mode state: vorticity and the stream function derived from
/// it through the half-line Poisson kernel (psi(0) = 0 built in).
struct ModeState {
  double alpha = 0.0;
  GridFunction omega;
  GridFunction psi;
  double time = 0.0;
};

/// psi(x) = int_0^inf H_alpha(x, y) omega(y) dy with
/// H_alpha(x,y) = [e^{-a|x-y|} - e^{-a(x+y)}] / (2a), by exponentially
/// weighted recursions (exact for piecewise-linear omega).
GridFunction poisson_invert(double alpha, const GridFunction& omega);

ModeState make_state(double alpha, GridFunction omega, double time = 0.0);

/// Linearized Euler evolution of one mode (interaction-picture RK4).
ModeState evolve_linear_euler(const ShearProfile& profile, const ModeState& state, double t_final,
                              double dt);
/// Trajectory variant: returns states at the requested output times.
std::vector<ModeState> evolve_linear_euler_traj(const ShearProfile& profile,
                                                const ModeState& state, double t_final, double dt,
                                                const std::vector<double>& out_times);

/// Linearized Navier-Stokes evolution (Strang split: Crank-Nicolson viscous
/// half-steps around the advective RK step; no-slip enforced through the
/// influence-matrix closure for the wall vorticity).
ModeState evolve_linear_ns(const ShearProfile& profile, const ModeState& state, double nu,
                           double t_final, double dt);
std::vector<ModeState> evolve_linear_ns_traj(const ShearProfile& profile, const ModeState& state,
                                             double nu, double t_final, double dt,
                                             const std::vector<double>& out_times);

/// Piecewise-linear contour in the c plane; closed contours encircle the
/// spectrum counterclockwise.
struct Contour {
  std::vector<cplx> vertices;
  bool closed = true;

  /// Rectangle around the segment [0, u_plus] with the given margins.
  static Contour rectangle(double u_plus, double margin_re, double margin_im);
};

/// e^{L_E t} psi0 evaluated by the resolvent contour integral
///   psi(t) = -(alpha / 2 pi) oint e^{-i alpha c t} psi_{alpha,c} dc,
///   psi_{alpha,c} = (i/alpha) Ray^{-1} omega_0,
/// with adaptive trapezoid refinement per segment.
GridFunction resolvent_contour_evolve(const ShearProfile& profile, double alpha,
                                      const GridFunction& psi0, double t, const Contour& contour);

/// Pointwise vorticity through the zeta decomposition; y snaps to the grid.
cplx vorticity_contour(const ShearProfile& profile, double alpha, const GridFunction& omega0,
                       double t, double y, const Contour& contour);

struct DampingReport {
  double decay_exponent = 0.0;
  GridFunction omega_infinity;  // demodulated vorticity averaged over the last decade
};

/// Least-squares slope of log(alpha ||psi||_inf + ||psi'||_inf) vs log(1+t)
/// over t >= 10, plus the demodulated vorticity limit.
DampingReport damping_diagnostics(const ShearProfile& profile,
                                  const std::vector<ModeState>& trajectory);

}  // namespace shearstab::semigroup
