#pragma once

#include <memory>
#include <string>
#include <vector>

#include "shearstab/grid.hpp"

namespace shearstab {

/// Analytic background shear profile U(y) on the half line, with complex
/// evaluation, derivatives, local Taylor data and the limit U_+.
/// Instances are immutable and cheap to copy.
class ShearProfile {
 public:
  cplx value(cplx y) const;
  cplx d1(cplx y) const;
  cplx d2(cplx y) const;
  cplx d3(cplx y) const;
  cplx d4(cplx y) const;

  /// Taylor coefficients of U about `center` (coefficient of (y-center)^m
  /// for m = 0 .. n-1).
  std::vector<cplx> taylor(cplx center, int n) const;

  double u_plus() const;
  bool monotone() const;
  bool concave() const;
  /// Half-width of the strip around the real axis where the complex
  /// evaluation is trusted.
  double analyticity_width() const;
  const std::string& name() const;

  /// The two profiles selectable by name: "tanh" (u_plus * tanh(y)) and
  /// "exp_layer" (u_plus * (1 - exp(-y))).
  static ShearProfile builtin(const std::string& name, double u_plus);

  /// Inflected test profile tanh(y-1) + tanh(1); U(0) = 0, u_plus = 1 + tanh 1.
  static ShearProfile mixing_layer();
  /// U(y) = slope * y (transport tests only; no finite limit).
  static ShearProfile linear(double slope);
  /// U == u_plus (free-space tests only; violates U(0) = 0 deliberately).
  static ShearProfile uniform(double u_plus);
  /// U(y) = -amp (1 - e^{-mu y}) - conj(amp) (1 - e^{-conj(mu) y});
  /// the analytic symmetrized form of the second-layer background.
  static ShearProfile two_exponential(cplx amp, cplx mu);

  struct Impl;

 private:
  explicit ShearProfile(std::shared_ptr<const Impl> impl);
  std::shared_ptr<const Impl> impl_;
};

/// Real heat-equation state on a uniform grid (values[0] pinned to zero).
struct HeatState {
  std::vector<double> grid;
  std::vector<double> values;
  double time = 0.0;
};

/// Advance the Dirichlet heat equation; far field clamped to u_plus at the
/// last node. Default scheme is Crank-Nicolson; the explicit scheme is kept
/// for oracle cross-checks and enforces its CFL bound.
HeatState heat_evolve(const HeatState& state, double dt, int steps, double u_plus,
                      bool explicit_scheme = false);

/// Complex critical point y_c with U(y_c) = c (Newton from the real preimage
/// of Re c).
cplx critical_point(const ShearProfile& profile, cplx c);

}  // namespace shearstab
