#pragma once

#include <optional>
#include <vector>

#include "shearstab/grid.hpp"
#include "shearstab/profile.hpp"

namespace shearstab::os {

/// A point (alpha, c) of the viscous problem with its derived quantities:
/// epsilon = nu/(i alpha), gamma^3 = i alpha U'(y_c)/nu with arg gamma in
/// (0, pi/3), y_c the critical point, lambda = -i alpha c.
struct ViscousSpectralPoint {
  double alpha = 0.0;
  double nu = 0.0;
  cplx c, epsilon, gamma, y_c, lambda;

  static ViscousSpectralPoint make(const ShearProfile& profile, double alpha, cplx c, double nu);
};

struct DispersionScan {
  struct Row {
    double alpha0;
    cplx c0;
    double re_lambda;  // = alpha0 * Im c0
  };
  std::vector<Row> rows;
  std::optional<double> alpha_c;  // neutral crossing
  std::optional<double> alpha_m;  // growth maximum
  double max_growth = 0.0;
};

/// Residual of the dispersion relation in rescaled variables
/// (alpha = alpha0 nu^{1/4}, c = c0 nu^{1/4}):
///   alpha0 U+^2/U'(0) - c0 [1 - Ti]
/// For nu = 0 the limiting Tietjens relation is used; for nu > 0 the fast
/// side keeps the exact (gamma, y_c) and the slow side is the numerically
/// integrated decaying Rayleigh solution (viscous branch below y_c).
cplx dispersion_residual(double alpha0, cplx c0, const ShearProfile& profile, double nu);

/// Root c0 of the limiting relation at alpha0 (damped complex Newton).
cplx solve_dispersion(double alpha0, const ShearProfile& profile,
                      std::optional<cplx> seed = std::nullopt);

/// Root c (unrescaled) of the finite-nu relation at alpha.
cplx solve_dispersion_nu(double alpha, const ShearProfile& profile, double nu, cplx seed);

DispersionScan scan_growth(double alpha0_lo, double alpha0_hi, int n_points,
                           const ShearProfile& profile);

struct Band {
  double alpha_lo = 0.0, alpha_hi = 0.0;
  bool empty = true;
  double max_growth = 0.0;  // sup_alpha Re lambda inside the band
  double alpha_at_max = 0.0;
};
Band unstable_band(double nu, const ShearProfile& profile);

GridFunction fast_solution(const ShearProfile& profile, const ViscousSpectralPoint& pt,
                           const Grid& grid);
GridFunction slow_solution(const ShearProfile& profile, const ViscousSpectralPoint& pt,
                           const Grid& grid);

struct Eigenmode {
  GridFunction psi, u, v, omega;
};
Eigenmode eigenmode(const ShearProfile& profile, const ViscousSpectralPoint& pt, const Grid& grid);

/// Green function value of the Orr-Sommerfeld operator at (x, y); satisfies
/// G(x,0) = dG/dy(x,0) = 0, continuity of G..G'' and the -1/epsilon jump of
/// the third derivative across y = x.
cplx os_green_function(const ShearProfile& profile, const ViscousSpectralPoint& pt, double x,
                       double y);

/// One-sided evaluation with analytic derivatives (testing hook).
struct OSGreenSide {
  cplx G, dG, d2G, d3G;
};
OSGreenSide os_green_side(const ShearProfile& profile, const ViscousSpectralPoint& pt, double x,
                          double y, bool upper_side);

/// Eigenvalues c of the discretized OS operator (Chebyshev collocation on a
/// stretched half-line grid, clamped wall, decay conditions at the far end),
/// filtered by resolution doubling and sorted by Im c descending.
std::vector<cplx> collocation_spectrum(const ShearProfile& profile, double alpha, double nu,
                                       int n_modes);

/// Worst eigenpair residual ||(A - c B) psi|| / ||A psi|| among the n_check
/// most unstable discrete modes (testing hook).
double collocation_residual_check(const ShearProfile& profile, double alpha, double nu,
                                  int n_modes, int n_check);

}  // namespace shearstab::os
