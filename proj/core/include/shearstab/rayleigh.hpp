#pragma once

#include <optional>
#include <string>
#include <vector>

#include "shearstab/grid.hpp"
#include "shearstab/profile.hpp"

namespace shearstab::rayleigh {

/// Frobenius series of the regular solution about the critical point y_c:
/// psi^r(y) = sum_{n>=1} beta_n (y - y_c)^n, beta_1 = 1.
struct CriticalLayerSeries {
  cplx center;
  std::vector<cplx> beta;
  double radius = 0.0;

  cplx eval(cplx y) const;
  cplx eval_d1(cplx y) const;
};

CriticalLayerSeries regular_series(const ShearProfile& profile, double alpha, cplx c,
                                   int nterms = 44);

/// Regular solution extended to the real grid by continuation.
GridFunction regular_solution(const ShearProfile& profile, double alpha, cplx c, const Grid& grid);

/// Second (singular) solution, normalized so that Wron(psi^r, psi^s) = 1 and
/// psi^s(y_star) = 0; log branch cut on the vertical half line through y_c
/// (downward for Im y_c > 0, mirrored otherwise).
GridFunction singular_solution(const ShearProfile& profile, double alpha, cplx c, const Grid& grid,
                               double y_star);

/// Decaying/growing pair with unit Wronskian psi_- psi_+' - psi_-' psi_+ = 1.
struct Basis {
  Grid grid;
  std::vector<cplx> psi_minus, dpsi_minus;
  std::vector<cplx> psi_plus, dpsi_plus;
  cplx bv_minus;   // psi_-(0)
  cplx bv_dminus;  // psi_-'(0)
  cplx wronskian;  // as-normalized value (== 1)
  std::string log_branch_cut;
};

Basis decaying_pair(const ShearProfile& profile, double alpha, cplx c, const Grid& grid);

/// psi_-(0) alone (cheap path for spectrum scans). When `below_path` is set,
/// the integration detours below the critical point (viscous branch rule).
cplx decaying_boundary_value(const ShearProfile& profile, double alpha, cplx c, double ymax = 30.0,
                             bool below_path = false);
/// Both boundary values (psi_-(0), psi_-'(0)) under the same path rule.
struct BoundaryData {
  cplx psi, dpsi;
};
BoundaryData decaying_boundary_data(const ShearProfile& profile, double alpha, cplx c,
                                    double ymax = 30.0, bool below_path = false);

/// Green function of Ray_{alpha,c} with G(x,0) = 0 and decay in y.
cplx green_function(const ShearProfile& profile, double alpha, cplx c, double x, double y,
                    const Grid& grid);

GridFunction solve_rayleigh_bvp(const ShearProfile& profile, double alpha, cplx c,
                                const GridFunction& f);
/// Fast path reusing a prebuilt basis (contour quadratures).
GridFunction solve_rayleigh_bvp(const Basis& basis, const ShearProfile& profile, cplx c,
                                const GridFunction& f);

/// Zeros of c -> psi_-(0,c) inside the rectangle [lo.re, hi.re] x [lo.im, hi.im],
/// located by the argument principle and polished by Newton.
std::vector<cplx> point_spectrum(const ShearProfile& profile, double alpha, cplx lo, cplx hi);

enum class Verdict { stable_certificate, inconclusive };
/// Rayleigh criterion: constant-sign U'' on a dense sample certifies stability.
Verdict criterion(const ShearProfile& profile);

}  // namespace shearstab::rayleigh
