#include "shearstab/orr_sommerfeld.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <map>

#include "shearstab/airy.hpp"
#include "shearstab/ode.hpp"
#include "shearstab/rayleigh.hpp"

namespace shearstab::os {

namespace {

cplx rotate_to_sector(cplx g) {
  const cplx rot = std::polar(1.0, 2.0 * M_PI / 3.0);
  for (int k = 0; k < 3; ++k) {
    const double a = std::atan2(g.imag(), g.real());
    if (a > 0.0 && a < M_PI / 3.0) return g;
    g *= rot;
  }
  fail(errc::branch, "gamma: no cube root lies in the sector (0, pi/3)");
}

double wall_shear(const ShearProfile& profile) { return profile.d1(0.0).real(); }

}  // namespace

ViscousSpectralPoint ViscousSpectralPoint::make(const ShearProfile& profile, double alpha, cplx c,
                                                double nu) {
  require(alpha > 0.0 && nu > 0.0, errc::validation,
          "viscous spectral point: alpha > 0 and nu > 0 required");
  ViscousSpectralPoint pt;
  pt.alpha = alpha;
  pt.nu = nu;
  pt.c = c;
  pt.epsilon = nu / (cplx(0.0, 1.0) * alpha);
  pt.y_c = critical_point(profile, c);
  pt.gamma =
      rotate_to_sector(std::pow(cplx(0.0, 1.0) * alpha * profile.d1(pt.y_c) / nu, 1.0 / 3.0));
  pt.lambda = -cplx(0.0, 1.0) * alpha * c;
  return pt;
}

cplx dispersion_residual(double alpha0, cplx c0, const ShearProfile& profile, double nu) {
  require(alpha0 > 0.0, errc::validation, "dispersion: alpha0 must be positive");
  const double u1 = wall_shear(profile);
  const double up = profile.u_plus();
  if (nu == 0.0) {
    const cplx w = std::cbrt(alpha0) * std::pow(u1, -2.0 / 3.0) * c0;
    const cplx ti = airy::tietjens_continued(w);
    return alpha0 * up * up / u1 - c0 * (1.0 - ti);
  }
  const double q = std::pow(nu, 0.25);
  const double alpha = alpha0 * q;
  const cplx c = c0 * q;
  const cplx yc = critical_point(profile, c);
  const cplx gamma =
      rotate_to_sector(std::pow(cplx(0.0, 1.0) * alpha * profile.d1(yc) / nu, 1.0 / 3.0));
  const airy::Ladder lad = airy::ladder(airy::Kind::Ai, -gamma * yc);
  const cplx pf = lad.i2;
  const cplx dpf = gamma * lad.i1;
  const auto bd = rayleigh::decaying_boundary_data(profile, alpha, c, 30.0, /*below_path=*/true);
  const cplx lhs = pf * bd.dpsi;
  const cplx rhs = bd.psi * dpf;
  return (lhs - rhs) / (std::abs(lhs) + std::abs(rhs) + 1e-300);
}

namespace {

cplx newton_dispersion(double alpha0, const ShearProfile& profile, double nu, cplx seed,
                       double tol) {
  cplx c = seed;
  auto R = [&](cplx cc) { return dispersion_residual(alpha0, cc, profile, nu); };
  cplx r = R(c);
  for (int it = 0; it < 100; ++it) {
    if (std::abs(r) < tol) return c;
    const double h = 1e-7 * std::max(1.0, std::abs(c));
    const cplx dr = (R(c + h) - R(c - h)) / (2.0 * h);
    require(std::abs(dr) > 1e-30, errc::root_not_found, "dispersion: flat residual");
    const cplx step = r / dr;
    double lam = 1.0;
    bool ok = false;
    for (int k = 0; k < 30; ++k) {
      const cplx cn = c - lam * step;
      if (cn.real() > 0.0) {
        const cplx rn = R(cn);
        if (std::abs(rn) < std::abs(r)) {
          c = cn;
          r = rn;
          ok = true;
          break;
        }
      }
      lam *= 0.5;
    }
    if (!ok) fail(errc::root_not_found, "dispersion: damped Newton stalled");
  }
  fail(errc::root_not_found, "dispersion: no root after 100 damped steps");
}

}  // namespace

cplx solve_dispersion(double alpha0, const ShearProfile& profile, std::optional<cplx> seed) {
  require(alpha0 >= 0.05 && alpha0 <= 20.0, errc::validation,
          "dispersion: alpha0 outside the supported range");
  if (seed) return newton_dispersion(alpha0, profile, 0.0, *seed, 1e-12);
  // continuation ramp from a mid-range anchor makes the auto seed robust
  const double u1 = wall_shear(profile);
  const double up = profile.u_plus();
  cplx c0 = cplx(2.3, 0.2) * (up * up / u1);
  double a = 1.0;
  c0 = newton_dispersion(a, profile, 0.0, c0, 1e-12);
  while (std::abs(a - alpha0) > 1e-12) {
    a = a < alpha0 ? std::min(a * 1.5, alpha0) : std::max(a / 1.5, alpha0);
    c0 = newton_dispersion(a, profile, 0.0, c0, 1e-12);
  }
  return c0;
}

cplx solve_dispersion_nu(double alpha, const ShearProfile& profile, double nu, cplx seed) {
  require(alpha > 0.0 && nu > 0.0, errc::validation, "dispersion: alpha, nu must be positive");
  const double q = std::pow(nu, 0.25);
  return q * newton_dispersion(alpha / q, profile, nu, seed / q, 1e-11);
}

DispersionScan scan_growth(double alpha0_lo, double alpha0_hi, int n_points,
                           const ShearProfile& profile) {
  require(n_points >= 50, errc::validation, "scan: at least 50 points required");
  require(alpha0_lo > 0.0 && alpha0_hi > alpha0_lo, errc::validation, "scan: malformed range");

  DispersionScan scan;
  scan.rows.reserve(n_points);
  cplx c = solve_dispersion(alpha0_lo, profile);
  for (int i = 0; i < n_points; ++i) {
    const double a = alpha0_lo + (alpha0_hi - alpha0_lo) * i / (n_points - 1.0);
    c = solve_dispersion(a, profile, c);
    scan.rows.push_back({a, c, a * c.imag()});
  }

  for (size_t i = 0; i + 1 < scan.rows.size(); ++i) {
    if (scan.rows[i].c0.imag() < 0.0 && scan.rows[i + 1].c0.imag() >= 0.0) {
      double lo = scan.rows[i].alpha0, hi = scan.rows[i + 1].alpha0;
      cplx cc = scan.rows[i].c0;
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        cc = solve_dispersion(mid, profile, cc);
        (cc.imag() < 0.0 ? lo : hi) = mid;
      }
      scan.alpha_c = 0.5 * (lo + hi);
      break;
    }
  }

  size_t imax = 0;
  for (size_t i = 1; i < scan.rows.size(); ++i)
    if (scan.rows[i].re_lambda > scan.rows[imax].re_lambda) imax = i;
  scan.alpha_m = scan.rows[imax].alpha0;
  scan.max_growth = scan.rows[imax].re_lambda;
  if (imax > 0 && imax + 1 < scan.rows.size()) {
    double a = scan.rows[imax - 1].alpha0, b = scan.rows[imax + 1].alpha0;
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    cplx cseed = scan.rows[imax].c0;
    auto growth = [&](double aa) {
      cseed = solve_dispersion(aa, profile, cseed);
      return aa * cseed.imag();
    };
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = growth(x1), f2 = growth(x2);
    for (int it = 0; it < 60 && (b - a) > 1e-7; ++it) {
      if (f1 < f2) {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + gr * (b - a);
        f2 = growth(x2);
      } else {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - gr * (b - a);
        f1 = growth(x1);
      }
    }
    scan.alpha_m = 0.5 * (a + b);
    scan.max_growth = std::max(f1, f2);
  }
  return scan;
}

Band unstable_band(double nu, const ShearProfile& profile) {
  require(nu >= 1e-24 && nu <= 1e-2, errc::validation, "band: nu outside supported range");
  const double q = std::pow(nu, 0.25);

  const double a0_hi = std::max(12.0, 4.0 * std::pow(nu, -1.0 / 12.0));
  const double step = 0.05;

  struct Node {
    double alpha0;
    double im;
    cplx c;
  };
  std::vector<Node> walk;
  cplx clim = solve_dispersion(0.6, profile);
  for (double a0 = 0.6; a0 <= a0_hi; a0 += step) {
    clim = solve_dispersion(a0, profile, clim);
    const cplx seed = walk.empty() ? q * clim : walk.back().c;
    cplx root;
    bool ok = true;
    try {
      root = solve_dispersion_nu(a0 * q, profile, nu, seed);
    } catch (const error&) {
      ok = false;
    }
    if (!ok || std::abs(root - seed) > 0.5 * std::max(std::abs(seed), q)) {
      try {
        root = solve_dispersion_nu(a0 * q, profile, nu, q * clim);
        ok = true;
      } catch (const error&) {
        ok = false;
      }
    }
    if (!ok) break;
    walk.push_back({a0, (root / q).imag(), root});
    if (walk.size() > 4) {
      double immax = 0.0;
      for (const auto& n : walk) immax = std::max(immax, n.im);
      if (immax > 0.0 && walk.back().im < -0.3 * immax && a0 > 2.0) break;
    }
  }

  Band band;
  std::vector<std::pair<size_t, size_t>> crossings;
  for (size_t i = 0; i + 1 < walk.size(); ++i)
    if ((walk[i].im < 0.0) != (walk[i + 1].im < 0.0)) crossings.push_back({i, i + 1});
  if (crossings.empty()) return band;

  auto bisect = [&](size_t ilo, size_t ihi) {
    double lo = walk[ilo].alpha0, hi = walk[ihi].alpha0;
    const bool lo_neg = walk[ilo].im < 0.0;
    cplx cc = walk[ilo].c;
    for (int it = 0; it < 50; ++it) {
      const double mid = 0.5 * (lo + hi);
      cc = solve_dispersion_nu(mid * q, profile, nu, cc);
      if (((cc / q).imag() < 0.0) == lo_neg)
        lo = mid;
      else
        hi = mid;
    }
    return 0.5 * (lo + hi);
  };

  const double a_first = bisect(crossings.front().first, crossings.front().second);
  const double a_last = bisect(crossings.back().first, crossings.back().second);
  band.empty = false;
  band.alpha_lo = a_first * q;
  band.alpha_hi = a_last * q;

  double best = 0.0, best_a = 0.5 * (a_first + a_last);
  cplx cseed;
  bool have_seed = false;
  for (const auto& n : walk) {
    if (n.alpha0 > a_first && n.alpha0 < a_last) {
      const double g = (n.alpha0 * q) * n.c.imag();
      if (g > best) {
        best = g;
        best_a = n.alpha0;
        cseed = n.c;
        have_seed = true;
      }
    }
  }
  if (have_seed) {
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = std::max(a_first, best_a - 2 * step), b = std::min(a_last, best_a + 2 * step);
    auto growth = [&](double a0) {
      cseed = solve_dispersion_nu(a0 * q, profile, nu, cseed);
      return (a0 * q) * cseed.imag();
    };
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = growth(x1), f2 = growth(x2);
    for (int it = 0; it < 40 && (b - a) > 1e-5; ++it) {
      if (f1 < f2) {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + gr * (b - a);
        f2 = growth(x2);
      } else {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - gr * (b - a);
        f1 = growth(x1);
      }
    }
    band.max_growth = std::max({best, f1, f2});
    band.alpha_at_max = 0.5 * (a + b) * q;
  }
  return band;
}

GridFunction fast_solution(const ShearProfile& profile, const ViscousSpectralPoint& pt,
                           const Grid& grid) {
  (void)profile;
  require(std::abs(pt.gamma) >= 10.0, errc::validation,
          "fast solution: |gamma| >= 10 required (asymptotic regime)");
  require(grid.dy() <= 1.0 / (8.0 * std::abs(pt.gamma)), errc::resolution,
          "fast solution: grid does not resolve the fast scale");
  GridFunction out(grid);
  for (int i = 0; i < grid.size(); ++i) {
    const airy::Ladder lad = airy::ladder(airy::Kind::Ai, pt.gamma * (grid.y(i) - pt.y_c));
    out[i] = lad.log_scale < -700.0 ? cplx(0.0) : lad.unscaled(lad.i2);
  }
  return out;
}

namespace {

// V = U''/(U-c); for a Rayleigh solution, Diff(psi) = (V'' + V^2) psi + 2 V' psi'.
struct RayCoeff {
  const ShearProfile& p;
  cplx c;
  cplx V(cplx y) const { return p.d2(y) / (p.value(y) - c); }
  cplx Vp(cplx y) const {
    const cplx d = p.value(y) - c;
    return p.d3(y) / d - p.d2(y) * p.d1(y) / (d * d);
  }
  cplx Vpp(cplx y) const {
    const cplx d = p.value(y) - c;
    const cplx u1 = p.d1(y), u2 = p.d2(y), u3 = p.d3(y), u4 = p.d4(y);
    return u4 / d - (2.0 * u3 * u1 + u2 * u2) / (d * d) + 2.0 * u2 * u1 * u1 / (d * d * d);
  }
};

}  // namespace

GridFunction slow_solution(const ShearProfile& profile, const ViscousSpectralPoint& pt,
                           const Grid& grid) {
  require(std::abs(pt.epsilon) <= 1e-2, errc::validation,
          "slow solution: |epsilon| too large for the asymptotic construction");
  rayleigh::Basis basis = rayleigh::decaying_pair(profile, pt.alpha, pt.c, grid);
  const cplx scale = wall_shear(profile) / basis.bv_dminus;
  GridFunction psi(grid);
  for (int i = 0; i < grid.size(); ++i) psi[i] = scale * basis.psi_minus[i];
  if (pt.epsilon == cplx(0.0)) return psi;

  // critical-layer corrector: OS(delta) = eps * Diff(psi_s) on a clamped window
  const double w = 8.0 / std::abs(pt.gamma);
  const double xl = std::max(0.0, pt.y_c.real() - w);
  const double xr = std::min(grid.ymax, pt.y_c.real() + w);
  const int nw = 481;
  const double hw = (xr - xl) / (nw - 1);
  const RayCoeff rc{profile, pt.c};

  auto psi_at = [&](double y) {
    const double t = y / grid.dy();
    const int i = std::min(std::max(static_cast<int>(t), 0), grid.n - 1);
    const double f = t - i;
    return scale * ((1.0 - f) * basis.psi_minus[i] + f * basis.psi_minus[i + 1]);
  };
  auto dpsi_at = [&](double y) {
    const double t = y / grid.dy();
    const int i = std::min(std::max(static_cast<int>(t), 0), grid.n - 1);
    const double f = t - i;
    return scale * ((1.0 - f) * basis.dpsi_minus[i] + f * basis.dpsi_minus[i + 1]);
  };

  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(nw, nw);
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(nw);
  const double a2 = pt.alpha * pt.alpha;
  const cplx eps = pt.epsilon;
  const double h2 = hw * hw, h4 = h2 * h2;
  for (int i = 2; i + 2 < nw; ++i) {
    const double y = xl + i * hw;
    const cplx U = profile.value(y), Upp = profile.d2(y);
    const cplx cD2 = (U - pt.c) + 2.0 * eps * a2;
    A(i, i - 2) += -eps / h4;
    A(i, i - 1) += 4.0 * eps / h4 + cD2 / h2;
    A(i, i) += -6.0 * eps / h4 - 2.0 * cD2 / h2 - (U - pt.c) * a2 - Upp - eps * a2 * a2;
    A(i, i + 1) += 4.0 * eps / h4 + cD2 / h2;
    A(i, i + 2) += -eps / h4;
    rhs(i) = eps * ((rc.Vpp(y) + rc.V(y) * rc.V(y)) * psi_at(y) + 2.0 * rc.Vp(y) * dpsi_at(y));
  }
  A(0, 0) = 1.0;
  A(1, 0) = -1.5 / hw;
  A(1, 1) = 2.0 / hw;
  A(1, 2) = -0.5 / hw;
  A(nw - 1, nw - 1) = 1.0;
  A(nw - 2, nw - 1) = 1.5 / hw;
  A(nw - 2, nw - 2) = -2.0 / hw;
  A(nw - 2, nw - 3) = 0.5 / hw;
  Eigen::VectorXcd delta = A.partialPivLu().solve(rhs);

  double dmax = 0.0, pmax = 0.0;
  for (int i = 0; i < nw; ++i) {
    dmax = std::max(dmax, std::abs(delta(i)));
    pmax = std::max(pmax, std::abs(psi_at(xl + i * hw)));
  }
  require(dmax <= 10.0 * pmax, errc::breakdown,
          "slow solution: corrector exceeds 10x the Rayleigh part (epsilon too large)");

  for (int i = 0; i < grid.size(); ++i) {
    const double y = grid.y(i);
    if (y >= xl && y <= xr) {
      const double t = (y - xl) / hw;
      const int j = std::min(std::max(static_cast<int>(t), 0), nw - 2);
      const double f = t - j;
      psi[i] += (1.0 - f) * delta(j) + f * delta(j + 1);
    }
  }
  return psi;
}

Eigenmode eigenmode(const ShearProfile& profile, const ViscousSpectralPoint& pt,
                    const Grid& grid) {
  const double q = std::pow(pt.nu, 0.25);
  const cplx resid = dispersion_residual(pt.alpha / q, pt.c / q, profile, pt.nu);
  require(std::abs(resid) <= 1e-8, errc::validation,
          "eigenmode: the point does not satisfy the dispersion relation");

  rayleigh::Basis basis = rayleigh::decaying_pair(profile, pt.alpha, pt.c, grid);
  const cplx scale = wall_shear(profile) / basis.bv_dminus;

  const airy::Ladder lad0 = airy::ladder(airy::Kind::Ai, -pt.gamma * pt.y_c);
  const cplx psi_s0 = scale * basis.bv_minus;
  const cplx a_mantissa = -psi_s0 / lad0.i2;
  const double a_ls = -lad0.log_scale;

  Eigenmode em{GridFunction(grid), GridFunction(grid), GridFunction(grid), GridFunction(grid)};
  const double a2 = pt.alpha * pt.alpha;
  for (int i = 0; i < grid.size(); ++i) {
    const double y = grid.y(i);
    const airy::Ladder lad = airy::ladder(airy::Kind::Ai, pt.gamma * (y - pt.y_c));
    const double ls = lad.log_scale + a_ls;
    const cplx efac = ls < -700.0 ? cplx(0.0) : std::exp(cplx(ls, 0.0));
    const cplx fast = a_mantissa * lad.i2 * efac;
    const cplx dfast = a_mantissa * pt.gamma * lad.i1 * efac;
    const cplx d2fast = a_mantissa * pt.gamma * pt.gamma * lad.f * efac;
    const cplx slow = scale * basis.psi_minus[i];
    const cplx dslow = scale * basis.dpsi_minus[i];
    const cplx V = profile.d2(y) / (profile.value(y) - pt.c);
    em.psi[i] = slow + fast;
    em.u[i] = dslow + dfast;
    em.v[i] = -cplx(0.0, 1.0) * pt.alpha * em.psi[i];
    em.omega[i] = -(V * slow) - (d2fast - a2 * fast);
  }
  require(std::abs(em.psi[0]) <= 1e-6 * (1.0 + em.psi.max_abs()) &&
              std::abs(em.u[0]) <= 1e-6 * (1.0 + em.u.max_abs()),
          errc::validation, "eigenmode: wall conditions violated beyond tolerance");
  return em;
}

namespace {

struct SlowData {
  cplx v[4] = {0.0, 0.0, 0.0, 0.0};
};

void slow_pair_at(const ShearProfile& profile, double alpha, cplx c,
                  const std::vector<double>& ys_sorted, std::vector<SlowData>* minus,
                  std::vector<SlowData>* plus, double ymax = 30.0) {
  const RayCoeff rc{profile, c};
  auto q = [&](cplx y) { return alpha * alpha + rc.V(y); };
  auto fill = [&](const OdeState& st, double y, SlowData* out) {
    out->v[0] = st.psi;
    out->v[1] = st.dpsi;
    out->v[2] = q(y) * st.psi;
    out->v[3] = q(y) * st.dpsi + rc.Vp(y) * st.psi;
  };
  minus->assign(ys_sorted.size(), {});
  plus->assign(ys_sorted.size(), {});

  {
    OdeState st{std::exp(-alpha * ymax), -alpha * std::exp(-alpha * ymax)};
    double from = ymax;
    for (int i = static_cast<int>(ys_sorted.size()) - 1; i >= 0; --i) {
      if (ys_sorted[i] < from)
        st = integrate_second_order(q, cplx(from), cplx(ys_sorted[i]), st, 1e-11, 1e-16);
      fill(st, ys_sorted[i], &(*minus)[i]);
      from = ys_sorted[i];
    }
  }
  {
    OdeState st{1.0 / (2.0 * alpha), 0.5};
    double from = 0.0;
    for (size_t i = 0; i < ys_sorted.size(); ++i) {
      if (ys_sorted[i] > from)
        st = integrate_second_order(q, cplx(from), cplx(ys_sorted[i]), st, 1e-11, 1e-16);
      fill(st, ys_sorted[i], &(*plus)[i]);
      from = ys_sorted[i];
    }
  }
}

struct FastLadder {
  cplx v[4] = {0.0, 0.0, 0.0, 0.0};
  double ls = 0.0;
};

FastLadder fast_at(airy::Kind kind, const ViscousSpectralPoint& pt, double y) {
  const airy::Ladder lad = airy::ladder(kind, pt.gamma * (y - pt.y_c));
  FastLadder f;
  f.v[0] = lad.i2;
  f.v[1] = pt.gamma * lad.i1;
  f.v[2] = pt.gamma * pt.gamma * lad.f;
  f.v[3] = pt.gamma * pt.gamma * pt.gamma * lad.df;
  f.ls = lad.log_scale;
  return f;
}

// Assembled interior + boundary Green data at a fixed source point x.
struct OSGreenAssembly {
  const ShearProfile& profile;
  ViscousSpectralPoint pt;
  double x;
  cplx a_minus, a_plus, b_minus, b_plus;  // interior coefficients
  cplx ds, df;                            // boundary coefficients
  FastLadder fm_x, fp_x, fm_0;

  OSGreenSide eval(double y, bool upper) const {
    std::vector<double> ys{y};
    std::vector<SlowData> minus, plus;
    slow_pair_at(profile, pt.alpha, pt.c, ys, &minus, &plus);
    const SlowData& sm = minus[0];
    const SlowData& sp = plus[0];
    const FastLadder fm_y = fast_at(airy::Kind::Ai, pt, y);
    const FastLadder fp_y = fast_at(airy::Kind::Bi, pt, y);

    auto ratio = [](const FastLadder& num, int r, const FastLadder& den) -> cplx {
      const double d = num.ls - den.ls;
      if (d < -700.0) return 0.0;
      return num.v[r] / den.v[0] * std::exp(d);
    };

    OSGreenSide out;
    cplx* slots[4] = {&out.G, &out.dG, &out.d2G, &out.d3G};
    for (int r = 0; r < 4; ++r) {
      cplx val = ds * sm.v[r] + df * ratio(fm_y, r, fm_0);
      if (upper)
        val += a_minus * sm.v[r] + b_minus * ratio(fm_y, r, fm_x);
      else
        val += a_plus * sp.v[r] + b_plus * ratio(fp_y, r, fp_x);
      *slots[r] = val;
    }
    return out;
  }
};

OSGreenAssembly make_green_assembly(const ShearProfile& profile, const ViscousSpectralPoint& pt,
                                    double x) {
  require(x > 0.0 && x < 30.0, errc::validation, "os green: x outside (0, 30)");
  OSGreenAssembly A{profile, pt, x, 0, 0, 0, 0, 0, 0, {}, {}, {}};

  std::vector<double> ys{0.0, x};
  std::vector<SlowData> minus, plus;
  slow_pair_at(profile, pt.alpha, pt.c, ys, &minus, &plus);
  const SlowData sm_0 = minus[0], sm_x = minus[1], sp_x = plus[1];
  A.fm_x = fast_at(airy::Kind::Ai, pt, x);
  A.fp_x = fast_at(airy::Kind::Bi, pt, x);
  A.fm_0 = fast_at(airy::Kind::Ai, pt, 0.0);

  Eigen::Matrix4cd M;
  for (int r = 0; r < 4; ++r) {
    M(r, 0) = sm_x.v[r];
    M(r, 1) = sp_x.v[r];
    M(r, 2) = A.fm_x.v[r] / A.fm_x.v[0];
    M(r, 3) = A.fp_x.v[r] / A.fp_x.v[0];
  }
  Eigen::Vector4cd rhs;
  rhs << 0.0, 0.0, 0.0, cplx(1.0) / pt.epsilon;
  Eigen::PartialPivLU<Eigen::Matrix4cd> lu(M);
  const double cond = M.cwiseAbs().maxCoeff() * lu.inverse().cwiseAbs().maxCoeff();
  require(cond < 1e12, errc::ill_conditioned, "os green: matching system badly conditioned");
  const Eigen::Vector4cd v = lu.solve(rhs);
  A.a_minus = -v(0);
  A.a_plus = v(1);
  A.b_minus = -v(2);
  A.b_plus = v(3);

  // boundary correction: G_i(x, 0) from the lower side
  const FastLadder fp_0 = fast_at(airy::Kind::Bi, pt, 0.0);
  auto ratio0 = [&](const FastLadder& num, int r, const FastLadder& den) -> cplx {
    const double d = num.ls - den.ls;
    if (d < -700.0) return 0.0;
    return num.v[r] / den.v[0] * std::exp(d);
  };
  const cplx Gi0 = A.a_plus * plus[0].v[0] + A.b_plus * ratio0(fp_0, 0, A.fp_x);
  const cplx dGi0 = A.a_plus * plus[0].v[1] + A.b_plus * ratio0(fp_0, 1, A.fp_x);

  Eigen::Matrix2cd N;
  N(0, 0) = sm_0.v[0];
  N(0, 1) = 1.0;
  N(1, 0) = sm_0.v[1];
  N(1, 1) = A.fm_0.v[1] / A.fm_0.v[0];
  const cplx detN = N(0, 0) * N(1, 1) - N(0, 1) * N(1, 0);
  require(std::abs(detN) > 1e-10 * N.cwiseAbs().maxCoeff(), errc::near_eigenvalue,
          "os green: boundary system nearly singular (eigenvalue proximity)");
  Eigen::Vector2cd rb;
  rb << -Gi0, -dGi0;
  const Eigen::Vector2cd d = N.partialPivLu().solve(rb);
  A.ds = d(0);
  A.df = d(1);
  return A;
}

}  // namespace

cplx os_green_function(const ShearProfile& profile, const ViscousSpectralPoint& pt, double x,
                       double y) {
  const OSGreenAssembly A = make_green_assembly(profile, pt, x);
  return A.eval(y, y >= x).G;
}

OSGreenSide os_green_side(const ShearProfile& profile, const ViscousSpectralPoint& pt, double x,
                          double y, bool upper_side) {
  const OSGreenAssembly A = make_green_assembly(profile, pt, x);
  return A.eval(y, upper_side);
}

namespace {

struct ChebOperators {
  Eigen::MatrixXd D1;   // d/dy on the mapped grid
  Eigen::VectorXd y;    // node locations
};

ChebOperators cheb_mapped(int n, double L, double s) {
  // Gauss-Lobatto nodes and differentiation matrix (Trefethen), mapped by
  // y = s (1-x) / (1 + x + 2 s / L): x=1 -> y=0, x=-1 -> y=L.
  Eigen::MatrixXd D(n + 1, n + 1);
  Eigen::VectorXd xx(n + 1), cc(n + 1);
  for (int i = 0; i <= n; ++i) {
    xx(i) = std::cos(M_PI * i / n);
    cc(i) = (i == 0 || i == n) ? 2.0 : 1.0;
    if (i % 2 == 1) cc(i) = -cc(i);
  }
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j)
      if (i != j) D(i, j) = (cc(i) / cc(j)) / (xx(i) - xx(j));
  for (int i = 0; i <= n; ++i) {
    double srow = 0.0;
    for (int j = 0; j <= n; ++j)
      if (i != j) srow += D(i, j);
    D(i, i) = -srow;
  }
  const double a = 2.0 * s / L;
  ChebOperators ops;
  ops.y.resize(n + 1);
  Eigen::VectorXd dydx(n + 1);
  for (int i = 0; i <= n; ++i) {
    ops.y(i) = s * (1.0 - xx(i)) / (1.0 + xx(i) + a);
    dydx(i) = -s * (2.0 + a) / ((1.0 + xx(i) + a) * (1.0 + xx(i) + a));
  }
  ops.D1 = dydx.cwiseInverse().asDiagonal() * D;
  return ops;
}

std::vector<cplx> os_collocation_eigs(const ShearProfile& profile, double alpha, double nu, int n,
                                      double L, double s, cplx sigma,
                                      Eigen::MatrixXcd* vectors = nullptr,
                                      Eigen::VectorXd* nodes = nullptr) {
  const ChebOperators ops = cheb_mapped(n, L, s);
  const int m = n + 1;
  Eigen::MatrixXd D2 = ops.D1 * ops.D1;
  Eigen::MatrixXcd Lap = D2.cast<cplx>();
  for (int i = 0; i < m; ++i) Lap(i, i) -= alpha * alpha;

  Eigen::VectorXcd U(m), Upp(m);
  for (int i = 0; i < m; ++i) {
    U(i) = profile.value(ops.y(i));
    Upp(i) = profile.d2(ops.y(i));
  }
  const cplx eps = nu / (cplx(0.0, 1.0) * alpha);
  Eigen::MatrixXcd A = U.asDiagonal() * Lap - eps * (Lap * Lap);
  A -= Upp.asDiagonal() * Eigen::MatrixXcd::Identity(m, m);
  Eigen::MatrixXcd B = Lap;

  // wall: psi(0) = psi'(0) = 0 (y(0) = 0 at x = +1 -> row 0); far end rows
  A.row(0).setZero();
  A(0, 0) = 1.0;
  B.row(0).setZero();
  A.row(1) = ops.D1.row(0).cast<cplx>();
  B.row(1).setZero();
  A.row(m - 1) = ops.D1.row(m - 1).cast<cplx>();
  A(m - 1, m - 1) += alpha;
  B.row(m - 1).setZero();
  A.row(m - 2) = Lap.row(m - 1);
  B.row(m - 2).setZero();

  // shift-invert to a standard eigenproblem
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(A - sigma * B);
  Eigen::MatrixXcd Minv = lu.solve(B);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(Minv, vectors != nullptr);
  require(es.info() == Eigen::Success, errc::not_converged, "collocation: eigensolver failed");

  std::vector<cplx> out;
  std::vector<int> order;
  for (int i = 0; i < m; ++i) {
    const cplx th = es.eigenvalues()(i);
    if (std::abs(th) < 1e-12) continue;  // infinite c (boundary rows)
    out.push_back(sigma + 1.0 / th);
    order.push_back(i);
  }
  if (vectors) {
    vectors->resize(m, static_cast<int>(order.size()));
    for (size_t k = 0; k < order.size(); ++k) vectors->col(k) = es.eigenvectors().col(order[k]);
  }
  if (nodes) *nodes = ops.y;
  return out;
}

struct CollocationSetup {
  double L = 60.0;
  double s = 0.1;
  cplx sigma;
};

CollocationSetup collocation_setup(const ShearProfile& profile, double alpha, double nu) {
  CollocationSetup cs;
  const double q = std::pow(nu, 0.25);
  cplx cpred(0.25 * profile.u_plus(), 0.0);
  const double a0 = alpha / q;
  if (a0 > 0.3 && a0 < 15.0) {
    try {
      cpred = q * solve_dispersion(std::min(std::max(a0, 0.5), 8.0), profile);
    } catch (const error&) {
    }
  }
  cs.s = std::max(0.04, 2.5 * std::abs(cpred) / wall_shear(profile));
  cs.sigma = cplx(cpred.real(), std::max(cpred.imag(), 0.02 * std::abs(cpred)));
  return cs;
}

}  // namespace

std::vector<cplx> collocation_spectrum(const ShearProfile& profile, double alpha, double nu,
                                       int n_modes) {
  require(n_modes >= 64 && n_modes <= 1024, errc::validation,
          "collocation: n_modes must lie in [64, 1024]");
  require(alpha > 0.0 && nu > 0.0, errc::validation, "collocation: alpha, nu must be positive");
  const CollocationSetup cs = collocation_setup(profile, alpha, nu);

  std::vector<cplx> w1 = os_collocation_eigs(profile, alpha, nu, n_modes, cs.L, cs.s, cs.sigma);
  std::vector<cplx> w2 =
      os_collocation_eigs(profile, alpha, nu, 2 * n_modes, cs.L, cs.s, cs.sigma);

  std::vector<cplx> kept;
  for (const cplx& c : w1) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) continue;
    double best = 1e300;
    for (const cplx& d : w2) best = std::min(best, std::abs(c - d));
    if (best < 1e-6 * std::max(0.01, std::abs(c))) kept.push_back(c);
  }
  std::sort(kept.begin(), kept.end(), [](cplx a, cplx b) { return a.imag() > b.imag(); });
  return kept;
}

double collocation_residual_check(const ShearProfile& profile, double alpha, double nu,
                                  int n_modes, int n_check) {
  const CollocationSetup cs = collocation_setup(profile, alpha, nu);
  Eigen::MatrixXcd V;
  Eigen::VectorXd y;
  std::vector<cplx> w =
      os_collocation_eigs(profile, alpha, nu, n_modes, cs.L, cs.s, cs.sigma, &V, &y);

  // rebuild the pencil to measure ||(A - c B) psi|| / ||A psi||
  const ChebOperators ops = cheb_mapped(n_modes, cs.L, cs.s);
  const int m = n_modes + 1;
  Eigen::MatrixXcd Lap = (ops.D1 * ops.D1).cast<cplx>();
  for (int i = 0; i < m; ++i) Lap(i, i) -= alpha * alpha;
  Eigen::VectorXcd U(m), Upp(m);
  for (int i = 0; i < m; ++i) {
    U(i) = profile.value(ops.y(i));
    Upp(i) = profile.d2(ops.y(i));
  }
  const cplx eps = nu / (cplx(0.0, 1.0) * alpha);
  Eigen::MatrixXcd A = U.asDiagonal() * Lap - eps * (Lap * Lap);
  A -= Upp.asDiagonal() * Eigen::MatrixXcd::Identity(m, m);
  Eigen::MatrixXcd B = Lap;
  A.row(0).setZero();
  A(0, 0) = 1.0;
  B.row(0).setZero();
  A.row(1) = ops.D1.row(0).cast<cplx>();
  B.row(1).setZero();
  A.row(m - 1) = ops.D1.row(m - 1).cast<cplx>();
  A(m - 1, m - 1) += alpha;
  B.row(m - 1).setZero();
  A.row(m - 2) = Lap.row(m - 1);
  B.row(m - 2).setZero();

  std::vector<int> idx(w.size());
  for (size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
  std::sort(idx.begin(), idx.end(), [&](int a, int b) { return w[a].imag() > w[b].imag(); });

  double worst = 0.0;
  for (int k = 0; k < n_check && k < static_cast<int>(idx.size()); ++k) {
    const int i = idx[k];
    if (std::abs(w[i]) > 10.0) continue;
    const Eigen::VectorXcd psi = V.col(i);
    const double num = ((A - w[i] * B) * psi).norm();
    const double den = (A * psi).norm() + 1e-300;
    worst = std::max(worst, num / den);
  }
  return worst;
}

}  // namespace shearstab::os
