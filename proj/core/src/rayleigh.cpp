#include "shearstab/rayleigh.hpp"

#include <algorithm>
#include <cmath>

#include "shearstab/ode.hpp"

namespace shearstab::rayleigh {

namespace {

constexpr int kSeriesDefault = 44;

cplx horner(const std::vector<cplx>& coeff, cplx w) {
  cplx v = 0.0;
  for (int j = static_cast<int>(coeff.size()) - 1; j >= 0; --j) v = v * w + coeff[j];
  return v;
}

cplx horner_d1(const std::vector<cplx>& coeff, cplx w) {
  cplx v = 0.0;
  for (int j = static_cast<int>(coeff.size()) - 1; j >= 1; --j)
    v = v * w + coeff[j] * static_cast<double>(j);
  return v;
}

struct RayleighRhs {
  const ShearProfile& profile;
  double alpha;
  cplx c;
  cplx operator()(cplx y) const {
    return alpha * alpha + profile.d2(y) / (profile.value(y) - c);
  }
};

}  // namespace

cplx CriticalLayerSeries::eval(cplx y) const { return horner(beta, y - center); }
cplx CriticalLayerSeries::eval_d1(cplx y) const { return horner_d1(beta, y - center); }

CriticalLayerSeries regular_series(const ShearProfile& profile, double alpha, cplx c, int nterms) {
  CriticalLayerSeries out;
  out.center = critical_point(profile, c);

  std::vector<cplx> u = profile.taylor(out.center, nterms + 3);
  const cplx u1 = u[1];
  require(std::abs(u1) > 1e-12, errc::domain, "regular series: U'(y_c) vanishes");
  auto A = [&](int m) -> cplx { return u[m]; };  // coefficients of (U - c), m >= 1
  auto B = [&](int m) -> cplx {
    return u[m + 2] * static_cast<double>((m + 1) * (m + 2));
  };

  const double a2 = alpha * alpha;
  std::vector<cplx>& beta = out.beta;
  beta.assign(nterms, 0.0);
  std::vector<cplx> D(nterms, 0.0);  // D_j = (j+2)(j+1) beta_{j+2} - alpha^2 beta_j
  beta[1] = 1.0;
  for (int k = 1; k + 1 < nterms; ++k) {
    cplx rhs = 0.0;
    for (int m = 0; m <= k - 1; ++m) rhs += B(m) * beta[k - m];
    for (int m = 2; m <= k; ++m) rhs -= A(m) * D[k - m];
    D[k - 1] = rhs / u1;
    beta[k + 1] = (D[k - 1] + a2 * beta[k - 1]) / static_cast<double>(k * (k + 1));
  }

  const double dist = std::max(profile.analyticity_width() - std::abs(out.center.imag()), 0.0);
  out.radius = std::min(0.5 * dist, 1.0);
  require(out.radius > 0.0, errc::domain, "regular series: critical point too close to a singularity");
  return out;
}

namespace {

// Continuation of (psi, psi') along straight segments collecting values at
// real grid nodes between `from` and `to` (exclusive of `from`).
void continue_on_axis(const RayleighRhs& rhs, double from, double to, OdeState state,
                      const Grid& grid, std::vector<cplx>* psi, std::vector<cplx>* dpsi) {
  if (from == to) return;
  const int dir = to > from ? 1 : -1;
  std::vector<double> stops;
  std::vector<int> ids;
  for (int i = 0; i < grid.size(); ++i) {
    const double yi = grid.y(i);
    if (dir > 0 ? (yi > from + 1e-14 && yi <= to + 1e-14) : (yi < from - 1e-14 && yi >= to - 1e-14)) {
      stops.push_back((yi - from) / (to - from));
      ids.push_back(i);
    }
  }
  if (dir < 0) {
    // stops must be increasing along the segment parametrization
    std::reverse(stops.begin(), stops.end());
    std::reverse(ids.begin(), ids.end());
  }
  integrate_second_order(
      rhs, cplx(from), cplx(to), state, 1e-11, 1e-16, &stops,
      [&](int sid, const OdeState& s) {
        (*psi)[ids[sid]] = s.psi;
        (*dpsi)[ids[sid]] = s.dpsi;
      });
}

}  // namespace

GridFunction regular_solution(const ShearProfile& profile, double alpha, cplx c, const Grid& grid) {
  CriticalLayerSeries ser = regular_series(profile, alpha, c, kSeriesDefault);
  require(ser.radius > 2.0 * grid.dy(), errc::resolution,
          "regular solution: series radius below grid spacing");
  const cplx yc = ser.center;
  require(yc.real() > 0.0 && yc.real() < grid.ymax, errc::domain,
          "regular solution: critical point outside the grid interior");

  const RayleighRhs rhs{profile, alpha, c};
  std::vector<cplx> psi(grid.size(), 0.0), dpsi(grid.size(), 0.0);
  const double rho = 0.8 * ser.radius;

  double a_minus, a_plus;  // real anchor points on each side
  OdeState st_minus, st_plus;
  if (std::abs(yc.imag()) < rho) {
    const double chord = std::sqrt(rho * rho - yc.imag() * yc.imag());
    a_minus = yc.real() - chord;
    a_plus = yc.real() + chord;
    for (int i = 0; i < grid.size(); ++i) {
      const double yi = grid.y(i);
      if (yi >= a_minus && yi <= a_plus) {
        psi[i] = ser.eval(yi);
        dpsi[i] = ser.eval_d1(yi);
      }
    }
    st_minus = {ser.eval(a_minus), ser.eval_d1(a_minus)};
    st_plus = {ser.eval(a_plus), ser.eval_d1(a_plus)};
  } else {
    // disk clear of the axis: descend vertically from the disk edge
    const cplx zd = yc - cplx(0.0, std::copysign(0.7 * ser.radius, yc.imag()));
    OdeState edge{ser.eval(zd), ser.eval_d1(zd)};
    OdeState onaxis = integrate_second_order(rhs, zd, cplx(zd.real()), edge, 1e-11, 1e-16);
    a_minus = a_plus = zd.real();
    st_minus = st_plus = onaxis;
    int inode = static_cast<int>(std::round(zd.real() / grid.dy()));
    if (inode >= 0 && inode < grid.size() && std::abs(grid.y(inode) - zd.real()) < 1e-12) {
      psi[inode] = onaxis.psi;
      dpsi[inode] = onaxis.dpsi;
    }
  }

  continue_on_axis(rhs, a_minus, 0.0, st_minus, grid, &psi, &dpsi);
  continue_on_axis(rhs, a_plus, grid.ymax, st_plus, grid, &psi, &dpsi);
  return GridFunction(grid, std::move(psi));
}

namespace {

struct SingularSeries {
  CriticalLayerSeries reg;
  std::vector<cplx> gamma;  // holomorphic part coefficients, gamma_0 = 1, gamma_1 = 0
  cplx log_coeff;           // C = U''(y_c)/U'(y_c)

  cplx branch_log(cplx w) const {
    double theta = std::atan2(w.imag(), w.real());
    if (reg.center.imag() > 0.0 && theta < -M_PI / 2.0) theta += 2.0 * M_PI;
    if (reg.center.imag() < 0.0 && theta > M_PI / 2.0) theta -= 2.0 * M_PI;
    return cplx(std::log(std::abs(w)), theta);
  }
  cplx eval(cplx y) const {
    const cplx w = y - reg.center;
    return horner(gamma, w) + log_coeff * branch_log(w) * horner(reg.beta, w);
  }
  cplx eval_d1(cplx y) const {
    const cplx w = y - reg.center;
    const cplx R = horner(reg.beta, w);
    const cplx Rp = horner_d1(reg.beta, w);
    return horner_d1(gamma, w) + log_coeff * (R / w + branch_log(w) * Rp);
  }
};

SingularSeries singular_series(const ShearProfile& profile, double alpha, cplx c, int nterms) {
  SingularSeries out;
  out.reg = regular_series(profile, alpha, c, nterms);
  const cplx yc = out.reg.center;
  std::vector<cplx> u = profile.taylor(yc, nterms + 3);
  const cplx u1 = u[1];
  auto A = [&](int m) -> cplx { return u[m]; };
  auto B = [&](int m) -> cplx { return u[m + 2] * static_cast<double>((m + 1) * (m + 2)); };
  out.log_coeff = B(0) / u1;  // = U''(y_c)/U'(y_c) for beta_1 = gamma_0 = 1

  const double a2 = alpha * alpha;
  const std::vector<cplx>& beta = out.reg.beta;
  std::vector<cplx>& g = out.gamma;
  g.assign(nterms, 0.0);
  std::vector<cplx> D(nterms, 0.0);
  g[0] = 1.0;
  for (int k = 1; k + 1 < nterms; ++k) {
    cplx rhs = 0.0;
    for (int m = 0; m <= k; ++m) rhs += B(m) * g[k - m];
    for (int m = 2; m <= k; ++m) rhs -= A(m) * D[k - m];
    // log-term source: C * sum_{m+n=k+2, m,n>=1} U_m (2n-1) beta_n
    cplx src = 0.0;
    for (int m = 1; m <= k + 1; ++m) {
      const int n = k + 2 - m;
      if (n >= 1 && n < static_cast<int>(beta.size()))
        src += A(m) * static_cast<double>(2 * n - 1) * beta[n];
    }
    rhs -= out.log_coeff * src;
    D[k - 1] = rhs / u1;
    g[k + 1] = (D[k - 1] + a2 * g[k - 1]) / static_cast<double>(k * (k + 1));
  }
  return out;
}

}  // namespace

GridFunction singular_solution(const ShearProfile& profile, double alpha, cplx c, const Grid& grid,
                               double y_star) {
  SingularSeries ser = singular_series(profile, alpha, c, kSeriesDefault);
  const cplx yc = ser.reg.center;
  require(ser.reg.radius > 2.0 * grid.dy(), errc::resolution,
          "singular solution: series radius below grid spacing");
  require(std::abs(cplx(y_star) - yc) > 0.15 * ser.reg.radius, errc::validation,
          "singular solution: y_star too close to the critical point");

  const RayleighRhs rhs{profile, alpha, c};
  const double rho = 0.7 * ser.reg.radius;
  const double xr = yc.real();
  const double h = grid.dy();
  std::vector<cplx> psi(grid.size(), 0.0), dpsi(grid.size(), 0.0);

  // closed-form values inside the series disk (single-valued off the cut);
  // a node exactly on the cut is rejected
  for (int i = 0; i < grid.size(); ++i) {
    const double yi = grid.y(i);
    const cplx w = yi - yc;
    if (std::abs(w) <= 0.85 * ser.reg.radius) {
      if (std::abs(yi - xr) < 1e-13 && std::abs(yc.imag()) < 1e-13)
        fail(errc::path, "singular solution: grid node lies on the branch cut");
      psi[i] = ser.eval(yi);
      dpsi[i] = ser.eval_d1(yi);
    }
  }

  // anchors on the horizontal diameter, then down to the axis clear of Re(y_c)
  auto side_anchor = [&](int side) -> std::pair<double, OdeState> {
    const cplx zd = yc + cplx(side * rho, 0.0);
    OdeState edge{ser.eval(zd), ser.eval_d1(zd)};
    if (std::abs(yc.imag()) < 1e-14) return {zd.real(), edge};
    OdeState onaxis = integrate_second_order(rhs, zd, cplx(zd.real()), edge, 1e-11, 1e-16);
    return {zd.real(), onaxis};
  };
  auto [a_plus, st_plus] = side_anchor(+1);
  auto [a_minus, st_minus] = side_anchor(-1);
  continue_on_axis(rhs, a_plus, grid.ymax, st_plus, grid, &psi, &dpsi);
  continue_on_axis(rhs, a_minus, 0.0, st_minus, grid, &psi, &dpsi);

  // normalize: psi^s := -(psi_F - (psi_F(y*)/psi^r(y*)) psi^r), giving
  // Wron(psi^r, psi^s) = 1 and psi^s(y_star) = 0
  GridFunction reg = regular_solution(profile, alpha, c, grid);
  const int istar = static_cast<int>(std::round(y_star / h));
  require(istar >= 0 && istar < grid.size(), errc::validation,
          "singular solution: y_star outside grid");
  const cplx psiF_star = psi[istar];
  const cplx regp_star = reg[istar];
  require(std::abs(regp_star) > 1e-12, errc::domain, "singular solution: psi^r(y_star) = 0");
  const cplx kappa = psiF_star / regp_star;
  GridFunction out(grid);
  for (int i = 0; i < grid.size(); ++i) out[i] = -(psi[i] - kappa * reg[i]);
  return out;
}

namespace {

std::vector<cplx> dip_path(const ShearProfile& profile, cplx c, double ymax) {
  // Path from ymax to 0 passing below the critical point when it sits near or
  // below the real axis (the branch the viscous limit selects for U' > 0).
  std::vector<cplx> pts{cplx(ymax)};
  cplx yc;
  bool have_yc = true;
  try {
    yc = critical_point(profile, c);
  } catch (const error&) {
    have_yc = false;
  }
  if (have_yc && yc.real() > 0.0 && yc.real() < ymax) {
    const double d = std::max({3.0 * std::abs(yc.imag()), 0.4 * std::abs(yc), 1e-4});
    if (yc.imag() < d && d < profile.analyticity_width() * 0.8) {
      const double xr = yc.real();
      const double depth = d;
      pts.push_back(cplx(std::min(xr + d, ymax)));
      pts.push_back(cplx(std::min(xr + d, ymax), -depth));
      pts.push_back(cplx(std::max(xr - d, 0.0), -depth));
      pts.push_back(cplx(std::max(xr - d, 0.0)));
    }
  }
  pts.push_back(cplx(0.0));
  return pts;
}

}  // namespace

BoundaryData decaying_boundary_data(const ShearProfile& profile, double alpha, cplx c, double ymax,
                                    bool below_path) {
  require(alpha >= 0.0, errc::validation, "decaying solution: alpha must be nonnegative");
  const RayleighRhs rhs{profile, alpha, c};
  OdeState st;
  if (alpha > 0.0) {
    const double e = std::exp(-alpha * ymax);
    st = {e, -alpha * e};
  } else {
    st = {profile.value(ymax), profile.d1(ymax)};
  }
  std::vector<cplx> pts =
      below_path ? dip_path(profile, c, ymax) : std::vector<cplx>{cplx(ymax), cplx(0.0)};
  for (size_t i = 0; i + 1 < pts.size(); ++i)
    st = integrate_second_order(rhs, pts[i], pts[i + 1], st, 1e-11, 1e-16);
  return {st.psi, st.dpsi};
}

cplx decaying_boundary_value(const ShearProfile& profile, double alpha, cplx c, double ymax,
                             bool below_path) {
  return decaying_boundary_data(profile, alpha, c, ymax, below_path).psi;
}

Basis decaying_pair(const ShearProfile& profile, double alpha, cplx c, const Grid& grid) {
  require(std::abs(profile.value(grid.ymax).real() - profile.u_plus()) <= 1e-8, errc::truncation,
          "decaying pair: Y_max too small for the asymptotic regime");
  const RayleighRhs rhs{profile, alpha, c};
  Basis b;
  b.grid = grid;
  b.psi_minus.assign(grid.size(), 0.0);
  b.dpsi_minus.assign(grid.size(), 0.0);
  b.psi_plus.assign(grid.size(), 0.0);
  b.dpsi_plus.assign(grid.size(), 0.0);

  OdeState st;
  if (alpha > 0.0) {
    const double e = std::exp(-alpha * grid.ymax);
    st = {e, -alpha * e};
  } else {
    st = {profile.value(grid.ymax), profile.d1(grid.ymax)};
  }
  b.psi_minus[grid.n] = st.psi;
  b.dpsi_minus[grid.n] = st.dpsi;
  continue_on_axis(rhs, grid.ymax, 0.0, st, grid, &b.psi_minus, &b.dpsi_minus);
  b.bv_minus = b.psi_minus[0];
  b.bv_dminus = b.dpsi_minus[0];

  OdeState sp = alpha > 0.0 ? OdeState{1.0 / (2.0 * alpha), 0.5} : OdeState{0.0, 1.0};
  b.psi_plus[0] = sp.psi;
  b.dpsi_plus[0] = sp.dpsi;
  continue_on_axis(rhs, 0.0, grid.ymax, sp, grid, &b.psi_plus, &b.dpsi_plus);

  const cplx w = b.psi_minus[0] * b.dpsi_plus[0] - b.dpsi_minus[0] * b.psi_plus[0];
  require(std::abs(w) > 1e-300, errc::near_eigenvalue, "decaying pair: degenerate Wronskian");
  for (int i = 0; i < grid.size(); ++i) {
    b.psi_plus[i] /= w;
    b.dpsi_plus[i] /= w;
  }
  b.wronskian = 1.0;
  const cplx yc_hint = c;
  b.log_branch_cut = yc_hint.imag() >= 0.0
                         ? "vertical half line downward from y_c"
                         : "vertical half line upward from y_c";
  return b;
}

namespace {

void check_spectral_distance(const ShearProfile& profile, cplx c) {
  if (std::abs(c.imag()) >= 1e-6) return;
  const double u0 = 0.0, u1 = profile.u_plus();
  const double lo = std::min(u0, u1) - 1e-6, hi = std::max(u0, u1) + 1e-6;
  require(c.real() < lo || c.real() > hi, errc::near_eigenvalue,
          "rayleigh: c within 1e-6 of the continuous spectrum");
}

// Prefix integrals by corrected trapezoid (end-derivative correction).
std::vector<cplx> prefix_integral(const std::vector<cplx>& w, double h) {
  const int n = static_cast<int>(w.size());
  std::vector<cplx> cum(n, 0.0);
  for (int i = 1; i < n; ++i) cum[i] = cum[i - 1] + 0.5 * h * (w[i - 1] + w[i]);
  // derivative estimates at ends of each prefix via central differences
  std::vector<cplx> d(n);
  for (int i = 1; i + 1 < n; ++i) d[i] = (w[i + 1] - w[i - 1]) / (2.0 * h);
  if (n >= 3) {
    d[0] = (-1.5 * w[0] + 2.0 * w[1] - 0.5 * w[2]) / h;
    d[n - 1] = (1.5 * w[n - 1] - 2.0 * w[n - 2] + 0.5 * w[n - 3]) / h;
  }
  const double corr = h * h / 12.0;
  for (int i = 1; i < n; ++i) cum[i] += corr * (d[0] - d[i]);
  return cum;
}

}  // namespace

GridFunction solve_rayleigh_bvp(const Basis& basis, const ShearProfile& profile, cplx c,
                                const GridFunction& f) {
  require(f.grid == basis.grid, errc::validation, "rayleigh bvp: grid mismatch");
  const Grid& grid = basis.grid;
  const double h = grid.dy();
  const int n = grid.size();

  const double minus_norm = [&] {
    double m = 0.0;
    for (const auto& v : basis.psi_minus) m = std::max(m, std::abs(v));
    return m;
  }();
  require(std::abs(basis.bv_minus) > 1e-10 * minus_norm, errc::near_eigenvalue,
          "rayleigh bvp: psi_-(0) nearly vanishes (point spectrum proximity)");

  // boundary-corrected growing solution, zero at the wall
  const cplx kappa = basis.psi_plus[0] / basis.bv_minus;
  std::vector<cplx> wp(n), wm(n);
  for (int i = 0; i < n; ++i) {
    const cplx g = f[i] / (profile.value(grid.y(i)) - c);
    const cplx plus_t = basis.psi_plus[i] - kappa * basis.psi_minus[i];
    wp[i] = plus_t * g;
    wm[i] = basis.psi_minus[i] * g;
  }
  std::vector<cplx> I1 = prefix_integral(wp, h);
  std::vector<cplx> Im = prefix_integral(wm, h);
  const cplx Im_total = Im[n - 1];

  GridFunction out(grid);
  for (int i = 0; i < n; ++i) {
    const cplx plus_t = basis.psi_plus[i] - kappa * basis.psi_minus[i];
    out[i] = -(basis.psi_minus[i] * I1[i] + plus_t * (Im_total - Im[i]));
  }
  return out;
}

GridFunction solve_rayleigh_bvp(const ShearProfile& profile, double alpha, cplx c,
                                const GridFunction& f) {
  check_spectral_distance(profile, c);
  Basis basis = decaying_pair(profile, alpha, c, f.grid);
  return solve_rayleigh_bvp(basis, profile, c, f);
}

cplx green_function(const ShearProfile& profile, double alpha, cplx c, double x, double y,
                    const Grid& grid) {
  check_spectral_distance(profile, c);
  Basis b = decaying_pair(profile, alpha, c, grid);
  const double minus_norm = [&] {
    double m = 0.0;
    for (const auto& v : b.psi_minus) m = std::max(m, std::abs(v));
    return m;
  }();
  require(std::abs(b.bv_minus) > 1e-10 * minus_norm, errc::near_eigenvalue,
          "green function: psi_-(0) nearly vanishes");
  const cplx kappa = b.psi_plus[0] / b.bv_minus;
  auto at = [&](double yy) { return static_cast<int>(std::round(yy / grid.dy())); };
  const int ix = at(x), iy = at(y);
  require(ix >= 0 && ix < grid.size() && iy >= 0 && iy < grid.size(), errc::validation,
          "green function: point outside grid");
  auto plus_t = [&](int i) { return b.psi_plus[i] - kappa * b.psi_minus[i]; };
  const cplx denom = profile.value(grid.y(ix)) - c;
  if (iy >= ix) return -b.psi_minus[iy] * plus_t(ix) / denom;
  return -b.psi_minus[ix] * plus_t(iy) / denom;
}

std::vector<cplx> point_spectrum(const ShearProfile& profile, double alpha, cplx lo, cplx hi) {
  require(lo.imag() >= 1e-4, errc::validation,
          "point spectrum: region must stay above the real axis");
  require(hi.real() > lo.real() && hi.imag() > lo.imag(), errc::validation,
          "point spectrum: malformed rectangle");

  auto F = [&](cplx c) { return decaying_boundary_value(profile, alpha, c); };

  // winding number of F over the rectangle boundary
  auto winding = [&](cplx a, cplx b2, int per_side) -> double {
    const cplx corners[4] = {a, cplx(b2.real(), a.imag()), b2, cplx(a.real(), b2.imag())};
    double total = 0.0;
    cplx prev = F(corners[0]);
    for (int s = 0; s < 4; ++s) {
      const cplx from = corners[s], to = corners[(s + 1) % 4];
      for (int i = 1; i <= per_side; ++i) {
        const cplx z = from + (to - from) * (static_cast<double>(i) / per_side);
        const cplx cur = F(z);
        total += std::arg(cur / prev);
        prev = cur;
      }
    }
    return total / (2.0 * M_PI);
  };

  std::vector<cplx> roots;
  struct Box {
    cplx a, b;
    int depth;
  };
  std::vector<Box> work{{lo, hi, 0}};
  while (!work.empty()) {
    Box box = work.back();
    work.pop_back();
    int per_side = 512;
    double w = winding(box.a, box.b, per_side);
    while (std::abs(w - std::round(w)) > 0.1 && per_side < 4096) {
      per_side *= 2;
      w = winding(box.a, box.b, per_side);
    }
    require(std::abs(w - std::round(w)) <= 0.1, errc::contour_resolution,
            "point spectrum: winding number did not stabilize");
    const int nz = static_cast<int>(std::llround(w));
    if (nz <= 0) continue;
    if (nz == 1) {
      // single zero inside: Newton from the box center, subdividing only if
      // the iteration escapes the box
      cplx c = 0.5 * (box.a + box.b);
      bool done = false;
      for (int it = 0; it < 60; ++it) {
        const cplx fc = F(c);
        if (std::abs(fc) < 1e-12) {
          done = true;
          break;
        }
        const double hstep = 1e-7 * std::max(1.0, std::abs(c));
        const cplx d = (F(c + hstep) - F(c - hstep)) / (2.0 * hstep);
        if (std::abs(d) < 1e-30) break;
        const cplx step = fc / d;
        c -= step;
        if (c.real() < box.a.real() - 0.5 || c.real() > box.b.real() + 0.5 ||
            c.imag() < 1e-6 || c.imag() > box.b.imag() + 0.5)
          break;
        if (std::abs(step) < 1e-13) {
          done = true;
          break;
        }
      }
      if ((done || std::abs(F(c)) < 1e-9) && c.imag() > 0.0) {
        bool dup = false;
        for (const cplx& r : roots)
          if (std::abs(r - c) < 1e-6) dup = true;
        if (!dup) roots.push_back(c);
        continue;
      }
      if (box.depth >= 6) continue;  // give up on this box
    }
    const cplx mid = 0.5 * (box.a + box.b);
    work.push_back({box.a, mid, box.depth + 1});
    work.push_back({cplx(mid.real(), box.a.imag()), cplx(box.b.real(), mid.imag()), box.depth + 1});
    work.push_back({cplx(box.a.real(), mid.imag()), cplx(mid.real(), box.b.imag()), box.depth + 1});
    work.push_back({mid, box.b, box.depth + 1});
  }
  std::sort(roots.begin(), roots.end(),
            [](cplx a, cplx b2) { return a.imag() > b2.imag(); });
  return roots;
}

Verdict criterion(const ShearProfile& profile) {
  const int n = 3000;
  const double ymax = 30.0;
  double maxmag = 0.0;
  std::vector<double> vals(n + 1);
  for (int i = 0; i <= n; ++i) {
    vals[i] = profile.d2(ymax * i / n).real();
    maxmag = std::max(maxmag, std::abs(vals[i]));
  }
  if (maxmag == 0.0) return Verdict::stable_certificate;  // no curvature at all
  const double floor = 1e-9 * maxmag;
  bool has_pos = false, has_neg = false;
  for (double v : vals) {
    if (v > floor) has_pos = true;
    if (v < -floor) has_neg = true;
  }
  return (has_pos && has_neg) ? Verdict::inconclusive : Verdict::stable_certificate;
}

}  // namespace shearstab::rayleigh
