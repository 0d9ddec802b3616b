#include "shearstab/semigroup.hpp"

#include <algorithm>
#include <cmath>

#include "shearstab/rayleigh.hpp"

namespace shearstab::semigroup {

GridFunction poisson_invert(double alpha, const GridFunction& omega) {
  require(alpha > 0.0, errc::validation, "poisson: alpha must be positive");
  const Grid& g = omega.grid;
  const int n = g.size();
  const double h = g.dy();
  {
    const double tail = std::abs(omega[n - 1]);
    if (tail > 1e-6 * std::max(omega.max_abs(), 1e-300))
      fail(errc::truncation, "poisson: omega does not decay at Y_max");
  }
  const double E = std::exp(-alpha * h);
  // cell weights: int_0^h e^{-a s} (f0 (1-s/h) + f1 s/h) ds = f0 (c0-c1) + f1 c1
  const double c0 = (1.0 - E) / alpha;
  const double c1 = (1.0 - E * (alpha * h + 1.0)) / (alpha * alpha * h);

  std::vector<cplx> Jp(n, 0.0), Jm(n, 0.0);
  for (int i = n - 2; i >= 0; --i)
    Jp[i] = E * Jp[i + 1] + omega[i] * (c0 - c1) + omega[i + 1] * c1;
  for (int i = 1; i < n; ++i) Jm[i] = E * Jm[i - 1] + omega[i] * (c0 - c1) + omega[i - 1] * c1;

  GridFunction psi(g);
  const cplx K = Jp[0];
  for (int i = 0; i < n; ++i) psi[i] = (Jp[i] + Jm[i] - std::exp(-alpha * g.y(i)) * K) / (2.0 * alpha);
  psi[0] = 0.0;
  return psi;
}

ModeState make_state(double alpha, GridFunction omega, double time) {
  ModeState st;
  st.alpha = alpha;
  st.psi = poisson_invert(alpha, omega);
  st.omega = std::move(omega);
  st.time = time;
  return st;
}

namespace {

struct EulerStepper {
  const ShearProfile& profile;
  double alpha;
  Grid grid;
  std::vector<double> U, Upp;

  EulerStepper(const ShearProfile& p, double a, const Grid& g) : profile(p), alpha(a), grid(g) {
    U.resize(g.size());
    Upp.resize(g.size());
    for (int i = 0; i < g.size(); ++i) {
      U[i] = p.value(g.y(i)).real();
      Upp[i] = p.d2(g.y(i)).real();
    }
  }

  // demodulated rhs: d(omt)/dt = -i a U'' psi[omt e^{-iaUt}] e^{+iaUt}
  std::vector<cplx> rhs(double t, const std::vector<cplx>& omt) const {
    const int n = grid.size();
    GridFunction om(grid);
    for (int i = 0; i < n; ++i)
      om[i] = omt[i] * std::exp(cplx(0.0, -alpha * U[i] * t));
    GridFunction psi = poisson_invert(alpha, om);
    std::vector<cplx> out(n);
    for (int i = 0; i < n; ++i)
      out[i] = cplx(0.0, -alpha) * Upp[i] * psi[i] * std::exp(cplx(0.0, alpha * U[i] * t));
    return out;
  }

  void rk4(double t, double dt, std::vector<cplx>* omt) const {
    const int n = grid.size();
    std::vector<cplx> k1 = rhs(t, *omt), tmp(n);
    for (int i = 0; i < n; ++i) tmp[i] = (*omt)[i] + 0.5 * dt * k1[i];
    std::vector<cplx> k2 = rhs(t + 0.5 * dt, tmp);
    for (int i = 0; i < n; ++i) tmp[i] = (*omt)[i] + 0.5 * dt * k2[i];
    std::vector<cplx> k3 = rhs(t + 0.5 * dt, tmp);
    for (int i = 0; i < n; ++i) tmp[i] = (*omt)[i] + dt * k3[i];
    std::vector<cplx> k4 = rhs(t + dt, tmp);
    for (int i = 0; i < n; ++i)
      (*omt)[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }

  ModeState snapshot(double t, const std::vector<cplx>& omt) const {
    GridFunction om(grid);
    for (int i = 0; i < grid.size(); ++i)
      om[i] = omt[i] * std::exp(cplx(0.0, -alpha * U[i] * t));
    return make_state(alpha, std::move(om), t);
  }

  double max_speed() const {
    double m = 0.0;
    for (double u : U) m = std::max(m, std::abs(u));
    return m;
  }
};

void check_cfl(double alpha, double umax, double dt) {
  require(alpha * umax * dt <= 0.5 + 1e-12, errc::validation,
          "evolve: dt violates alpha * U * dt <= 0.5");
}

}  // namespace

std::vector<ModeState> evolve_linear_euler_traj(const ShearProfile& profile,
                                                const ModeState& state, double t_final, double dt,
                                                const std::vector<double>& out_times) {
  require(dt > 0.0 && t_final >= state.time, errc::validation, "evolve: bad time parameters");
  EulerStepper st(profile, state.alpha, state.omega.grid);
  check_cfl(state.alpha, st.max_speed(), dt);

  std::vector<cplx> omt(state.omega.values);
  const int n = state.omega.grid.size();
  for (int i = 0; i < n; ++i) omt[i] *= std::exp(cplx(0.0, state.alpha * st.U[i] * state.time));

  std::vector<ModeState> out;
  size_t next = 0;
  double t = state.time;
  while (t < t_final - 1e-12) {
    double step = std::min(dt, t_final - t);
    if (next < out_times.size() && out_times[next] > t && out_times[next] < t + step)
      step = out_times[next] - t;
    st.rk4(t, step, &omt);
    t += step;
    if (next < out_times.size() && t >= out_times[next] - 1e-12) {
      out.push_back(st.snapshot(t, omt));
      ++next;
    }
  }
  if (out.empty() || out.back().time < t - 1e-12) out.push_back(st.snapshot(t, omt));
  return out;
}

ModeState evolve_linear_euler(const ShearProfile& profile, const ModeState& state, double t_final,
                              double dt) {
  return evolve_linear_euler_traj(profile, state, t_final, dt, {}).back();
}

namespace {

// Crank-Nicolson half step for d(omega)/dt = nu (D2 - a^2) omega with
// omega(0) free (influence matrix) and omega(Ymax) = 0.
struct ViscousSolver {
  double alpha, nu, dt;
  Grid grid;
  double r;       // nu dt / (2 h^2)
  double a2term;  // nu dt a^2 / 2
  std::vector<cplx> homo;  // response to unit wall vorticity
  cplx dpsi0_homo;

  ViscousSolver(double a, double nuv, double dtv, const Grid& g) : alpha(a), nu(nuv), dt(dtv), grid(g) {
    const double h = g.dy();
    r = nu * dt / (2.0 * h * h);
    a2term = nu * dt * alpha * alpha / 2.0;
    // homogeneous solution: CN solve of zero field with boundary value 1
    std::vector<cplx> zero(g.size(), 0.0);
    homo = solve(zero, 1.0);
    GridFunction hgf(g, homo);
    dpsi0_homo = wall_dpsi(hgf);
  }

  // (1 + a2term - r D2h) om_new = rhs field with om_new(0) = wall, om_new(end) = 0
  std::vector<cplx> solve(const std::vector<cplx>& explicit_part, cplx wall) const {
    const int n = grid.size();
    const int m = n - 2;
    std::vector<cplx> diag(m, 1.0 + a2term + 2.0 * r), rhs(m);
    for (int i = 0; i < m; ++i) rhs[i] = explicit_part[i + 1];
    rhs[0] += r * wall;
    std::vector<cplx> cp(m);
    cp[0] = -r / diag[0];
    rhs[0] /= diag[0];
    for (int i = 1; i < m; ++i) {
      const cplx den = diag[i] + r * cp[i - 1];
      cp[i] = -r / den;
      rhs[i] = (rhs[i] + r * rhs[i - 1]) / den;
    }
    for (int i = m - 1; i-- > 0;) rhs[i] -= cp[i] * rhs[i + 1];
    std::vector<cplx> out(n, 0.0);
    out[0] = wall;
    for (int i = 0; i < m; ++i) out[i + 1] = rhs[i];
    out[n - 1] = 0.0;
    return out;
  }

  cplx wall_dpsi(const GridFunction& om) const {
    // psi'(0) = int_0^inf e^{-a y} omega(y) dy (derivative of the H kernel at the wall)
    const int n = grid.size();
    const double h = grid.dy();
    const double E = std::exp(-alpha * h);
    const double c0 = (1.0 - E) / alpha;
    const double c1 = (1.0 - E * (alpha * h + 1.0)) / (alpha * alpha * h);
    cplx J = 0.0;
    for (int i = n - 2; i >= 0; --i) J = E * J + om[i] * (c0 - c1) + om[i + 1] * c1;
    return J;
  }

  // full CN step with the no-slip closure
  void step(std::vector<cplx>* om) const {
    const int n = grid.size();
    const double h = grid.dy();
    std::vector<cplx> expl(n);
    for (int i = 1; i + 1 < n; ++i) {
      const cplx lap = ((*om)[i + 1] - 2.0 * (*om)[i] + (*om)[i - 1]) / (h * h);
      expl[i] = (*om)[i] + 0.5 * dt * nu * (lap - alpha * alpha * (*om)[i]);
    }
    expl[0] = 0.0;
    expl[n - 1] = 0.0;
    std::vector<cplx> base = solve(expl, 0.0);
    GridFunction bgf(grid, base);
    const cplx mismatch = wall_dpsi(bgf);
    const cplx mu = -mismatch / dpsi0_homo;
    for (int i = 0; i < n; ++i) (*om)[i] = base[i] + mu * homo[i];
  }
};

}  // namespace

std::vector<ModeState> evolve_linear_ns_traj(const ShearProfile& profile, const ModeState& state,
                                             double nu, double t_final, double dt,
                                             const std::vector<double>& out_times) {
  require(nu > 0.0 && dt > 0.0 && t_final >= state.time, errc::validation,
          "evolve_ns: bad parameters");
  EulerStepper st(profile, state.alpha, state.omega.grid);
  check_cfl(state.alpha, st.max_speed(), dt);
  ViscousSolver visc(state.alpha, nu, 0.5 * dt, state.omega.grid);

  const int n = state.omega.grid.size();
  std::vector<cplx> om(state.omega.values);
  std::vector<ModeState> out;
  size_t next = 0;
  double t = state.time;

  auto advect_rk4 = [&](double tt, double step, std::vector<cplx>* field) {
    // plain-picture advective RK4: d om/dt = -i a U om - i a U'' psi
    auto rhs = [&](const std::vector<cplx>& f) {
      GridFunction fg(state.omega.grid, f);
      GridFunction psi = poisson_invert(state.alpha, fg);
      std::vector<cplx> r(n);
      for (int i = 0; i < n; ++i)
        r[i] = cplx(0.0, -state.alpha) * (st.U[i] * f[i] + st.Upp[i] * psi[i]);
      return r;
    };
    (void)tt;
    std::vector<cplx> k1 = rhs(*field), tmp(n);
    for (int i = 0; i < n; ++i) tmp[i] = (*field)[i] + 0.5 * step * k1[i];
    std::vector<cplx> k2 = rhs(tmp);
    for (int i = 0; i < n; ++i) tmp[i] = (*field)[i] + 0.5 * step * k2[i];
    std::vector<cplx> k3 = rhs(tmp);
    for (int i = 0; i < n; ++i) tmp[i] = (*field)[i] + step * k3[i];
    std::vector<cplx> k4 = rhs(tmp);
    for (int i = 0; i < n; ++i)
      (*field)[i] += step / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  };

  while (t < t_final - 1e-12) {
    const double step = std::min(dt, t_final - t);
    ViscousSolver* vs = &visc;
    ViscousSolver local(state.alpha, nu, 0.5 * step, state.omega.grid);
    if (std::abs(step - dt) > 1e-14) vs = &local;
    vs->step(&om);
    advect_rk4(t, step, &om);
    vs->step(&om);
    t += step;
    if (next < out_times.size() && t >= out_times[next] - 1e-9) {
      GridFunction og(state.omega.grid, om);
      out.push_back(make_state(state.alpha, og, t));
      ++next;
    }
  }
  GridFunction og(state.omega.grid, om);
  if (out.empty() || out.back().time < t - 1e-12) out.push_back(make_state(state.alpha, og, t));
  return out;
}

ModeState evolve_linear_ns(const ShearProfile& profile, const ModeState& state, double nu,
                           double t_final, double dt) {
  return evolve_linear_ns_traj(profile, state, nu, t_final, dt, {}).back();
}

Contour Contour::rectangle(double u_plus, double margin_re, double margin_im) {
  Contour c;
  const double lo = std::min(0.0, u_plus) - margin_re;
  const double hi = std::max(0.0, u_plus) + margin_re;
  c.vertices = {cplx(lo, -margin_im), cplx(hi, -margin_im), cplx(hi, margin_im),
                cplx(lo, margin_im)};
  c.closed = true;
  return c;
}

namespace {

void check_contour(const ShearProfile& profile, const Contour& contour) {
  require(contour.vertices.size() >= 2, errc::validation, "contour: needs at least two vertices");
  const double up = profile.u_plus();
  for (const cplx& v : contour.vertices) {
    const bool on_spectrum = std::abs(v.imag()) < 1e-12 && v.real() >= std::min(0.0, up) - 1e-12 &&
                             v.real() <= std::max(0.0, up) + 1e-12;
    require(!on_spectrum, errc::validation, "contour: vertex on the continuous spectrum");
  }
}

// integrand psi_{alpha,c} = (i/alpha) Ray^{-1} omega0 on the grid
GridFunction resolvent_psi(const ShearProfile& profile, double alpha, cplx c,
                           const GridFunction& omega0) {
  GridFunction f(omega0.grid);
  const cplx pref = cplx(0.0, 1.0) / alpha;
  for (int i = 0; i < f.size(); ++i) f[i] = pref * omega0[i];
  rayleigh::Basis basis = rayleigh::decaying_pair(profile, alpha, c, omega0.grid);
  return rayleigh::solve_rayleigh_bvp(basis, profile, c, f);
}

}  // namespace

GridFunction resolvent_contour_evolve(const ShearProfile& profile, double alpha,
                                      const GridFunction& psi0, double t, const Contour& contour) {
  require(alpha > 0.0 && t >= 0.0, errc::validation, "contour evolve: bad parameters");
  check_contour(profile, contour);

  // omega0 = -(d^2 - a^2) psi0
  GridFunction om0 = second_derivative(psi0);
  for (int i = 0; i < om0.size(); ++i) om0[i] = -(om0[i] - alpha * alpha * psi0[i]);

  const Grid& grid = psi0.grid;
  const int n = grid.size();
  std::vector<cplx> total(n, 0.0);

  const size_t nseg = contour.closed ? contour.vertices.size() : contour.vertices.size() - 1;
  for (size_t s = 0; s < nseg; ++s) {
    const cplx z0 = contour.vertices[s];
    const cplx z1 = contour.vertices[(s + 1) % contour.vertices.size()];
    // adaptive trapezoid with doubling until the segment integral settles
    int m = 32;
    std::vector<std::vector<cplx>> vals;  // cached integrand at the current nodes
    auto integrand = [&](double frac) {
      const cplx c = z0 + (z1 - z0) * frac;
      GridFunction psi_c = resolvent_psi(profile, alpha, c, om0);
      std::vector<cplx> v(n);
      const cplx ph = std::exp(cplx(0.0, -1.0) * alpha * c * t);
      for (int i = 0; i < n; ++i) v[i] = ph * psi_c[i];
      return v;
    };
    vals.push_back(integrand(0.0));
    vals.push_back(integrand(1.0));
    std::vector<cplx> seg_sum(n);
    auto trap = [&](const std::vector<std::vector<cplx>>& nodes) {
      std::vector<cplx> acc(n, 0.0);
      const double hh = 1.0 / (nodes.size() - 1);
      for (size_t k = 0; k + 1 < nodes.size(); ++k)
        for (int i = 0; i < n; ++i) acc[i] += 0.5 * hh * (nodes[k][i] + nodes[k + 1][i]);
      return acc;
    };
    seg_sum = trap(vals);
    for (int level = 0; level < 7; ++level) {
      std::vector<std::vector<cplx>> refined;
      refined.reserve(vals.size() * 2 - 1);
      const double hh = 1.0 / (vals.size() - 1);
      for (size_t k = 0; k + 1 < vals.size(); ++k) {
        refined.push_back(std::move(vals[k]));
        refined.push_back(integrand((k + 0.5) * hh));
      }
      refined.push_back(std::move(vals.back()));
      vals = std::move(refined);
      std::vector<cplx> better = trap(vals);
      double diff = 0.0, scale = 0.0;
      for (int i = 0; i < n; ++i) {
        diff = std::max(diff, std::abs(better[i] - seg_sum[i]));
        scale = std::max(scale, std::abs(better[i]));
      }
      seg_sum = std::move(better);
      if (static_cast<int>(vals.size()) >= m && diff < 1e-4 * std::max(scale, 1e-12)) break;
    }
    for (int i = 0; i < n; ++i) total[i] += (z1 - z0) * seg_sum[i];
  }

  GridFunction out(grid);
  const cplx pref = -alpha / (2.0 * M_PI);
  for (int i = 0; i < n; ++i) out[i] = pref * total[i];
  return out;
}

cplx vorticity_contour(const ShearProfile& profile, double alpha, const GridFunction& omega0,
                       double t, double y, const Contour& contour) {
  require(alpha > 0.0 && t >= 0.0, errc::validation, "vorticity contour: bad parameters");
  check_contour(profile, contour);
  const Grid& grid = omega0.grid;
  const int iy = static_cast<int>(std::round(y / grid.dy()));
  require(iy >= 0 && iy < grid.size(), errc::validation, "vorticity contour: y outside grid");
  const double ys = grid.y(iy);
  const cplx Uy = profile.value(ys);

  cplx total = 0.0;
  const size_t nseg = contour.closed ? contour.vertices.size() : contour.vertices.size() - 1;
  for (size_t s = 0; s < nseg; ++s) {
    const cplx z0 = contour.vertices[s];
    const cplx z1 = contour.vertices[(s + 1) % contour.vertices.size()];
    auto integrand = [&](double frac) -> cplx {
      const cplx c = z0 + (z1 - z0) * frac;
      GridFunction psi_c = resolvent_psi(profile, alpha, c, omega0);
      // omega_{alpha,c}(y) = -(U'' psi_c + (i/alpha) omega0)/(U - c)
      const cplx zeta =
          profile.d2(ys) * psi_c[iy] + (cplx(0.0, 1.0) / alpha) * omega0[iy];
      require(std::abs(Uy - c) > 1e-3 * grid.dy(), errc::validation,
              "vorticity contour: quadrature-degenerate point");
      const cplx om_c = -zeta / (Uy - c);
      return std::exp(cplx(0.0, -1.0) * alpha * c * t) * om_c;
    };
    int m = 64;
    std::vector<cplx> vals{integrand(0.0), integrand(1.0)};
    auto trap = [&](const std::vector<cplx>& nodes) {
      cplx acc = 0.0;
      const double hh = 1.0 / (nodes.size() - 1);
      for (size_t k = 0; k + 1 < nodes.size(); ++k) acc += 0.5 * hh * (nodes[k] + nodes[k + 1]);
      return acc;
    };
    cplx seg = trap(vals);
    for (int level = 0; level < 8; ++level) {
      std::vector<cplx> refined;
      const double hh = 1.0 / (vals.size() - 1);
      for (size_t k = 0; k + 1 < vals.size(); ++k) {
        refined.push_back(vals[k]);
        refined.push_back(integrand((k + 0.5) * hh));
      }
      refined.push_back(vals.back());
      vals = std::move(refined);
      const cplx better = trap(vals);
      const double diff = std::abs(better - seg);
      seg = better;
      if (static_cast<int>(vals.size()) >= m && diff < 1e-5 * std::max(std::abs(seg), 1e-12))
        break;
    }
    total += (z1 - z0) * seg;
  }
  return -alpha / (2.0 * M_PI) * total;
}

DampingReport damping_diagnostics(const ShearProfile& profile,
                                  const std::vector<ModeState>& trajectory) {
  require(trajectory.size() >= 4, errc::insufficient_data, "damping: trajectory too short");
  double tmin = 1e300, tmax = 0.0;
  for (const auto& st : trajectory) {
    tmin = std::min(tmin, st.time);
    tmax = std::max(tmax, st.time);
  }
  require(tmax >= 10.0 * std::max(tmin, 1.0) && tmax > 10.0, errc::insufficient_data,
          "damping: need at least one decade beyond t = 10");

  // least-squares slope of log Q vs log(1+t) for t >= 10
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int cnt = 0;
  for (const auto& st : trajectory) {
    if (st.time < 10.0) continue;
    GridFunction dpsi = first_derivative(st.psi);
    const double Q = st.alpha * st.psi.max_abs() + dpsi.max_abs();
    const double x = std::log(1.0 + st.time), yv = std::log(std::max(Q, 1e-300));
    sx += x;
    sy += yv;
    sxx += x * x;
    sxy += x * yv;
    ++cnt;
  }
  require(cnt >= 3, errc::insufficient_data, "damping: too few samples beyond t = 10");

  DampingReport rep;
  rep.decay_exponent = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);

  // demodulated vorticity averaged over the last decade
  const Grid& grid = trajectory.front().omega.grid;
  rep.omega_infinity = GridFunction(grid);
  int navg = 0;
  for (const auto& st : trajectory) {
    if (st.time < 0.1 * tmax) continue;
    for (int i = 0; i < grid.size(); ++i) {
      const double Uy = profile.value(grid.y(i)).real();
      rep.omega_infinity[i] += st.omega[i] * std::exp(cplx(0.0, st.alpha * Uy * st.time));
    }
    ++navg;
  }
  for (int i = 0; i < grid.size(); ++i) rep.omega_infinity[i] /= static_cast<double>(navg);
  return rep;
}

}  // namespace shearstab::semigroup
