#include "shearstab/cascade.hpp"

#include <cmath>
#include <numeric>

namespace shearstab::cascade {

Rational::Rational(std::int64_t n, std::int64_t d) : num(n), den(d) {
  require(den != 0, errc::validation, "rational: zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
}

Rational Rational::operator+(Rational o) const { return {num * o.den + o.num * den, den * o.den}; }
Rational Rational::operator-(Rational o) const { return {num * o.den - o.num * den, den * o.den}; }
Rational Rational::operator*(Rational o) const { return {num * o.num, den * o.den}; }
bool Rational::operator<(const Rational& o) const { return num * o.den < o.num * den; }

std::string Rational::str() const {
  if (den == 1) return std::to_string(num);
  return std::to_string(num) + "/" + std::to_string(den);
}

double ScaleExpr::eval(double nu) const {
  require(nu > 0.0 && nu < 1.0, errc::validation, "scale: nu must lie in (0,1)");
  double v = std::pow(nu, exponent.value());
  if (log_power != 0) v *= std::pow(std::log(1.0 / nu), log_power);
  return v;
}

namespace {

std::string join_tags(const std::string& a, const std::string& b, char op) {
  if (a == "1") return op == '*' ? b : (b == "1" ? a : a + "/" + b);
  if (b == "1") return a;
  return a + op + b;
}

}  // namespace

ScaleExpr scale_mul(const ScaleExpr& a, const ScaleExpr& b) {
  return {join_tags(a.prefactor_tag, b.prefactor_tag, '*'), a.exponent + b.exponent,
          a.log_power + b.log_power};
}

ScaleExpr scale_div(const ScaleExpr& a, const ScaleExpr& b) {
  return {join_tags(a.prefactor_tag, b.prefactor_tag, '/'), a.exponent - b.exponent,
          a.log_power - b.log_power};
}

ScaleExpr scale_pow(const ScaleExpr& a, Rational r) {
  require(a.log_power == 0 || r.den == 1, errc::validation,
          "scale: fractional power of a log factor");
  std::string tag = a.prefactor_tag;
  if (tag != "1") tag = "(" + tag + ")^(" + r.str() + ")";
  return {tag, a.exponent * r, static_cast<int>(a.log_power * r.num / r.den)};
}

ScaleExpr rescale_viscosity(Rational a) {
  require(Rational(0) < a || a == Rational(0), errc::validation, "rescale: exponent must be >= 0");
  require(a < Rational(1), errc::validation, "rescale: exponent must be < 1");
  return {"1", Rational(1) - a, 0};
}

ScaleExpr reynolds_number(const ScaleExpr& length, const ScaleExpr& velocity,
                          const ScaleExpr& viscosity) {
  return scale_div(scale_mul(length, velocity), viscosity);
}

GridFunction sublayer_corrector(cplx dphi0, cplx c1, double nu1, const Grid& grid) {
  require(c1.imag() > 0.0, errc::validation,
          "sublayer corrector: Im c1 > 0 required (unstable mode)");
  const cplx mu = std::sqrt(-c1);
  require(mu.real() > 0.0, errc::branch, "sublayer corrector: no decaying branch (Re mu <= 0)");
  const double rtnu = std::sqrt(nu1);
  GridFunction out(grid);
  for (int i = 0; i < grid.size(); ++i) {
    const double y = grid.y(i);
    out[i] = -dphi0 * rtnu / mu * (1.0 - std::exp(-mu * y / rtnu));
  }
  return out;
}

ShearProfile second_layer_profile(cplx dphi0, cplx c1) {
  require(c1.imag() > 0.0, errc::validation,
          "second layer profile: Im c1 > 0 required (unstable mode)");
  const cplx mu = std::sqrt(-c1);
  require(mu.real() > 0.0, errc::branch, "second layer profile: no decaying branch");
  return ShearProfile::two_exponential(dphi0, mu);
}

cplx group_velocity(const os::DispersionScan& scan, double alpha0) {
  const auto& rows = scan.rows;
  require(rows.size() >= 5, errc::validation, "group velocity: scan too short");
  size_t k = 0;
  double best = 1e300;
  for (size_t i = 0; i < rows.size(); ++i) {
    const double d = std::abs(rows[i].alpha0 - alpha0);
    if (d < best) {
      best = d;
      k = i;
    }
  }
  require(k >= 2 && k + 2 < rows.size(), errc::stencil,
          "group velocity: point too close to the scan edge");
  const double h = rows[k + 1].alpha0 - rows[k].alpha0;
  const cplx f = [&](size_t i) { return rows[i].alpha0 * rows[i].c0; }(k);
  (void)f;
  auto ac = [&](size_t i) { return rows[i].alpha0 * rows[i].c0; };
  return (ac(k + 1) - ac(k - 1)) / (2.0 * h);
}

ScaleExpr saturation_amplitude(CubicSign sign) {
  switch (sign) {
    case CubicSign::negative:
      return {"1", Rational(1, 16), 0};
    case CubicSign::zero:
      return {"1", Rational(1, 32), 0};
    case CubicSign::positive:
      return {"1", Rational(0), 0};
  }
  fail(errc::validation, "saturation: unknown sign");
}

namespace {

LayerReport::Row row(const std::string& qty, const std::string& label, ScaleExpr s, double nu,
                     const std::string& anchor) {
  return {qty, label, s, s.eval(nu), anchor};
}

}  // namespace

LayerReport cascade_report(double nu, Scenario scenario) {
  require(nu > 0.0 && nu < 1.0, errc::validation, "cascade: nu must lie in (0,1)");
  LayerReport rep;
  rep.scenario = scenario;
  rep.nu = nu;

  const ScaleExpr one{"1", Rational(0), 0};
  const ScaleExpr nu_full{"1", Rational(1), 0};
  const ScaleExpr u_plus{"U_+", Rational(0), 0};

  // first rescaling: shear-layer thickness nu^{1/2}
  const ScaleExpr prandtl = scale_pow(nu_full, Rational(1, 2));
  const ScaleExpr nu1 = rescale_viscosity(Rational(1, 2));  // nu^{1/2}

  if (scenario == Scenario::euler_unstable) {
    // sublayer of the Rayleigh instability: width nu1^{1/2} in rescaled
    // variables, nu^{1/2} * nu1^{1/2} = nu^{3/4} in the original ones
    const ScaleExpr sublayer = scale_mul(prandtl, scale_pow(nu1, Rational(1, 2)));
    // second rescaling onto the sublayer: nu2 = nu^{1/4}
    const ScaleExpr nu2 = rescale_viscosity(Rational(3, 4));
    const ScaleExpr re1 = reynolds_number(prandtl, u_plus, nu_full);
    const ScaleExpr re2 = reynolds_number(sublayer, u_plus, nu_full);
    // band center alpha2 ~ nu2^{1/4}; growth alpha2 Im c2 ~ nu2^{1/2}
    const ScaleExpr alpha2 = scale_pow(nu2, Rational(1, 4));
    const ScaleExpr growth2 = scale_pow(nu2, Rational(1, 2));
    const ScaleExpr t_insta2 =
        scale_mul(scale_pow(growth2, Rational(-1)), scale_pow(nu_full, Rational(3, 4)));
    // critical layer of the second instability: Z_c ~ nu2^{1/4} in Y2
    const ScaleExpr crit2 = scale_mul(sublayer, scale_pow(nu2, Rational(1, 4)));
    // recirculation/travel: alpha2^{-1} in Y2
    const ScaleExpr recirc2 = scale_mul(sublayer, scale_pow(alpha2, Rational(-1)));
    const ScaleExpr sigma2 = scale_pow(nu2, Rational(1, 4));
    const ScaleExpr travel =
        scale_mul(sublayer, scale_mul(sigma2, scale_pow(growth2, Rational(-1))));

    rep.rows.push_back(row("vertical", "domain", one, nu, "domain_scale"));
    rep.rows.push_back(row("vertical", "shear_layer", prandtl, nu, "prandtl_layer"));
    rep.rows.push_back(row("vertical", "instability_sublayer", sublayer, nu, "first_sublayer"));
    rep.rows.push_back(row("vertical", "second_critical_layer", crit2, nu,
                           "second_layer_critical"));
    rep.rows.push_back(row("horizontal", "domain", one, nu, "domain_scale"));
    rep.rows.push_back(row("horizontal", "instability_period", prandtl, nu, "rayleigh_mode"));
    rep.rows.push_back(row("horizontal", "second_recirculation", recirc2, nu,
                           "second_layer_rolls"));
    rep.rows.push_back(row("time", "background_diffusion", one, nu, "heat_evolution"));
    rep.rows.push_back(row("time", "first_instability", prandtl, nu, "rayleigh_growth"));
    rep.rows.push_back(row("time", "second_instability", t_insta2, nu, "second_layer_growth"));
    rep.rows.push_back(
        row("special", "onset_time", ScaleExpr{"C_0", Rational(0), 1}, nu, "log_onset"));
    rep.rows.push_back(row("reynolds", "shear_layer", re1, nu, "first_reynolds"));
    rep.rows.push_back(row("reynolds", "instability_sublayer", re2, nu, "second_reynolds"));
  } else {
    // Euler-stable profile: viscous (Tollmien-Schlichting type) instability
    // of the nu^{1/2} layer; alpha1 ~ nu1^{1/4}, growth ~ nu1^{1/2}
    const ScaleExpr alpha1 = scale_pow(nu1, Rational(1, 4));  // nu^{1/8}
    const ScaleExpr growth1 = scale_pow(nu1, Rational(1, 2));
    const ScaleExpr t_insta1 =
        scale_mul(scale_pow(growth1, Rational(-1)), scale_pow(nu_full, Rational(1, 2)));
    // critical layer y_c ~ c1 ~ nu1^{1/4} in rescaled variables
    const ScaleExpr crit1 = scale_mul(prandtl, scale_pow(nu1, Rational(1, 4)));
    // recirculation layer alpha1^{-1} in rescaled variables
    const ScaleExpr recirc1 = scale_mul(prandtl, scale_pow(alpha1, Rational(-1)));
    const ScaleExpr period1 = recirc1;

    rep.rows.push_back(row("vertical", "domain", one, nu, "domain_scale"));
    rep.rows.push_back(row("vertical", "recirculation_layer", recirc1, nu, "recirculation"));
    rep.rows.push_back(row("vertical", "shear_layer", prandtl, nu, "prandtl_layer"));
    rep.rows.push_back(row("vertical", "critical_layer", crit1, nu, "viscous_critical"));
    rep.rows.push_back(row("horizontal", "domain", one, nu, "domain_scale"));
    rep.rows.push_back(row("horizontal", "instability_period", period1, nu, "ts_wave_period"));
    rep.rows.push_back(row("time", "background_diffusion", one, nu, "heat_evolution"));
    rep.rows.push_back(row("time", "instability_growth", t_insta1, nu, "ts_wave_growth"));
    rep.rows.push_back(
        row("special", "onset_time", ScaleExpr{"C_0", Rational(0), 1}, nu, "log_onset"));
    rep.rows.push_back(
        row("reynolds", "shear_layer", reynolds_number(prandtl, u_plus, nu_full), nu,
            "first_reynolds"));
  }
  return rep;
}

}  // namespace shearstab::cascade
