#include "shearstab/airy.hpp"

#include <array>
#include <cmath>

#include "shearstab/detail/dd.hpp"
#include "shearstab/errors.hpp"

namespace shearstab::airy {

namespace {

using detail_dd = shearstab::detail::dd;
using ddc = shearstab::detail::ddc;

// Ai(0), -Ai'(0), 1/3 and sqrt(3) as double-double pairs (hi parts are the
// correctly rounded doubles, lo parts the residuals).
constexpr detail_dd kAi0{0.3550280538878172, 2.05233632436212e-17};
constexpr detail_dd kNegAip0{0.2588194037928068, -2.522243111610832e-17};
constexpr detail_dd kOneThird{0.3333333333333333, 1.850371707708594e-17};
constexpr detail_dd kSqrt3{1.7320508075688772, 1.0035084221806903e-16};

const double kInvTwoSqrtPi = 1.0 / (2.0 * std::sqrt(M_PI));
const cplx kOmega = std::polar(1.0, 2.0 * M_PI / 3.0);   // e^{2 pi i / 3}
const cplx kOmegaBar = std::conj(kOmega);

constexpr int kSeriesTerms = 64;
constexpr int kAsymTerms = 40;

struct AsymCoeffs {
  std::array<double, kAsymTerms> u, v, s, p;
  AsymCoeffs() {
    u[0] = v[0] = s[0] = p[0] = 1.0;
    for (int k = 0; k + 1 < kAsymTerms; ++k) {
      u[k + 1] = u[k] * (6.0 * k + 1.0) * (6.0 * k + 5.0) / (72.0 * (k + 1.0));
      v[k + 1] = u[k + 1] * (6.0 * (k + 1) + 1.0) / (1.0 - 6.0 * (k + 1));
    }
    v[0] = 1.0;
    double sign = 1.0;
    for (int k = 1; k < kAsymTerms; ++k) {
      sign = -sign;
      s[k] = sign * u[k] - (k - 0.5) * s[k - 1];
      p[k] = s[k] - (k - 1.0 / 6.0) * p[k - 1];
    }
  }
};
const AsymCoeffs kAsym;

// Sum of an asymptotic series sum_k coeff[k] * alt^k / zeta^k, truncated at the
// smallest term (standard optimal truncation).
cplx asym_sum(const std::array<double, kAsymTerms>& coeff, cplx inv_zeta, bool alternate) {
  cplx sum = coeff[0];
  cplx pow = 1.0;
  double prev = std::abs(coeff[0]);
  for (int k = 1; k < kAsymTerms; ++k) {
    pow *= inv_zeta;
    cplx term = coeff[k] * pow;
    if (alternate && (k & 1)) term = -term;
    double mag = std::abs(term);
    if (mag > prev) break;
    sum += term;
    if (mag < 1e-18 * std::abs(sum)) break;
    prev = mag;
  }
  return sum;
}

double principal_arg(cplx z) { return std::atan2(z.imag(), z.real()); }

// 64-point Gauss-Legendre rule on [0,1] (nodes by Newton on P_64).
struct GaussLegendre {
  std::array<double, 64> x, w;
  GaussLegendre() {
    const int n = 64;
    for (int i = 0; i < n; ++i) {
      double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = t;
        for (int k = 2; k <= n; ++k) {
          double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        double dp = n * (t * p1 - p0) / (t * t - 1.0);
        double dt = p1 / dp;
        t -= dt;
        if (std::abs(dt) < 1e-15) break;
      }
      double p0 = 1.0, p1 = t;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      double dp = n * (t * p1 - p0) / (t * t - 1.0);
      x[i] = 0.5 * (1.0 + t);
      w[i] = 1.0 / ((1.0 - t * t) * dp * dp);
    }
  }
};
const GaussLegendre kGL;

struct ScaledValue {
  cplx m;
  double ls;
};

// a + b with independent scales, result rebased to the larger scale.
ScaledValue scaled_add(ScaledValue a, ScaledValue b) {
  if (b.ls > a.ls) std::swap(a, b);
  double d = b.ls - a.ls;  // <= 0
  cplx m = a.m + (d < -745.0 ? cplx(0.0) : b.m * std::exp(d));
  return {m, a.ls};
}

Ladder ai_ladder_any(cplx z);

}  // namespace

cplx Ladder::unscaled(cplx mantissa) const {
  if (mantissa == cplx(0.0)) return 0.0;
  if (log_scale > 700.0)
    fail(errc::range, "airy: value exceeds representable range (growing ray)");
  return mantissa * std::exp(log_scale);
}

namespace detail {

// Maclaurin evaluation of both families and their repeated integrals, summed
// in double-double arithmetic.
Ladder ladder_series(Kind kind, cplx z) {
  const ddc zz(z);
  const ddc z3 = zz * zz * zz;

  // f'' = z f with f(0)=1, f'(0)=0 ; g(0)=0, g'(0)=1.
  ddc f_t(cplx(1.0)), fp_t = (zz * zz) / 2.0, g_t = zz, gp_t(cplx(1.0));
  ddc F1_t = zz, G1_t = (zz * zz) / 2.0, F2_t = (zz * zz) / 2.0, G2_t = (zz * zz * zz) / 6.0;
  ddc f = f_t, fp = fp_t, g = g_t, gp = gp_t, F1 = F1_t, G1 = G1_t, F2 = F2_t, G2 = G2_t;

  const double floor2 = 1e-80;
  for (int k = 0; k < kSeriesTerms; ++k) {
    const double k3 = 3.0 * k;
    f_t = f_t * z3 / ((k3 + 2) * (k3 + 3));
    fp_t = fp_t * z3 / ((k3 + 3) * (k3 + 5));
    g_t = g_t * z3 / ((k3 + 3) * (k3 + 4));
    gp_t = gp_t * z3 / ((k3 + 1) * (k3 + 3));
    F1_t = (F1_t * z3 * (k3 + 1.0)) / ((k3 + 2) * (k3 + 3) * (k3 + 4));
    G1_t = (G1_t * z3 * (k3 + 2.0)) / ((k3 + 3) * (k3 + 4) * (k3 + 5));
    F2_t = (F2_t * z3 * (k3 + 1.0)) / ((k3 + 3) * (k3 + 4) * (k3 + 5));
    G2_t = (G2_t * z3 * (k3 + 2.0)) / ((k3 + 4) * (k3 + 5) * (k3 + 6));
    f = f + f_t;
    fp = fp + fp_t;
    g = g + g_t;
    gp = gp + gp_t;
    F1 = F1 + F1_t;
    G1 = G1 + G1_t;
    F2 = F2 + F2_t;
    G2 = G2 + G2_t;
    if (shearstab::detail::abs2(f_t) < floor2 && shearstab::detail::abs2(g_t) < floor2) break;
  }

  Ladder out;
  out.log_scale = 0.0;
  if (kind == Kind::Ai) {
    out.f = (f * kAi0 - g * kNegAip0).to_cplx();
    out.df = (fp * kAi0 - gp * kNegAip0).to_cplx();
    // Ai(1,z) = -1/3 + int_0^z Ai ;  Ai(2,z) = -Ai'(0) - z/3 + int_0^z (z-t) Ai.
    ddc i1 = F1 * kAi0 - G1 * kNegAip0;
    i1.re = i1.re - kOneThird;
    ddc i2 = F2 * kAi0 - G2 * kNegAip0;
    i2 = i2 - ddc(zz * kOneThird);
    i2.re = i2.re + kNegAip0;
    out.i1 = i1.to_cplx();
    out.i2 = i2.to_cplx();
  } else {
    out.f = ((f * kAi0 + g * kNegAip0) * kSqrt3).to_cplx();
    out.df = ((fp * kAi0 + gp * kNegAip0) * kSqrt3).to_cplx();
    out.i1 = ((F1 * kAi0 + G1 * kNegAip0) * kSqrt3).to_cplx();
    out.i2 = ((F2 * kAi0 + G2 * kNegAip0) * kSqrt3).to_cplx();
  }
  return out;
}

// Large-|z| expansion of the Ai family, valid for |arg z| <= 2 pi / 3.
// The repeated integrals acquire Stokes constants (-1 and -z) across the ray
// arg z = 2 pi / 3; inside the smoothing wedge around the ray the half-value
// rule applies, and the mismatch with the true error-function smoothing is
// buried under the dominant exponential.
Ladder ladder_asymptotic_ai(cplx z) {
  const cplx zeta = (2.0 / 3.0) * std::pow(z, 1.5);
  const cplx inv_zeta = 1.0 / zeta;
  const cplx q = std::pow(z, 0.25);
  const cplx phase = std::exp(cplx(0.0, -zeta.imag()));

  Ladder out;
  out.log_scale = -zeta.real();
  const cplx common = kInvTwoSqrtPi * phase;
  out.f = common / q * asym_sum(kAsym.u, inv_zeta, true);
  out.df = -common * q * asym_sum(kAsym.v, inv_zeta, true);
  out.i1 = -common / (q * q * q) * asym_sum(kAsym.s, inv_zeta, false);
  out.i2 = common / (q * q * q * q * q) * asym_sum(kAsym.p, inv_zeta, false);

  const double wedge = 1.0 / std::sqrt(std::max(std::abs(zeta), 1.0));
  if (std::abs(std::atan2(z.imag(), z.real())) >= 2.0 * M_PI / 3.0 - wedge &&
      out.log_scale > -3.0) {
    const double damp = std::exp(-out.log_scale);
    out.i1 += -0.5 * damp;
    out.i2 += -0.5 * z * damp;
  }
  return out;
}

}  // namespace detail

namespace {

constexpr double kSectorLimit = 2.0 * M_PI / 3.0 + 1e-12;

// The double-double Maclaurin sum stays accurate whenever the result is not
// recessive (loss ~ e^{|zeta| + Re zeta} * 1e-32), so extend it beyond the
// nominal radius except along decay-dominated directions.
bool use_series(cplx z) {
  const double az = std::abs(z);
  if (az <= series_switch_radius) return true;
  if (az <= 12.0) {
    const cplx zeta = (2.0 / 3.0) * std::pow(z, 1.5);
    if (zeta.real() <= 2.0) return true;
  }
  return false;
}

// The integrated asymptotic series (s_k, p_k coefficients) has only an
// e^{-zeta} truncation floor, because the coefficients grow twice as fast as
// u_k. In the decay-dominated annulus that floor is visible, so the repeated
// integrals are evaluated instead by scaled Gauss-Legendre quadrature of Ai
// along the ray t = z(1+s), where Re zeta(t) = Re zeta(z) (1+s)^{3/2} grows.
void integrals_by_ray_quadrature(cplx z, cplx zeta, Ladder* out) {
  const double re0 = zeta.real();
  const double smax = std::pow(1.0 + 42.0 / re0, 2.0 / 3.0) - 1.0;
  const double knots[4] = {0.0, 0.12 * smax, 0.45 * smax, smax};
  cplx i1 = 0.0, i2 = 0.0;
  for (int seg = 0; seg < 3; ++seg) {
    const double a = knots[seg], b = knots[seg + 1];
    for (int j = 0; j < 64; ++j) {
      const double s = a + (b - a) * kGL.x[j];
      const Ladder lt = detail::ladder_asymptotic_ai(z * (1.0 + s));
      const double rebase = lt.log_scale - out->log_scale;  // <= 0
      if (rebase < -745.0) continue;
      const cplx f = lt.f * std::exp(rebase);
      const double wj = (b - a) * kGL.w[j];
      i1 += wj * f;
      i2 += wj * s * f;
    }
  }
  out->i1 = -z * i1;
  out->i2 = z * z * i2;
}

Ladder ai_ladder_core(cplx z) {
  if (use_series(z)) return detail::ladder_series(Kind::Ai, z);
  Ladder out = detail::ladder_asymptotic_ai(z);
  const cplx zeta = (2.0 / 3.0) * std::pow(z, 1.5);
  if (zeta.real() > 2.0 && std::abs(zeta) < 30.0) integrals_by_ray_quadrature(z, zeta, &out);
  return out;
}

// Ai family for any argument; the left sector is mapped into |arg| <= 2 pi / 3
// through the rotation identities
//   Ai(z)   = -w Ai(wz) - w^2 Ai(w^2 z)
//   Ai'(z)  = -w^2 Ai'(wz) - w Ai'(w^2 z)
//   Ai(1,z) = -1 - Ai(1,wz) - Ai(1,w^2 z)
//   Ai(2,z) = -z - w^2 Ai(2,wz) - w Ai(2,w^2 z)
// with w = e^{2 pi i / 3}.
Ladder ai_ladder_any(cplx z) {
  if (use_series(z) || std::abs(principal_arg(z)) <= kSectorLimit) return ai_ladder_core(z);

  const cplx w1 = z * kOmega;
  const cplx w2 = z * kOmegaBar;
  const Ladder a = ai_ladder_core(w1);
  const Ladder b = ai_ladder_core(w2);

  Ladder out;
  ScaledValue f = scaled_add({-kOmega * a.f, a.log_scale}, {-kOmegaBar * b.f, b.log_scale});
  ScaledValue df = scaled_add({-kOmegaBar * a.df, a.log_scale}, {-kOmega * b.df, b.log_scale});
  ScaledValue i1 = scaled_add({-a.i1, a.log_scale}, {-b.i1, b.log_scale});
  i1 = scaled_add(i1, {cplx(-1.0), 0.0});
  ScaledValue i2 = scaled_add({-kOmegaBar * a.i2, a.log_scale}, {-kOmega * b.i2, b.log_scale});
  i2 = scaled_add(i2, {-z, 0.0});

  // All four components share one scale; rebase to the largest.
  double L = std::max(std::max(f.ls, df.ls), std::max(i1.ls, i2.ls));
  auto rebase = [L](ScaledValue v) {
    double d = v.ls - L;
    return d < -745.0 ? cplx(0.0) : v.m * std::exp(d);
  };
  out.f = rebase(f);
  out.df = rebase(df);
  out.i1 = rebase(i1);
  out.i2 = rebase(i2);
  out.log_scale = L;
  return out;
}

// Bi family from two rotated Ai evaluations:
//   Bi(z)   = e^{i pi/6} Ai(wz) + e^{-i pi/6} Ai(w^2 z)
//   Bi'(z)  = e^{5 i pi/6} Ai'(wz) + e^{-5 i pi/6} Ai'(w^2 z)
//   Bi(1,z) = i [Ai(1, w^2 z) - Ai(1, wz)]
//   Bi(2,z) = i [w Ai(2, w^2 z) - w^2 conj-rot Ai(2, wz)] + sqrt(3) * Ai(2,0)
Ladder bi_ladder_any(cplx z) {
  if (use_series(z)) return detail::ladder_series(Kind::Bi, z);

  const cplx a_arg = z * kOmega;
  const cplx b_arg = z * kOmegaBar;
  const Ladder a = ai_ladder_any(a_arg);
  const Ladder b = ai_ladder_any(b_arg);
  const cplx e6 = std::polar(1.0, M_PI / 6.0);
  const cplx e56 = std::polar(1.0, 5.0 * M_PI / 6.0);
  const cplx i(0.0, 1.0);
  const double bi2_const = kSqrt3.to_double() * kNegAip0.to_double();

  ScaledValue f = scaled_add({e6 * a.f, a.log_scale}, {std::conj(e6) * b.f, b.log_scale});
  ScaledValue df = scaled_add({e56 * a.df, a.log_scale}, {std::conj(e56) * b.df, b.log_scale});
  ScaledValue i1 = scaled_add({-i * a.i1, a.log_scale}, {i * b.i1, b.log_scale});
  ScaledValue i2 = scaled_add({-i * kOmegaBar * a.i2, a.log_scale}, {i * kOmega * b.i2, b.log_scale});
  i2 = scaled_add(i2, {cplx(bi2_const), 0.0});

  double L = std::max(std::max(f.ls, df.ls), std::max(i1.ls, i2.ls));
  auto rebase = [L](ScaledValue v) {
    double d = v.ls - L;
    return d < -745.0 ? cplx(0.0) : v.m * std::exp(d);
  };
  Ladder out;
  out.f = rebase(f);
  out.df = rebase(df);
  out.i1 = rebase(i1);
  out.i2 = rebase(i2);
  out.log_scale = L;
  return out;
}

void check_argument(cplx z) {
  require(std::isfinite(z.real()) && std::isfinite(z.imag()), errc::domain,
          "airy: non-finite argument");
  require(std::abs(z) <= max_argument_radius, errc::range,
          "airy: |z| beyond supported range");
}

}  // namespace

Ladder ladder(Kind kind, cplx z) {
  check_argument(z);
  return kind == Kind::Ai ? ai_ladder_any(z) : bi_ladder_any(z);
}

cplx ai(cplx z) {
  Ladder l = ladder(Kind::Ai, z);
  return l.unscaled(l.f);
}

cplx bi(cplx z) {
  Ladder l = ladder(Kind::Bi, z);
  return l.unscaled(l.f);
}

Pair ai_pair(cplx z) {
  Ladder l = ladder(Kind::Ai, z);
  return {l.unscaled(l.f), l.unscaled(l.df)};
}

Pair bi_pair(cplx z) {
  Ladder l = ladder(Kind::Bi, z);
  return {l.unscaled(l.f), l.unscaled(l.df)};
}

cplx repeated_integral(Kind kind, int k, cplx z) {
  require(k == 1 || k == 2, errc::validation, "airy: repeated integral order must be 1 or 2");
  Ladder l = ladder(kind, z);
  return l.unscaled(k == 1 ? l.i1 : l.i2);
}

cplx tietjens_continued(cplx z) {
  const cplx w = z * std::polar(1.0, -5.0 * M_PI / 6.0);
  const Ladder l = ladder(Kind::Ai, w);
  return l.i2 / (w * l.i1);
}

cplx tietjens(double z) {
  require(z > 0.0, errc::domain, "tietjens: argument must be positive");
  return tietjens_continued(cplx(z, 0.0));
}

}  // namespace shearstab::airy
