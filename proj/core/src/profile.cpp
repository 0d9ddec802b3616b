#include "shearstab/profile.hpp"

#include <cmath>
#include <limits>

#include "shearstab/errors.hpp"

namespace shearstab {

struct ShearProfile::Impl {
  virtual ~Impl() = default;
  virtual cplx value(cplx y) const = 0;
  virtual cplx d1(cplx y) const = 0;
  virtual cplx d2(cplx y) const = 0;
  virtual cplx d3(cplx y) const = 0;
  virtual cplx d4(cplx y) const = 0;
  virtual std::vector<cplx> taylor(cplx center, int n) const = 0;
  virtual double u_plus() const = 0;
  virtual bool monotone() const = 0;
  virtual bool concave() const = 0;
  virtual double width() const = 0;
  virtual const std::string& name() const = 0;
};

namespace {

// U(y) = scale * tanh(y - shift) + offset. Derivatives of tanh are
// polynomials in T = tanh; Q_m = P_m / m! is built by differentiating and
// multiplying by (1 - T^2).
struct TanhFamily final : ShearProfile::Impl {
  double scale, shift, offset;
  bool concave_flag;
  std::string label;

  TanhFamily(double a, double s, double b, bool conc, std::string nm)
      : scale(a), shift(s), offset(b), concave_flag(conc), label(std::move(nm)) {}

  cplx value(cplx y) const override { return scale * std::tanh(y - shift) + offset; }
  cplx d1(cplx y) const override {
    cplx t = std::tanh(y - shift);
    return scale * (1.0 - t * t);
  }
  cplx d2(cplx y) const override {
    cplx t = std::tanh(y - shift);
    return scale * (-2.0 * t * (1.0 - t * t));
  }
  cplx d3(cplx y) const override {
    cplx t = std::tanh(y - shift);
    cplx t2 = t * t;
    return scale * (-2.0 + 8.0 * t2 - 6.0 * t2 * t2);
  }
  cplx d4(cplx y) const override {
    cplx t = std::tanh(y - shift);
    cplx t2 = t * t;
    return scale * t * (16.0 - 40.0 * t2 + 24.0 * t2 * t2);
  }
  std::vector<cplx> taylor(cplx center, int n) const override {
    std::vector<cplx> out(n);
    cplx t0 = std::tanh(center - shift);
    // Q_0 = T (so that scale*Q_0(T)+offset = U); Q_{m+1} = Q_m'(T)(1-T^2)/(m+1).
    std::vector<double> q = {0.0, 1.0};
    for (int m = 0; m < n; ++m) {
      cplx val = 0.0;
      for (int j = static_cast<int>(q.size()) - 1; j >= 0; --j) val = val * t0 + q[j];
      out[m] = scale * val;
      if (m == 0) out[m] += offset;
      // differentiate, multiply by (1 - T^2), divide by (m+1)
      std::vector<double> dq(q.size() >= 2 ? q.size() - 1 : 1, 0.0);
      for (size_t j = 1; j < q.size(); ++j) dq[j - 1] = q[j] * static_cast<double>(j);
      std::vector<double> next(dq.size() + 2, 0.0);
      for (size_t j = 0; j < dq.size(); ++j) {
        next[j] += dq[j];
        next[j + 2] -= dq[j];
      }
      for (double& cj : next) cj /= (m + 1.0);
      q = std::move(next);
    }
    return out;
  }
  double u_plus() const override { return scale + offset; }
  bool monotone() const override { return scale > 0.0; }
  bool concave() const override { return concave_flag; }
  double width() const override { return M_PI / 2.0 - 0.05; }
  const std::string& name() const override { return label; }
};

struct ExpLayer final : ShearProfile::Impl {
  double scale;
  std::string label = "exp_layer";
  explicit ExpLayer(double a) : scale(a) {}

  cplx value(cplx y) const override { return scale * (1.0 - std::exp(-y)); }
  cplx d1(cplx y) const override { return scale * std::exp(-y); }
  cplx d2(cplx y) const override { return -scale * std::exp(-y); }
  cplx d3(cplx y) const override { return scale * std::exp(-y); }
  cplx d4(cplx y) const override { return -scale * std::exp(-y); }
  std::vector<cplx> taylor(cplx center, int n) const override {
    std::vector<cplx> out(n);
    cplx e = std::exp(-center);
    out[0] = scale * (1.0 - e);
    double fact = 1.0;
    double sign = 1.0;
    for (int m = 1; m < n; ++m) {
      fact *= m;
      out[m] = scale * sign * e / fact;
      sign = -sign;
    }
    return out;
  }
  double u_plus() const override { return scale; }
  bool monotone() const override { return scale > 0.0; }
  bool concave() const override { return scale > 0.0; }
  double width() const override { return 1e9; }
  const std::string& name() const override { return label; }
};

struct LinearProfile final : ShearProfile::Impl {
  double slope;
  std::string label = "linear";
  explicit LinearProfile(double s) : slope(s) {}
  cplx value(cplx y) const override { return slope * y; }
  cplx d1(cplx) const override { return slope; }
  cplx d2(cplx) const override { return 0.0; }
  cplx d3(cplx) const override { return 0.0; }
  cplx d4(cplx) const override { return 0.0; }
  std::vector<cplx> taylor(cplx center, int n) const override {
    std::vector<cplx> out(n, 0.0);
    out[0] = slope * center;
    if (n > 1) out[1] = slope;
    return out;
  }
  double u_plus() const override { return std::numeric_limits<double>::quiet_NaN(); }
  bool monotone() const override { return slope > 0.0; }
  bool concave() const override { return false; }
  double width() const override { return 1e9; }
  const std::string& name() const override { return label; }
};

struct UniformProfile final : ShearProfile::Impl {
  double u;
  std::string label = "uniform";
  explicit UniformProfile(double up) : u(up) {}
  cplx value(cplx) const override { return u; }
  cplx d1(cplx) const override { return 0.0; }
  cplx d2(cplx) const override { return 0.0; }
  cplx d3(cplx) const override { return 0.0; }
  cplx d4(cplx) const override { return 0.0; }
  std::vector<cplx> taylor(cplx, int n) const override {
    std::vector<cplx> out(n, 0.0);
    out[0] = u;
    return out;
  }
  double u_plus() const override { return u; }
  bool monotone() const override { return false; }
  bool concave() const override { return false; }
  double width() const override { return 1e9; }
  const std::string& name() const override { return label; }
};

struct TwoExp final : ShearProfile::Impl {
  cplx amp, mu;
  bool monotone_flag = true, concave_flag = true;
  std::string label = "second_layer";

  TwoExp(cplx d, cplx m) : amp(d), mu(m) {
    require(mu.real() > 0.0, errc::branch, "second layer profile: Re mu must be positive");
    // flags from a dense sample with a relative floor (the complex pair has an
    // exponentially small oscillating tail)
    double d1max = 0.0, d2max = 0.0;
    std::vector<double> d1v, d2v;
    for (int i = 0; i <= 4000; ++i) {
      double yy = 40.0 * i / 4000.0;
      d1v.push_back(d1(yy).real());
      d2v.push_back(d2(yy).real());
      d1max = std::max(d1max, std::abs(d1v.back()));
      d2max = std::max(d2max, std::abs(d2v.back()));
    }
    for (double v : d1v)
      if (v < -1e-10 * d1max) monotone_flag = false;
    for (double v : d2v)
      if (v > 1e-10 * d2max) concave_flag = false;
  }

  cplx value(cplx y) const override {
    return -amp * (1.0 - std::exp(-mu * y)) - std::conj(amp) * (1.0 - std::exp(-std::conj(mu) * y));
  }
  cplx d1(cplx y) const override {
    return -amp * mu * std::exp(-mu * y) - std::conj(amp * mu) * std::exp(-std::conj(mu) * y);
  }
  cplx d2(cplx y) const override {
    return amp * mu * mu * std::exp(-mu * y) +
           std::conj(amp * mu * mu) * std::exp(-std::conj(mu) * y);
  }
  cplx d3(cplx y) const override {
    cplx m3 = mu * mu * mu;
    return -amp * m3 * std::exp(-mu * y) - std::conj(amp * m3) * std::exp(-std::conj(mu) * y);
  }
  cplx d4(cplx y) const override {
    cplx m4 = mu * mu * mu * mu;
    return amp * m4 * std::exp(-mu * y) + std::conj(amp * m4) * std::exp(-std::conj(mu) * y);
  }
  std::vector<cplx> taylor(cplx center, int n) const override {
    std::vector<cplx> out(n);
    out[0] = value(center);
    cplx ea = std::exp(-mu * center), eb = std::exp(-std::conj(mu) * center);
    cplx pa = 1.0, pb = 1.0;
    double fact = 1.0;
    for (int m = 1; m < n; ++m) {
      pa *= -mu;
      pb *= -std::conj(mu);
      fact *= m;
      out[m] = (amp * pa * ea + std::conj(amp) * pb * eb) / fact;
    }
    return out;
  }
  double u_plus() const override { return -2.0 * amp.real(); }
  bool monotone() const override { return monotone_flag; }
  bool concave() const override { return concave_flag; }
  double width() const override { return 1e9; }
  const std::string& name() const override { return label; }
};

}  // namespace

ShearProfile::ShearProfile(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

cplx ShearProfile::value(cplx y) const { return impl_->value(y); }
cplx ShearProfile::d1(cplx y) const { return impl_->d1(y); }
cplx ShearProfile::d2(cplx y) const { return impl_->d2(y); }
cplx ShearProfile::d3(cplx y) const { return impl_->d3(y); }
cplx ShearProfile::d4(cplx y) const { return impl_->d4(y); }
std::vector<cplx> ShearProfile::taylor(cplx center, int n) const { return impl_->taylor(center, n); }
double ShearProfile::u_plus() const { return impl_->u_plus(); }
bool ShearProfile::monotone() const { return impl_->monotone(); }
bool ShearProfile::concave() const { return impl_->concave(); }
double ShearProfile::analyticity_width() const { return impl_->width(); }
const std::string& ShearProfile::name() const { return impl_->name(); }

ShearProfile ShearProfile::builtin(const std::string& name, double u_plus) {
  require(u_plus != 0.0, errc::validation, "profile: u_plus must be nonzero");
  if (name == "tanh")
    return ShearProfile(std::make_shared<TanhFamily>(u_plus, 0.0, 0.0, u_plus > 0, "tanh"));
  if (name == "exp_layer") return ShearProfile(std::make_shared<ExpLayer>(u_plus));
  fail(errc::validation, "profile: unknown name '" + name + "'");
}

ShearProfile ShearProfile::mixing_layer() {
  return ShearProfile(
      std::make_shared<TanhFamily>(1.0, 1.0, std::tanh(1.0), false, "mixing_layer"));
}

ShearProfile ShearProfile::linear(double slope) {
  return ShearProfile(std::make_shared<LinearProfile>(slope));
}

ShearProfile ShearProfile::uniform(double u_plus) {
  return ShearProfile(std::make_shared<UniformProfile>(u_plus));
}

ShearProfile ShearProfile::two_exponential(cplx amp, cplx mu) {
  return ShearProfile(std::make_shared<TwoExp>(amp, mu));
}

HeatState heat_evolve(const HeatState& state, double dt, int steps, double u_plus,
                      bool explicit_scheme) {
  require(dt > 0.0 && steps >= 0, errc::validation, "heat: dt > 0 and steps >= 0 required");
  const size_t n = state.grid.size();
  require(n >= 3 && state.values.size() == n, errc::validation, "heat: malformed state");
  const double h = state.grid[1] - state.grid[0];
  for (size_t i = 1; i + 1 < n; ++i)
    require(std::abs((state.grid[i + 1] - state.grid[i]) - h) < 1e-10 * h, errc::validation,
            "heat: grid must be uniform");

  HeatState out = state;
  out.values.front() = 0.0;
  out.values.back() = u_plus;
  const double r = dt / (h * h);

  if (explicit_scheme) {
    require(r <= 0.5, errc::validation, "heat: explicit scheme violates the CFL bound");
    std::vector<double> next(n);
    for (int s = 0; s < steps; ++s) {
      next.front() = 0.0;
      next.back() = u_plus;
      for (size_t i = 1; i + 1 < n; ++i)
        next[i] = out.values[i] + r * (out.values[i + 1] - 2 * out.values[i] + out.values[i - 1]);
      out.values.swap(next);
    }
  } else {
    // Crank-Nicolson with Dirichlet ends; Thomas solve per step.
    const size_t m = n - 2;
    std::vector<double> cp(m), rhs(m);
    const double a = -r / 2.0, b = 1.0 + r, cdiag = -r / 2.0;
    for (int s = 0; s < steps; ++s) {
      for (size_t i = 0; i < m; ++i) {
        const double um = out.values[i], uc = out.values[i + 1], up = out.values[i + 2];
        rhs[i] = uc + r / 2.0 * (up - 2 * uc + um);
      }
      rhs[0] += r / 2.0 * 0.0;
      rhs[m - 1] += r / 2.0 * u_plus;
      cp[0] = cdiag / b;
      rhs[0] /= b;
      for (size_t i = 1; i < m; ++i) {
        const double denom = b - a * cp[i - 1];
        cp[i] = cdiag / denom;
        rhs[i] = (rhs[i] - a * rhs[i - 1]) / denom;
      }
      for (size_t i = m - 1; i-- > 0;) rhs[i] -= cp[i] * rhs[i + 1];
      for (size_t i = 0; i < m; ++i) out.values[i + 1] = rhs[i];
      out.values.front() = 0.0;
      out.values.back() = u_plus;
    }
  }
  out.time = state.time + dt * steps;
  return out;
}

cplx critical_point(const ShearProfile& profile, cplx c) {
  require(std::abs(c.imag()) < profile.analyticity_width(), errc::domain,
          "critical point: Im c outside the analyticity strip");

  // real seed: bisect U(y) = Re c on [0, 50]
  const double target = c.real();
  double lo = 0.0, hi = 50.0;
  double flo = profile.value(lo).real() - target;
  double fhi = profile.value(hi).real() - target;
  double seed;
  if (flo == 0.0) {
    seed = lo;
  } else if (flo * fhi > 0.0) {
    require(std::abs(flo) < 1e-3 || std::abs(fhi) < 1e-3, errc::domain,
            "critical point: Re c outside the profile range");
    seed = std::abs(flo) < std::abs(fhi) ? lo : hi;
  } else {
    for (int it = 0; it < 200; ++it) {
      double mid = 0.5 * (lo + hi);
      double fm = profile.value(mid).real() - target;
      (fm * flo <= 0.0 ? hi : lo) = mid;
      if (fm * flo <= 0.0)
        fhi = fm;
      else
        flo = fm;
      if (hi - lo < 1e-12) break;
    }
    seed = 0.5 * (lo + hi);
  }

  cplx y = seed;
  for (int it = 0; it < 50; ++it) {
    cplx f = profile.value(y) - c;
    if (std::abs(f) <= 1e-13 * std::max(1.0, std::abs(c))) {
      require(std::abs(y.imag()) < profile.analyticity_width(), errc::domain,
              "critical point: y_c outside the analyticity strip");
      return y;
    }
    cplx df = profile.d1(y);
    require(std::abs(df) > 1e-14, errc::root_not_found, "critical point: derivative vanished");
    y -= f / df;
  }
  fail(errc::root_not_found, "critical point: Newton did not converge in 50 iterations");
}

}  // namespace shearstab
