#pragma once

#include <cmath>
#include <complex>

// Double-double arithmetic (Dekker/Knuth error-free transformations).
// Used only to sum the Airy Maclaurin series, where the terms reach
// e^{2*zeta} while the result is O(e^{-zeta}); plain doubles lose up to
// twelve digits to cancellation inside the series switch radius.

namespace shearstab::detail {

struct dd {
  double hi = 0.0, lo = 0.0;

  constexpr dd() = default;
  constexpr dd(double h) : hi(h), lo(0.0) {}
  constexpr dd(double h, double l) : hi(h), lo(l) {}

  double to_double() const { return hi + lo; }
};

inline dd two_sum(double a, double b) {
  double s = a + b;
  double bb = s - a;
  double err = (a - (s - bb)) + (b - bb);
  return {s, err};
}

inline dd quick_two_sum(double a, double b) {
  double s = a + b;
  return {s, b - (s - a)};
}

inline dd two_prod(double a, double b) {
  double p = a * b;
  return {p, std::fma(a, b, -p)};
}

inline dd operator+(dd a, dd b) {
  dd s = two_sum(a.hi, b.hi);
  s.lo += a.lo + b.lo;
  return quick_two_sum(s.hi, s.lo);
}

inline dd operator-(dd a) { return {-a.hi, -a.lo}; }
inline dd operator-(dd a, dd b) { return a + (-b); }

inline dd operator*(dd a, dd b) {
  dd p = two_prod(a.hi, b.hi);
  p.lo += a.hi * b.lo + a.lo * b.hi;
  return quick_two_sum(p.hi, p.lo);
}

inline dd operator*(dd a, double b) { return a * dd(b); }

inline dd operator/(dd a, double b) {
  double q1 = a.hi / b;
  dd r = a - two_prod(q1, b);
  double q2 = (r.hi + r.lo) / b;
  return quick_two_sum(q1, q2);
}

/// Complex number with double-double components.
struct ddc {
  dd re, im;

  ddc() = default;
  ddc(dd r, dd i) : re(r), im(i) {}
  ddc(std::complex<double> z) : re(z.real()), im(z.imag()) {}

  std::complex<double> to_cplx() const { return {re.to_double(), im.to_double()}; }
};

inline ddc operator+(ddc a, ddc b) { return {a.re + b.re, a.im + b.im}; }
inline ddc operator-(ddc a, ddc b) { return {a.re - b.re, a.im - b.im}; }
inline ddc operator*(ddc a, ddc b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
inline ddc operator*(ddc a, dd s) { return {a.re * s, a.im * s}; }
inline ddc operator/(ddc a, double b) { return {a.re / b, a.im / b}; }

inline double abs2(ddc a) {
  double r = a.re.to_double(), i = a.im.to_double();
  return r * r + i * i;
}

}  // namespace shearstab::detail
