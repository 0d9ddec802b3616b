#pragma once

#include <complex>

#include "shearstab/grid.hpp"

namespace shearstab::airy {

enum class Kind { Ai, Bi };

struct Pair {
  cplx value;
  cplx derivative;
};

/// Function, first derivative and the two repeated integrals of one Airy
/// family, in scaled form: true quantity = mantissa * exp(log_scale).
/// The shared scale keeps ratios finite far outside the representable range.
///
/// Normalization of the integrals: the Ai family vanishes at +infinity,
///   i1 = Ai(1,z) = -int_z^inf Ai(t) dt,   i2 = Ai(2,z) = int_z^inf (t-z) Ai(t) dt,
/// the Bi family vanishes at the origin,
///   i1 = Bi(1,z) = int_0^z Bi(t) dt,      i2 = Bi(2,z) = int_0^z (z-t) Bi(t) dt.
struct Ladder {
  cplx i2, i1, f, df;
  double log_scale = 0.0;

  cplx unscaled(cplx mantissa) const;
};

/// Series / asymptotics switch radius; the seam is covered by a dedicated test.
inline constexpr double series_switch_radius = 7.5;
/// Arguments beyond this radius are rejected outright.
inline constexpr double max_argument_radius = 1e4;

cplx ai(cplx z);
cplx bi(cplx z);
Pair ai_pair(cplx z);
Pair bi_pair(cplx z);

/// k-th repeated integral (k = 1 or 2) under the normalization above.
cplx repeated_integral(Kind kind, int k, cplx z);

/// Scaled ladder evaluation; never overflows.
Ladder ladder(Kind kind, cplx z);

/// Tietjens function of a real positive argument,
///   Ti(z) = Ai(2, w) / (w * Ai(1, w)),  w = z * exp(-5 i pi / 6).
cplx tietjens(double z);
/// Analytic continuation of the same expression to complex z (used by the
/// dispersion solver, where the argument leaves the positive real axis).
cplx tietjens_continued(cplx z);

namespace detail {
/// Series-only and asymptotic-only evaluations, exposed for the seam test.
Ladder ladder_series(Kind kind, cplx z);
Ladder ladder_asymptotic_ai(cplx z);
}  // namespace detail

}  // namespace shearstab::airy
