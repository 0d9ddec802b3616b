#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "shearstab/grid.hpp"
#include "shearstab/orr_sommerfeld.hpp"
#include "shearstab/profile.hpp"

namespace shearstab::cascade {

/// Exact rational p/q (normalized, q > 0).
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Rational() = default;
  Rational(std::int64_t n, std::int64_t d = 1);
  Rational operator+(Rational o) const;
  Rational operator-(Rational o) const;
  Rational operator*(Rational o) const;
  bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
  bool operator<(const Rational& o) const;
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  std::string str() const;
};

/// Power of nu with a symbolic prefactor tag and a log power; exponent
/// arithmetic is exact.
struct ScaleExpr {
  std::string prefactor_tag = "1";
  Rational exponent;  // power of nu
  int log_power = 0;  // power of log(1/nu)

  /// exponent-only numeric value at the given nu (prefactors are symbolic)
  double eval(double nu) const;
  bool same_exponent(const ScaleExpr& o) const {
    return exponent == o.exponent && log_power == o.log_power;
  }
};

ScaleExpr scale_mul(const ScaleExpr& a, const ScaleExpr& b);
ScaleExpr scale_div(const ScaleExpr& a, const ScaleExpr& b);
ScaleExpr scale_pow(const ScaleExpr& a, Rational r);

/// Viscosity exponent after the self-similar rescaling (T,X,Y) = nu^{-a}(t,x,y).
ScaleExpr rescale_viscosity(Rational a);

ScaleExpr reynolds_number(const ScaleExpr& length, const ScaleExpr& velocity,
                          const ScaleExpr& viscosity);

/// Boundary-layer corrector phi_1^bl of the first sublayer:
///   phi(Y) = -dphi0 * nu1^{1/2} mu^{-1} (1 - e^{-nu1^{-1/2} mu Y}), mu = sqrt(-c1).
GridFunction sublayer_corrector(cplx dphi0, cplx c1, double nu1, const Grid& grid);

/// Frozen-X second-layer background U_1(0, Y2) as a ShearProfile.
ShearProfile second_layer_profile(cplx dphi0, cplx c1);

/// Group velocity d(alpha c)/d alpha from a scan row neighborhood.
cplx group_velocity(const os::DispersionScan& scan, double alpha0);

enum class CubicSign { negative, zero, positive };
/// Saturation amplitude of the bifurcation equation by the sign of Re A.
ScaleExpr saturation_amplitude(CubicSign sign);

enum class Scenario { euler_unstable, euler_stable };

struct LayerReport {
  struct Row {
    std::string quantity;  // vertical | horizontal | time | reynolds | special
    std::string label;
    ScaleExpr scale;
    double value_at_nu = 0.0;
    std::string anchor;  // provenance slug
  };
  Scenario scenario;
  double nu = 0.0;
  std::vector<Row> rows;
};

/// Scale ladder of the instability cascade; every exponent is composed from
/// the algebra operations above.
LayerReport cascade_report(double nu, Scenario scenario);

}  // namespace shearstab::cascade
