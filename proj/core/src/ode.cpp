#include "shearstab/ode.hpp"

namespace shearstab {

std::vector<cplx> rayleigh_taylor_coeffs(const std::vector<cplx>& u_taylor, cplx c, double alpha,
                                         cplx psi0, cplx dpsi0, int nterms) {
  const int nu = static_cast<int>(u_taylor.size());
  require(nterms >= 2 && nu >= 2, errc::validation, "taylor solution: insufficient data");
  const cplx a0 = u_taylor[0] - c;
  require(std::abs(a0) > 1e-14, errc::domain, "taylor solution: expansion point is critical");

  // A_m = coefficients of (U - c); B_m = coefficients of U''.
  auto A = [&](int m) -> cplx { return m == 0 ? a0 : (m < nu ? u_taylor[m] : cplx(0.0)); };
  auto B = [&](int m) -> cplx {
    return (m + 2 < nu) ? u_taylor[m + 2] * static_cast<double>((m + 1) * (m + 2)) : cplx(0.0);
  };

  std::vector<cplx> psi(nterms, 0.0), D(nterms, 0.0);
  psi[0] = psi0;
  if (nterms > 1) psi[1] = dpsi0;
  const double a2 = alpha * alpha;
  for (int k = 0; k + 2 < nterms; ++k) {
    cplx rhs = 0.0;
    for (int m = 0; m <= k; ++m) rhs += B(m) * psi[k - m];
    for (int m = 1; m <= k; ++m) rhs -= A(m) * D[k - m];
    D[k] = rhs / a0;
    psi[k + 2] = (D[k] + a2 * psi[k]) / static_cast<double>((k + 1) * (k + 2));
  }
  return psi;
}

}  // namespace shearstab
