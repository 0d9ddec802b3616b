#pragma once

#include <complex>
#include <vector>

#include "shearstab/errors.hpp"

namespace shearstab {

using cplx = std::complex<double>;

/// Uniform grid on [0, ymax] with n+1 nodes (node i at i*dy).
struct Grid {
  double ymax = 30.0;
  int n = 2048;

  static Grid uniform(double ymax, int n) {
    require(ymax > 0 && n >= 2, errc::validation, "grid: ymax > 0 and n >= 2 required");
    return Grid{ymax, n};
  }
  double dy() const { return ymax / n; }
  double y(int i) const { return ymax * static_cast<double>(i) / n; }
  int size() const { return n + 1; }
  bool operator==(const Grid& o) const { return ymax == o.ymax && n == o.n; }
};

/// Complex-valued samples on a Grid.
struct GridFunction {
  Grid grid;
  std::vector<cplx> values;

  GridFunction() = default;
  explicit GridFunction(const Grid& g) : grid(g), values(g.size(), cplx(0.0)) {}
  GridFunction(const Grid& g, std::vector<cplx> v) : grid(g), values(std::move(v)) {
    require(static_cast<int>(values.size()) == g.size(), errc::validation,
            "grid function: value count does not match grid");
  }

  int size() const { return grid.size(); }
  cplx& operator[](int i) { return values[i]; }
  const cplx& operator[](int i) const { return values[i]; }

  double max_abs() const {
    double m = 0.0;
    for (const auto& v : values) m = std::max(m, std::abs(v));
    return m;
  }
};

/// First derivative by central differences (one-sided at the ends).
inline GridFunction first_derivative(const GridFunction& f) {
  const double h = f.grid.dy();
  const int n = f.size();
  GridFunction out(f.grid);
  for (int i = 1; i + 1 < n; ++i) out[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
  out[0] = (-1.5 * f[0] + 2.0 * f[1] - 0.5 * f[2]) / h;
  out[n - 1] = (1.5 * f[n - 1] - 2.0 * f[n - 2] + 0.5 * f[n - 3]) / h;
  return out;
}

/// Second derivative by central differences (one-sided at the ends).
inline GridFunction second_derivative(const GridFunction& f) {
  const double h2 = f.grid.dy() * f.grid.dy();
  const int n = f.size();
  GridFunction out(f.grid);
  for (int i = 1; i + 1 < n; ++i) out[i] = (f[i + 1] - 2.0 * f[i] + f[i - 1]) / h2;
  out[0] = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) / h2;
  out[n - 1] = (2.0 * f[n - 1] - 5.0 * f[n - 2] + 4.0 * f[n - 3] - f[n - 4]) / h2;
  return out;
}

}  // namespace shearstab
