#pragma once

#include <string>
#include <vector>

#include "shearstab/cascade.hpp"
#include "shearstab/grid.hpp"
#include "shearstab/orr_sommerfeld.hpp"
#include "shearstab/profile.hpp"
#include "shearstab/semigroup.hpp"

namespace shearstab::io {

/// FNV-1a hash of a string, hex-encoded (stamped into output headers).
std::string fnv1a_hex(const std::string& s);

/// "# shearstab v<version> config=<hash>" header line.
std::string header_comment(const std::string& config_hash);

void write_gridfunction_csv(const std::string& path, const GridFunction& f,
                            const std::string& header);
void write_heatstate_csv(const std::string& path, const HeatState& st, const std::string& header);
HeatState read_heatstate_csv(const std::string& path);

void write_dispersion_csv(const std::string& path, const os::DispersionScan& scan,
                          const std::string& header);

struct SpectrumRecord {
  double alpha;
  cplx c;
  double residual;
};
void write_spectrum_json(const std::string& path, const std::vector<SpectrumRecord>& records,
                         const std::string& config_hash);

struct TrajectoryRow {
  double t, norm_psi_inf, norm_dpsi_inf, norm_omega_inf;
};
void write_trajectory_csv(const std::string& path, const std::vector<TrajectoryRow>& rows,
                          const std::string& header);

void write_layer_report_csv(const std::string& path, const cascade::LayerReport& rep,
                            const std::string& header);
std::string layer_report_text(const cascade::LayerReport& rep);

/// Minimal SVG line plot (axes + polyline per series).
void write_svg_plot(const std::string& path, const std::vector<double>& x,
                    const std::vector<std::vector<double>>& series,
                    const std::vector<std::string>& labels, const std::string& title);

}  // namespace shearstab::io
