#include "emg/fimfem.hpp"

#include <numbers>
#include <string>

namespace emg::fimfem {

namespace {

constexpr double kNmPerMm = 1e6;

void require_positive(double v, const char* name) {
  if (!(v > 0.0)) {
    throw Error(ErrorKind::NonPositiveInput,
                std::string(name) + " must be > 0 (got " + std::to_string(v) + ")");
  }
}

}  // namespace

double record_scale(double hole_true_mm, double hole_record_mm) {
  require_positive(hole_true_mm, "true hole diameter");
  require_positive(hole_record_mm, "record hole diameter");
  return hole_record_mm / hole_true_mm;
}

double linear_magnification(const FimMeasurements& fim) {
  require_positive(fim.spot_separation_record_mm, "spot separation");
  require_positive(fim.nn_spacing_nm, "nearest-neighbour spacing");
  const double scale = record_scale(fim.hole_true_diameter_mm, fim.hole_record_diameter_mm);
  const double separation_screen_nm = fim.spot_separation_record_mm / scale * kNmPerMm;
  return separation_screen_nm / fim.nn_spacing_nm;
}

SourceGeometry source_geometry(const FemMeasurements& fem, double record_scale,
                               double m_lin) {
  require_positive(fem.spot_radius_mm, "spot radius");
  require_positive(record_scale, "record scale");
  require_positive(m_lin, "linear magnification");
  if (!(fem.broadening_correction >= 1.0)) {
    throw Error(ErrorKind::NonPositiveInput,
                "broadening correction must be >= 1 (got " +
                    std::to_string(fem.broadening_correction) + ")");
  }
  SourceGeometry g;
  g.m_lin = m_lin;
  g.M_area = m_lin * m_lin;
  g.screen_radius_mm = fem.level == RadiusLevel::Record
                           ? fem.spot_radius_mm / record_scale
                           : fem.spot_radius_mm;
  g.corrected_radius_mm = g.screen_radius_mm / fem.broadening_correction;
  g.rho_S_nm = g.corrected_radius_mm * kNmPerMm / m_lin;
  g.A_S_nm2 = std::numbers::pi * g.rho_S_nm * g.rho_S_nm;
  return g;
}

AreaComparison compare_areas(double A_S_nm2, double A_f_ET_nm2, double A_f_SN_nm2) {
  require_positive(A_S_nm2, "A_S");
  require_positive(A_f_ET_nm2, "A_f_ET");
  require_positive(A_f_SN_nm2, "A_f_SN");
  return AreaComparison{A_f_ET_nm2 / A_S_nm2, A_S_nm2 / A_f_SN_nm2};
}

}  // namespace emg::fimfem
