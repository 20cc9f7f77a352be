#pragma once

#include "emg/errors.hpp"

namespace emg::fimfem {

/// Ion-microscope image-record measurements. The channel-plate hole of known
/// physical diameter calibrates the record-to-screen scale; an atom-spot
/// separation of known crystallographic spacing calibrates the magnification.
struct FimMeasurements {
  double hole_true_diameter_mm;
  double hole_record_diameter_mm;
  double spot_separation_record_mm;
  double nn_spacing_nm;  ///< nearest-neighbour separation in the imaged net plane
};

/// Whether a quoted FEM spot radius is a record-level or a screen-level
/// distance (the record scale has already been divided out of the latter).
enum class RadiusLevel { Record, Screen };

struct FemMeasurements {
  double spot_radius_mm;
  RadiusLevel level = RadiusLevel::Record;
  double broadening_correction = 1.2;  ///< divisor, >= 1
};

struct SourceGeometry {
  double m_lin;    ///< linear magnification
  double M_area;   ///< m_lin^2
  double screen_radius_mm;
  double corrected_radius_mm;  ///< screen radius / broadening correction
  double rho_S_nm;             ///< source radius on the emitter
  double A_S_nm2;              ///< pi * rho_S^2
};

/// Divisor converting record distances to screen distances.
double record_scale(double hole_true_mm, double hole_record_mm);

/// (spot separation on screen) / (nearest-neighbour spacing), mm and nm
/// reconciled.
double linear_magnification(const FimMeasurements& fim);

SourceGeometry source_geometry(const FemMeasurements& fem, double record_scale,
                               double m_lin);

struct AreaComparison {
  double ratio_ET_over_S;   ///< A_f_ET / A_S
  double ratio_S_over_SN;   ///< A_S / A_f_SN
};

AreaComparison compare_areas(double A_S_nm2, double A_f_ET_nm2, double A_f_SN_nm2);

}  // namespace emg::fimfem
