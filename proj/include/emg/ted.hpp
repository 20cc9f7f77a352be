#pragma once

#include <optional>
#include <vector>

#include "emg/errors.hpp"
#include "emg/smf.hpp"

namespace emg::ted {

/// Request for a total-energy distribution at (phi, T, F). Energies are
/// relative to the Fermi level. window_* override the automatic window; the
/// window must contain 0. samples is a minimum (>= 64); the sampler refines
/// it until the quadrature resolves the thermal edge.
struct TedSpec {
  double phi;  ///< eV
  double T;    ///< K
  double F;    ///< V/nm
  smf::Variant variant = smf::Variant::HighPrecision;
  std::optional<double> window_lo_eV;
  std::optional<double> window_hi_eV;
  int samples = 2001;
  double pole_guard = 0.9;
};

struct TedSample {
  double energy_eV;
  double density_per_eV;
};

/// Normalized total-energy distribution with its summary numbers.
struct TedCurve {
  std::vector<TedSample> samples;
  double d_F_eV;
  double p;  ///< Swanson-Bell parameter
  double fwhm_eV;
  double peak_energy_eV;
  double normalization_residual;
};

/// Incident normal-energy distribution, A m^-2 eV^-1. The T = 0 limit is
/// handled directly: -z_S*eps for eps < 0, 0 otherwise.
double ined(double T, double eps_n);

TedCurve ted_curve(const TedSpec& spec);

/// Full width at half maximum read off the sampled curve (linear
/// interpolation at the crossings). Throws MultiPeak if the samples cross
/// the half-maximum level more than twice.
double fwhm(const TedCurve& curve);

/// Practical brightness 1.44*(I_m/A_f)/(pi*d_F), presented per m^2
/// (A m^-2 sr^-1 eV^-1). Inputs: A, nm^2, eV.
double practical_brightness(double I_m_A, double A_f_SN_nm2, double d_F_eV);

}  // namespace emg::ted
