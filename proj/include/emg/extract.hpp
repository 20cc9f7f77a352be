#pragma once

#include <optional>
#include <string>
#include <vector>

#include "emg/fnfit.hpp"
#include "emg/smf.hpp"

namespace emg::extract {

/// How I_m(V_t) is obtained for the current-density and brightness outputs.
/// Auto tries, in order: an exact data point at V_t, log-linear interpolation
/// of the measured data in FN coordinates, then the fitted line itself.
/// MeasuredOnly drops the fitted-line fallback and fails with MissingCurrent.
enum class CurrentPolicy { Auto, MeasuredOnly };

/// Fitting-voltage grid: explicit values, or auto_count points evenly spaced
/// across [V_min, V_max] (always including V_mid).
struct VtGrid {
  int auto_count = 21;
  std::vector<double> explicit_values;
};

struct ExtractionConfig {
  double phi = 4.5;                ///< eV
  double T = 300.0;                ///< K, for temperature-aware reporting
  double beta_start = 1.0e-3;      ///< nm^-1
  double convergence_tol = 1.0e-4;
  bool absolute_tol = false;       ///< interpret tol as nm^-1 instead of relative
  int max_iterations = 100;
  smf::Variant variant = smf::Variant::HighPrecision;
  VtGrid vt_grid;
  std::optional<double> A_M_nm2;   ///< macroscopic area; enables alpha_f
  CurrentPolicy current_policy = CurrentPolicy::Auto;
  std::optional<double> current_at_vmid_A;  ///< measured current override at V_mid
  bool use_fixed_t_decay_width = false;     ///< t = 1.05 shortcut in the decay width
  double lambda_pole_guard = 0.9;
};

/// Converged state of the fixed-point loop at one fitting voltage.
struct FittingPoint {
  double V_t;     ///< V
  double beta;    ///< nm^-1
  double F_t;     ///< beta * V_t, V/nm
  double f_t;     ///< scaled field at F_t
  double s_t;     ///< slope correction factor
  double r_t;     ///< intercept correction factor
  double rt_st2;  ///< r_t * s_t^2
  int iterations;
  bool converged;
};

struct ExtractionResult {
  FittingPoint point;
  double A_f_SN_nm2;
  double A_f_ET_nm2;
  double Lambda_SN_nm2_per_A;  ///< area extraction parameter, SN barrier
  double Lambda_ET_nm2_per_A;  ///< area extraction parameter, ET barrier
  std::optional<double> alpha_f_SN;  ///< requires A_M
  double d_F_SN_eV;
  double J_extr_A_per_nm2;  ///< I_m(V_t) / A_f_SN
  double B_pract;           ///< A m^-2 sr^-1 eV^-1
  std::vector<std::string> warnings;
};

/// Fixed-point iteration for the self-consistent (beta, f_t, s_t) at a chosen
/// fitting voltage. Throws NonConvergence past max_iterations and
/// ScaledFieldOutOfRange if f_t leaves (0,1] at any step.
FittingPoint iterate_beta(double V_t, double S_expt, double phi,
                          const ExtractionConfig& config);

/// Full single-voltage extraction: runs iterate_beta, then areas, decay
/// width, extracted current density, brightness and optional area efficiency.
/// `data` (optional) feeds the measured-current policy.
ExtractionResult extract_at(const fnfit::FNFitResult& fit, double V_t,
                            const ExtractionConfig& config,
                            const fnfit::IVDataset* data = nullptr);

/// One sweep entry per grid voltage; extraction failures are collected per
/// point instead of aborting the sweep.
struct SweepEntry {
  double V_t;
  std::optional<ExtractionResult> result;
  std::string error;  ///< non-empty when result is absent
};

std::vector<SweepEntry> sweep(const fnfit::FNFitResult& fit,
                              const ExtractionConfig& config,
                              const fnfit::IVDataset* data = nullptr);

/// Materialize the fitting-voltage grid for a fit (ascending, with V_mid).
std::vector<double> build_vt_grid(const fnfit::FNFitResult& fit, const VtGrid& grid);

/// Bound on the extraction error from the choice of fitting voltage: compares
/// the formal area at V_mid with the one at V_max.
struct AreaErrorBound {
  double A_at_Vmid_nm2;
  double A_at_Vmax_nm2;
  double relative_bound;
};

AreaErrorBound area_error_bound(const fnfit::FNFitResult& fit,
                                const ExtractionConfig& config);

/// alpha_f = A_f_SN / A_M, both in nm^2.
double formal_area_efficiency(double A_f_SN_nm2, double A_M_nm2);

/// I_m(V_t) under the configured policy.
double current_at(const fnfit::FNFitResult& fit, const fnfit::IVDataset* data,
                  double V_t, const ExtractionConfig& config);

/// Forward model: synthetic measured currents from known (A_f_SN, beta, phi)
/// via the kernel current density. This is the round-trip oracle for the
/// whole extraction chain.
fnfit::IVDataset synthesize_emg_iv(double A_f_SN_nm2, double beta, double phi,
                                   const std::vector<double>& voltages,
                                   smf::Variant variant = smf::Variant::HighPrecision);

}  // namespace emg::extract
