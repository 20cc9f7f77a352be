#include "emg/extract.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "emg/constants.hpp"
#include "emg/emission.hpp"
#include "emg/ted.hpp"

namespace emg::extract {

namespace {

const constants::UniversalConstants& uc() { return constants::kUniversal; }

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace

FittingPoint iterate_beta(double V_t, double S_expt, double phi,
                          const ExtractionConfig& config) {
  if (!(S_expt < 0.0)) {
    throw Error(ErrorKind::PositiveSlope, "slope must be negative");
  }
  if (!(V_t > 0.0)) {
    throw Error(ErrorKind::DomainError, "fitting voltage must be > 0");
  }
  const auto wf = constants::derive(phi);
  if (!(config.beta_start > 0.0) || !(config.convergence_tol > 0.0)) {
    throw Error(ErrorKind::DomainError,
                "beta_start and convergence_tol must be > 0");
  }
  // beta_et is the triangular-barrier extraction; the loop multiplies it by
  // the slope correction evaluated at the scaled field implied by beta.
  const double beta_et = -uc().b * phi * std::sqrt(phi) / S_expt;
  const double field_per_beta = V_t / wf.F_ref;  // f_t = field_per_beta * beta

  auto scaled = [&](double beta) {
    const double f = field_per_beta * beta;
    if (!(f > 0.0 && f <= 1.0)) {
      throw Error(ErrorKind::ScaledFieldOutOfRange,
                  "f_t = " + fmt(f) + " left (0, 1] during iteration at V_t = " +
                      fmt(V_t) + " V; inputs are unphysical for this model");
    }
    return f;
  };

  double beta = config.beta_start;
  int iterations = 0;
  bool converged = false;
  while (iterations < config.max_iterations) {
    ++iterations;
    const double f = scaled(beta);
    const double next = smf::s_fd(f, config.variant) * beta_et;
    const double delta = std::fabs(next - beta);
    beta = next;
    const double ref = config.absolute_tol ? 1.0 : std::fabs(beta);
    if (delta <= config.convergence_tol * ref) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    throw Error(ErrorKind::NonConvergence,
                "no fixed point within " + std::to_string(config.max_iterations) +
                    " iterations at V_t = " + fmt(V_t) + " V");
  }

  FittingPoint pt;
  pt.V_t = V_t;
  pt.beta = beta;
  pt.F_t = beta * V_t;
  pt.f_t = scaled(beta);
  pt.s_t = smf::s_fd(pt.f_t, config.variant);
  pt.r_t = smf::r_fd(wf.eta, pt.f_t, config.variant);
  pt.rt_st2 = pt.r_t * pt.s_t * pt.s_t;
  pt.iterations = iterations;
  pt.converged = true;
  return pt;
}

double current_at(const fnfit::FNFitResult& fit, const fnfit::IVDataset* data,
                  double V_t, const ExtractionConfig& config) {
  if (config.current_at_vmid_A &&
      std::fabs(V_t - fit.V_mid) <= 1e-12 * fit.V_mid) {
    return *config.current_at_vmid_A;
  }
  if (data != nullptr && !data->points.empty()) {
    const auto& pts = data->points;
    for (const auto& p : pts) {
      if (std::fabs(p.voltage_V - V_t) <= 1e-9 * V_t) return p.current_A;
    }
    // Log-linear interpolation in FN coordinates between bracketing points.
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
      if (pts[i].voltage_V < V_t && V_t < pts[i + 1].voltage_V) {
        const double x0 = 1.0 / pts[i].voltage_V, x1 = 1.0 / pts[i + 1].voltage_V;
        const double y0 = std::log(pts[i].current_A / (pts[i].voltage_V * pts[i].voltage_V));
        const double y1 =
            std::log(pts[i + 1].current_A / (pts[i + 1].voltage_V * pts[i + 1].voltage_V));
        const double x = 1.0 / V_t;
        const double y = y0 + (y1 - y0) * (x - x0) / (x1 - x0);
        return std::exp(y) * V_t * V_t;
      }
    }
  }
  if (config.current_policy == CurrentPolicy::MeasuredOnly) {
    throw Error(ErrorKind::MissingCurrent,
                "no measured current available at V_t = " + fmt(V_t) + " V");
  }
  return fnfit::current_on_line(fit, V_t);
}

ExtractionResult extract_at(const fnfit::FNFitResult& fit, double V_t,
                            const ExtractionConfig& config,
                            const fnfit::IVDataset* data) {
  if (!(V_t >= fit.V_min && V_t <= fit.V_max)) {
    throw Error(ErrorKind::DomainError,
                "V_t = " + fmt(V_t) + " outside the measured range [" +
                    fmt(fit.V_min) + ", " + fmt(fit.V_max) + "] V");
  }
  const auto wf = constants::derive(config.phi);

  ExtractionResult res;
  res.point = iterate_beta(V_t, fit.S_expt, config.phi, config);

  res.Lambda_ET_nm2_per_A = 1.0 / wf.ab2_phi2;
  res.Lambda_SN_nm2_per_A = res.Lambda_ET_nm2_per_A / res.point.rt_st2;
  res.A_f_ET_nm2 = res.Lambda_ET_nm2_per_A * fit.RS2;
  res.A_f_SN_nm2 = res.Lambda_SN_nm2_per_A * fit.RS2;

  const double t = config.use_fixed_t_decay_width
                       ? 1.05
                       : smf::t_fd(res.point.f_t, config.variant);
  res.d_F_SN_eV = uc().two_thirds_over_b * res.point.F_t / std::sqrt(config.phi) / t;

  const double I_m = current_at(fit, data, V_t, config);
  res.J_extr_A_per_nm2 = I_m / res.A_f_SN_nm2;
  res.B_pract = ted::practical_brightness(I_m, res.A_f_SN_nm2, res.d_F_SN_eV);

  if (config.A_M_nm2) {
    res.alpha_f_SN = formal_area_efficiency(res.A_f_SN_nm2, *config.A_M_nm2);
  }

  const auto verdict = fnfit::orthodoxy_test(fit, config.phi, res.point.beta);
  if (verdict.verdict != fnfit::Verdict::Pass) {
    res.warnings.push_back(std::string("orthodoxy test ") +
                           fnfit::to_string(verdict.verdict) + " (f_low = " +
                           fmt(verdict.f_low) + ", f_high = " + fmt(verdict.f_high) + ")");
  }
  const double p = uc().k_B * config.T / res.d_F_SN_eV;
  if (p >= config.lambda_pole_guard) {
    res.warnings.push_back("temperature correction near its pole (p = " + fmt(p) + ")");
  }
  if (res.point.f_t < verdict.thresholds.fail_lo ||
      res.point.f_t > verdict.thresholds.fail_hi) {
    res.warnings.push_back("fitting scaled field f_t = " + fmt(res.point.f_t) +
                           " outside the plausible band");
  }
  return res;
}

std::vector<double> build_vt_grid(const fnfit::FNFitResult& fit, const VtGrid& grid) {
  std::vector<double> vts;
  if (!grid.explicit_values.empty()) {
    vts = grid.explicit_values;
    for (double v : vts) {
      if (!(v >= fit.V_min && v <= fit.V_max)) {
        throw Error(ErrorKind::DomainError,
                    "grid voltage " + fmt(v) + " outside [" + fmt(fit.V_min) + ", " +
                        fmt(fit.V_max) + "] V");
      }
    }
    std::sort(vts.begin(), vts.end());
  } else {
    const int n = std::max(1, grid.auto_count);
    if (n == 1 || fit.V_max == fit.V_min) {
      vts.push_back(fit.V_mid);
    } else {
      vts.reserve(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) {
        vts.push_back(fit.V_min + (fit.V_max - fit.V_min) * i / (n - 1));
      }
    }
  }
  const bool has_mid = std::any_of(vts.begin(), vts.end(), [&](double v) {
    return std::fabs(v - fit.V_mid) <= 1e-9 * fit.V_mid;
  });
  if (!has_mid) {
    vts.insert(std::upper_bound(vts.begin(), vts.end(), fit.V_mid), fit.V_mid);
  }
  return vts;
}

std::vector<SweepEntry> sweep(const fnfit::FNFitResult& fit,
                              const ExtractionConfig& config,
                              const fnfit::IVDataset* data) {
  std::vector<SweepEntry> entries;
  for (double v : build_vt_grid(fit, config.vt_grid)) {
    SweepEntry entry;
    entry.V_t = v;
    try {
      entry.result = extract_at(fit, v, config, data);
    } catch (const Error& e) {
      entry.error = e.what();
    }
    entries.push_back(std::move(entry));
  }
  return entries;
}

AreaErrorBound area_error_bound(const fnfit::FNFitResult& fit,
                                const ExtractionConfig& config) {
  const double a_mid = extract_at(fit, fit.V_mid, config).A_f_SN_nm2;
  const double a_max = extract_at(fit, fit.V_max, config).A_f_SN_nm2;
  return AreaErrorBound{a_mid, a_max, std::fabs(a_max - a_mid) / a_mid};
}

double formal_area_efficiency(double A_f_SN_nm2, double A_M_nm2) {
  if (!(A_f_SN_nm2 > 0.0) || !(A_M_nm2 > 0.0)) {
    throw Error(ErrorKind::NonPositiveArea, "areas must be > 0");
  }
  return A_f_SN_nm2 / A_M_nm2;
}

fnfit::IVDataset synthesize_emg_iv(double A_f_SN_nm2, double beta, double phi,
                                   const std::vector<double>& voltages,
                                   smf::Variant variant) {
  if (!(A_f_SN_nm2 > 0.0) || !(beta > 0.0)) {
    throw Error(ErrorKind::NonPositiveInput, "area and beta must be > 0");
  }
  std::vector<fnfit::IVPoint> pts;
  pts.reserve(voltages.size());
  for (double v : voltages) {
    if (!(v > 0.0)) {
      throw Error(ErrorKind::NonPositiveInput, "voltages must be > 0");
    }
    const double f = emission::scaled_field(phi, beta * v);
    if (!(f > 0.0 && f <= 1.0)) {
      throw Error(ErrorKind::ScaledFieldOutOfRange,
                  "f = " + fmt(f) + " at V = " + fmt(v) + " V outside (0, 1]");
    }
    pts.push_back({v, A_f_SN_nm2 * emission::kernel_current_density(phi, beta * v, variant)});
  }
  return fnfit::make_dataset(std::move(pts), "synthetic-emg");
}

}  // namespace emg::extract
