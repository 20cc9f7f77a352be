#include "emg/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include <json.hpp>

namespace emg::report {

namespace {

using ordered_json = nlohmann::ordered_json;

/// Round to a fixed number of significant decimal digits so serialized
/// output is byte-stable and re-serialization is idempotent.
double round_sig(double v, int digits) {
  if (!std::isfinite(v)) return v;
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
  return std::strtod(buf, nullptr);
}

std::string variant_name(smf::Variant v) {
  return v == smf::Variant::HighPrecision ? "hp" : "fd06";
}

}  // namespace

std::string config_digest(const extract::ExtractionConfig& c) {
  char buf[320];
  std::string grid;
  if (c.vt_grid.explicit_values.empty()) {
    grid = "auto-" + std::to_string(c.vt_grid.auto_count);
  } else {
    grid = "explicit-" + std::to_string(c.vt_grid.explicit_values.size());
  }
  std::snprintf(buf, sizeof(buf),
                "phi=%.9g;T=%.9g;beta_start=%.9g;tol=%.9g;tol_mode=%s;max_iter=%d;"
                "variant=%s;grid=%s;A_M=%s;policy=%s;decay_t=%s;pole_guard=%.9g",
                c.phi, c.T, c.beta_start, c.convergence_tol,
                c.absolute_tol ? "abs" : "rel", c.max_iterations,
                variant_name(c.variant).c_str(), grid.c_str(),
                c.A_M_nm2 ? std::to_string(*c.A_M_nm2).c_str() : "-",
                c.current_policy == extract::CurrentPolicy::Auto ? "auto" : "measured-only",
                c.use_fixed_t_decay_width ? "1.05" : "t(f)", c.lambda_pole_guard);
  return buf;
}

namespace {

ordered_json fit_to_json(const fnfit::FNFitResult& f, int d) {
  ordered_json j;
  j["ln_R_expt"] = round_sig(f.ln_R_expt, d);
  j["R_expt_A_per_V2"] = round_sig(f.R_expt, d);
  j["S_expt_V"] = round_sig(f.S_expt, d);
  j["RS2_A"] = round_sig(f.RS2, d);
  j["V_min_V"] = round_sig(f.V_min, d);
  j["V_max_V"] = round_sig(f.V_max, d);
  j["V_mid_V"] = round_sig(f.V_mid, d);
  j["rms_residual"] = round_sig(f.rms_residual, d);
  j["n_points"] = f.n_points;
  return j;
}

fnfit::FNFitResult fit_from_json(const ordered_json& j) {
  fnfit::FNFitResult f;
  f.ln_R_expt = j.at("ln_R_expt");
  f.R_expt = j.at("R_expt_A_per_V2");
  f.S_expt = j.at("S_expt_V");
  f.RS2 = j.at("RS2_A");
  f.V_min = j.at("V_min_V");
  f.V_max = j.at("V_max_V");
  f.V_mid = j.at("V_mid_V");
  f.rms_residual = j.at("rms_residual");
  f.n_points = j.at("n_points");
  return f;
}

ordered_json extraction_to_json(const extract::ExtractionResult& r, int d) {
  ordered_json j;
  j["V_t_V"] = round_sig(r.point.V_t, d);
  j["beta_per_nm"] = round_sig(r.point.beta, d);
  j["F_t_V_per_nm"] = round_sig(r.point.F_t, d);
  j["f_t"] = round_sig(r.point.f_t, d);
  j["s_t"] = round_sig(r.point.s_t, d);
  j["r_t"] = round_sig(r.point.r_t, d);
  j["rt_st2"] = round_sig(r.point.rt_st2, d);
  j["iterations"] = r.point.iterations;
  j["converged"] = r.point.converged;
  j["A_f_SN_nm2"] = round_sig(r.A_f_SN_nm2, d);
  j["A_f_ET_nm2"] = round_sig(r.A_f_ET_nm2, d);
  j["Lambda_SN_nm2_per_A"] = round_sig(r.Lambda_SN_nm2_per_A, d);
  j["Lambda_ET_nm2_per_A"] = round_sig(r.Lambda_ET_nm2_per_A, d);
  if (r.alpha_f_SN) j["alpha_f_SN"] = round_sig(*r.alpha_f_SN, d);
  j["d_F_SN_eV"] = round_sig(r.d_F_SN_eV, d);
  j["J_extr_A_per_nm2"] = round_sig(r.J_extr_A_per_nm2, d);
  j["B_pract_A_per_m2_sr_eV"] = round_sig(r.B_pract, d);
  j["warnings"] = r.warnings;
  return j;
}

extract::ExtractionResult extraction_from_json(const ordered_json& j) {
  extract::ExtractionResult r;
  r.point.V_t = j.at("V_t_V");
  r.point.beta = j.at("beta_per_nm");
  r.point.F_t = j.at("F_t_V_per_nm");
  r.point.f_t = j.at("f_t");
  r.point.s_t = j.at("s_t");
  r.point.r_t = j.at("r_t");
  r.point.rt_st2 = j.at("rt_st2");
  r.point.iterations = j.at("iterations");
  r.point.converged = j.at("converged");
  r.A_f_SN_nm2 = j.at("A_f_SN_nm2");
  r.A_f_ET_nm2 = j.at("A_f_ET_nm2");
  r.Lambda_SN_nm2_per_A = j.at("Lambda_SN_nm2_per_A");
  r.Lambda_ET_nm2_per_A = j.at("Lambda_ET_nm2_per_A");
  if (j.contains("alpha_f_SN")) r.alpha_f_SN = double(j.at("alpha_f_SN"));
  r.d_F_SN_eV = j.at("d_F_SN_eV");
  r.J_extr_A_per_nm2 = j.at("J_extr_A_per_nm2");
  r.B_pract = j.at("B_pract_A_per_m2_sr_eV");
  r.warnings = j.at("warnings").get<std::vector<std::string>>();
  return r;
}

}  // namespace

AnalysisReport build_report(const fnfit::IVDataset& dataset,
                            const extract::ExtractionConfig& config,
                            const BuildOptions& options) {
  AnalysisReport rep;
  rep.label = dataset.label;
  rep.phi = config.phi;
  rep.T = config.T;
  rep.config_digest = config_digest(config);
  rep.fn_points = fnfit::fn_transform(dataset);

  try {
    rep.fit = fnfit::fit_dataset(dataset);
  } catch (const Error& e) {
    rep.fit_error = e.what();
  }

  if (rep.fit) {
    rep.sweep = extract::sweep(*rep.fit, config, &dataset);
    const auto mid = std::find_if(rep.sweep.begin(), rep.sweep.end(), [&](const auto& s) {
      return std::fabs(s.V_t - rep.fit->V_mid) <= 1e-9 * rep.fit->V_mid;
    });
    if (mid != rep.sweep.end() && mid->result) {
      rep.definitive = mid->result;
    } else {
      rep.definitive_error =
          mid != rep.sweep.end() ? mid->error : "mid-range voltage missing from sweep";
    }

    if (rep.definitive) {
      rep.orthodoxy = fnfit::orthodoxy_test(*rep.fit, config.phi, rep.definitive->point.beta);
    } else {
      rep.orthodoxy_error = "skipped: no definitive extraction";
    }

    try {
      rep.error_bound = extract::area_error_bound(*rep.fit, config);
    } catch (const Error& e) {
      rep.error_bound_error = e.what();
    }

    if (options.with_ted) {
      if (rep.definitive) {
        try {
          ted::TedSpec spec;
          spec.phi = config.phi;
          spec.T = config.T;
          spec.F = rep.definitive->point.F_t;
          spec.variant = config.variant;
          rep.ted = ted::ted_curve(spec);
        } catch (const Error& e) {
          rep.ted_error = e.what();
        }
      } else {
        rep.ted_error = "skipped: no definitive extraction";
      }
    }
  } else {
    rep.definitive_error = "skipped: fit unavailable";
    rep.orthodoxy_error = "skipped: fit unavailable";
    rep.error_bound_error = "skipped: fit unavailable";
    if (options.with_ted) rep.ted_error = "skipped: fit unavailable";
  }

  if (options.fimfem) {
    try {
      FimFemSection sec;
      sec.record_scale = fimfem::record_scale(options.fimfem->fim.hole_true_diameter_mm,
                                              options.fimfem->fim.hole_record_diameter_mm);
      const double m_lin = fimfem::linear_magnification(options.fimfem->fim);
      sec.geometry = fimfem::source_geometry(options.fimfem->fem, sec.record_scale, m_lin);
      if (rep.definitive) {
        sec.comparison = fimfem::compare_areas(sec.geometry.A_S_nm2,
                                               rep.definitive->A_f_ET_nm2,
                                               rep.definitive->A_f_SN_nm2);
      }
      rep.fimfem = sec;
    } catch (const Error& e) {
      rep.fimfem_error = e.what();
    }
  }

  if (rep.definitive) {
    rep.warnings = rep.definitive->warnings;
  }
  for (const std::string* err :
       {&rep.fit_error, &rep.definitive_error, &rep.ted_error, &rep.fimfem_error}) {
    if (!err->empty()) rep.warnings.push_back(*err);
  }
  return rep;
}

std::string serialize(const AnalysisReport& rep, const ReportOptions& options) {
  const int d = options.sig_digits;
  ordered_json j;
  j["schema"] = "emgkit/report-v1";
  ordered_json inputs;
  inputs["label"] = rep.label;
  inputs["phi_eV"] = round_sig(rep.phi, d);
  inputs["T_K"] = round_sig(rep.T, d);
  inputs["config"] = rep.config_digest;
  j["inputs"] = inputs;

  ordered_json fn = ordered_json::array();
  for (const auto& p : rep.fn_points) {
    fn.push_back({round_sig(p.x, d), round_sig(p.y, d)});
  }
  j["fn_points"] = fn;

  if (rep.fit) j["fit"] = fit_to_json(*rep.fit, d);
  if (!rep.fit_error.empty()) j["fit_error"] = rep.fit_error;

  if (rep.orthodoxy) {
    ordered_json o;
    o["f_low"] = round_sig(rep.orthodoxy->f_low, d);
    o["f_high"] = round_sig(rep.orthodoxy->f_high, d);
    o["verdict"] = fnfit::to_string(rep.orthodoxy->verdict);
    o["pass_band"] = {round_sig(rep.orthodoxy->thresholds.pass_lo, d),
                      round_sig(rep.orthodoxy->thresholds.pass_hi, d)};
    o["fail_band"] = {round_sig(rep.orthodoxy->thresholds.fail_lo, d),
                      round_sig(rep.orthodoxy->thresholds.fail_hi, d)};
    j["orthodoxy"] = o;
  }
  if (!rep.orthodoxy_error.empty()) j["orthodoxy_error"] = rep.orthodoxy_error;

  if (rep.definitive) j["definitive"] = extraction_to_json(*rep.definitive, d);
  if (!rep.definitive_error.empty()) j["definitive_error"] = rep.definitive_error;

  ordered_json sw = ordered_json::array();
  for (const auto& e : rep.sweep) {
    ordered_json je;
    je["V_t_V"] = round_sig(e.V_t, d);
    if (e.result) {
      je["result"] = extraction_to_json(*e.result, d);
    } else {
      je["error"] = e.error;
    }
    sw.push_back(je);
  }
  j["sweep"] = sw;

  if (rep.error_bound) {
    ordered_json b;
    b["A_at_Vmid_nm2"] = round_sig(rep.error_bound->A_at_Vmid_nm2, d);
    b["A_at_Vmax_nm2"] = round_sig(rep.error_bound->A_at_Vmax_nm2, d);
    b["relative_bound"] = round_sig(rep.error_bound->relative_bound, d);
    j["error_bound"] = b;
  }
  if (!rep.error_bound_error.empty()) j["error_bound_error"] = rep.error_bound_error;

  if (rep.ted) {
    ordered_json t;
    t["d_F_eV"] = round_sig(rep.ted->d_F_eV, d);
    t["p"] = round_sig(rep.ted->p, d);
    t["fwhm_eV"] = round_sig(rep.ted->fwhm_eV, d);
    t["peak_energy_eV"] = round_sig(rep.ted->peak_energy_eV, d);
    t["normalization_residual"] = round_sig(rep.ted->normalization_residual, d);
    ordered_json samples = ordered_json::array();
    for (const auto& s : rep.ted->samples) {
      samples.push_back({round_sig(s.energy_eV, d), round_sig(s.density_per_eV, d)});
    }
    t["samples"] = samples;
    j["ted"] = t;
  }
  if (!rep.ted_error.empty()) j["ted_error"] = rep.ted_error;

  if (rep.fimfem) {
    ordered_json f;
    f["record_scale"] = round_sig(rep.fimfem->record_scale, d);
    f["m_lin"] = round_sig(rep.fimfem->geometry.m_lin, d);
    f["M_area"] = round_sig(rep.fimfem->geometry.M_area, d);
    f["screen_radius_mm"] = round_sig(rep.fimfem->geometry.screen_radius_mm, d);
    f["corrected_radius_mm"] = round_sig(rep.fimfem->geometry.corrected_radius_mm, d);
    f["rho_S_nm"] = round_sig(rep.fimfem->geometry.rho_S_nm, d);
    f["A_S_nm2"] = round_sig(rep.fimfem->geometry.A_S_nm2, d);
    if (rep.fimfem->comparison) {
      f["ratio_ET_over_S"] = round_sig(rep.fimfem->comparison->ratio_ET_over_S, d);
      f["ratio_S_over_SN"] = round_sig(rep.fimfem->comparison->ratio_S_over_SN, d);
    }
    j["fimfem"] = f;
  }
  if (!rep.fimfem_error.empty()) j["fimfem_error"] = rep.fimfem_error;

  j["warnings"] = rep.warnings;
  return j.dump(2) + "\n";
}

AnalysisReport parse(const std::string& json_text) {
  ordered_json j;
  try {
    j = ordered_json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("report JSON: ") + e.what());
  }
  AnalysisReport rep;
  const auto& inputs = j.at("inputs");
  rep.label = inputs.at("label");
  rep.phi = inputs.at("phi_eV");
  rep.T = inputs.at("T_K");
  rep.config_digest = inputs.at("config");

  for (const auto& p : j.at("fn_points")) {
    rep.fn_points.push_back({p.at(0), p.at(1)});
  }

  if (j.contains("fit")) rep.fit = fit_from_json(j.at("fit"));
  rep.fit_error = j.value("fit_error", "");

  if (j.contains("orthodoxy")) {
    const auto& o = j.at("orthodoxy");
    fnfit::OrthodoxyVerdict v;
    v.f_low = o.at("f_low");
    v.f_high = o.at("f_high");
    const std::string verdict = o.at("verdict");
    v.verdict = verdict == "pass" ? fnfit::Verdict::Pass
                : verdict == "fail" ? fnfit::Verdict::Fail
                                    : fnfit::Verdict::Inconclusive;
    v.thresholds.pass_lo = o.at("pass_band").at(0);
    v.thresholds.pass_hi = o.at("pass_band").at(1);
    v.thresholds.fail_lo = o.at("fail_band").at(0);
    v.thresholds.fail_hi = o.at("fail_band").at(1);
    rep.orthodoxy = v;
  }
  rep.orthodoxy_error = j.value("orthodoxy_error", "");

  if (j.contains("definitive")) rep.definitive = extraction_from_json(j.at("definitive"));
  rep.definitive_error = j.value("definitive_error", "");

  if (j.contains("sweep")) {
    for (const auto& je : j.at("sweep")) {
      extract::SweepEntry e;
      e.V_t = je.at("V_t_V");
      if (je.contains("result")) e.result = extraction_from_json(je.at("result"));
      e.error = je.value("error", "");
      rep.sweep.push_back(std::move(e));
    }
  }

  if (j.contains("error_bound")) {
    const auto& b = j.at("error_bound");
    rep.error_bound = extract::AreaErrorBound{
        b.at("A_at_Vmid_nm2"), b.at("A_at_Vmax_nm2"), b.at("relative_bound")};
  }
  rep.error_bound_error = j.value("error_bound_error", "");

  if (j.contains("ted")) {
    const auto& t = j.at("ted");
    ted::TedCurve c;
    c.d_F_eV = t.at("d_F_eV");
    c.p = t.at("p");
    c.fwhm_eV = t.at("fwhm_eV");
    c.peak_energy_eV = t.at("peak_energy_eV");
    c.normalization_residual = t.at("normalization_residual");
    for (const auto& s : t.at("samples")) {
      c.samples.push_back({s.at(0), s.at(1)});
    }
    rep.ted = std::move(c);
  }
  rep.ted_error = j.value("ted_error", "");

  if (j.contains("fimfem")) {
    const auto& f = j.at("fimfem");
    FimFemSection sec;
    sec.record_scale = f.at("record_scale");
    sec.geometry.m_lin = f.at("m_lin");
    sec.geometry.M_area = f.at("M_area");
    sec.geometry.screen_radius_mm = f.at("screen_radius_mm");
    sec.geometry.corrected_radius_mm = f.at("corrected_radius_mm");
    sec.geometry.rho_S_nm = f.at("rho_S_nm");
    sec.geometry.A_S_nm2 = f.at("A_S_nm2");
    if (f.contains("ratio_ET_over_S")) {
      sec.comparison = fimfem::AreaComparison{f.at("ratio_ET_over_S"), f.at("ratio_S_over_SN")};
    }
    rep.fimfem = sec;
  }
  rep.fimfem_error = j.value("fimfem_error", "");

  rep.warnings = j.at("warnings").get<std::vector<std::string>>();
  return rep;
}

SeriesTable emit_series(const AnalysisReport& rep, Series which) {
  SeriesTable table;
  auto sweep_series = [&](const char* y_name, auto getter) {
    table.x_name = "V_t_V";
    table.y_name = y_name;
    for (const auto& e : rep.sweep) {
      if (e.result) table.rows.push_back({e.V_t, getter(*e.result)});
    }
    if (table.rows.empty()) {
      throw Error(ErrorKind::MissingSection, "no successful sweep entries in the report");
    }
  };
  switch (which) {
    case Series::SweepBeta:
      sweep_series("beta_per_nm",
                   [](const extract::ExtractionResult& r) { return r.point.beta; });
      break;
    case Series::SweepArea:
      sweep_series("A_f_SN_nm2",
                   [](const extract::ExtractionResult& r) { return r.A_f_SN_nm2; });
      break;
    case Series::SweepBrightness:
      sweep_series("B_pract_A_per_m2_sr_eV",
                   [](const extract::ExtractionResult& r) { return r.B_pract; });
      break;
    case Series::TedCurve:
      if (!rep.ted) {
        throw Error(ErrorKind::MissingSection, "report has no TED section");
      }
      table.x_name = "energy_eV";
      table.y_name = "density_per_eV";
      for (const auto& s : rep.ted->samples) {
        table.rows.push_back({s.energy_eV, s.density_per_eV});
      }
      break;
    case Series::FnPlot:
      if (!rep.fit) {
        throw Error(ErrorKind::MissingSection, "report has no fit section");
      }
      table.x_name = "inv_V_per_V";
      table.y_name = "ln_I_per_V2";
      for (const auto& p : rep.fn_points) {
        table.rows.push_back({p.x, p.y});
      }
      for (double v : {rep.fit->V_max, rep.fit->V_min}) {
        const double x = 1.0 / v;
        table.overlay.push_back({x, rep.fit->ln_R_expt + rep.fit->S_expt * x});
      }
      break;
  }
  return table;
}

}  // namespace emg::report
