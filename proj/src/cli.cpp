#include "emg/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "emg/constants.hpp"
#include "emg/emission.hpp"
#include "emg/extract.hpp"
#include "emg/fimfem.hpp"
#include "emg/fnfit.hpp"
#include "emg/report.hpp"
#include "emg/smf.hpp"
#include "emg/ted.hpp"

namespace emg::cli {

namespace {

std::string g6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string g9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

void print_row(std::ostream& out, const char* name, double value, const char* unit) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), "  %-10s %14.6g  %s\n", name, value, unit);
  out << buf;
}

void print_definitive(std::ostream& out, const extract::ExtractionResult& r) {
  out << "definitive extraction (V_t = " << g6(r.point.V_t) << " V, "
      << r.point.iterations << " iterations)\n";
  print_row(out, "beta", r.point.beta, "nm^-1");
  print_row(out, "F_t", r.point.F_t, "V/nm");
  print_row(out, "f_t", r.point.f_t, "-");
  print_row(out, "s_t", r.point.s_t, "-");
  print_row(out, "r_t", r.point.r_t, "-");
  print_row(out, "rt_st2", r.point.rt_st2, "-");
  print_row(out, "A_f_SN", r.A_f_SN_nm2, "nm^2");
  print_row(out, "A_f_ET", r.A_f_ET_nm2, "nm^2");
  if (r.alpha_f_SN) print_row(out, "alpha_f_SN", *r.alpha_f_SN, "-");
  print_row(out, "d_F", r.d_F_SN_eV, "eV");
  print_row(out, "J_extr", r.J_extr_A_per_nm2, "A/nm^2");
  print_row(out, "B_pract", r.B_pract, "A m^-2 sr^-1 eV^-1");
  for (const auto& w : r.warnings) out << "  warning: " << w << "\n";
}

smf::Variant parse_variant(const std::string& name) {
  if (name == "hp") return smf::Variant::HighPrecision;
  if (name == "fd06") return smf::Variant::SimpleGood;
  throw Error(ErrorKind::ParseError, "variant must be 'hp' or 'fd06', got '" + name + "'");
}

double parse_current_unit(const std::string& unit) {
  if (unit == "A") return 1.0;
  if (unit == "nA") return 1e-9;
  if (unit == "uA") return 1e-6;
  throw Error(ErrorKind::ParseError, "current unit must be A, nA or uA, got '" + unit + "'");
}

double parse_area_macro(const std::string& text) {
  std::size_t pos = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &pos);
  } catch (const std::exception&) {
    throw Error(ErrorKind::ParseError, "cannot parse macroscopic area '" + text + "'");
  }
  const std::string suffix = text.substr(pos);
  if (suffix == "nm2") return value;
  if (suffix == "mm2") return value * constants::kNm2PerMm2;
  throw Error(ErrorKind::ParseError,
              "macroscopic area needs an explicit nm2 or mm2 suffix, got '" + text + "'");
}

extract::VtGrid parse_vt_grid(const std::string& text) {
  extract::VtGrid grid;
  if (text.find(',') == std::string::npos) {
    try {
      grid.auto_count = std::stoi(text);
    } catch (const std::exception&) {
      throw Error(ErrorKind::ParseError, "cannot parse grid size '" + text + "'");
    }
    if (grid.auto_count < 1) {
      throw Error(ErrorKind::ParseError, "grid size must be >= 1");
    }
    return grid;
  }
  std::stringstream ss(text);
  std::string field;
  while (std::getline(ss, field, ',')) {
    try {
      grid.explicit_values.push_back(std::stod(field));
    } catch (const std::exception&) {
      throw Error(ErrorKind::ParseError, "cannot parse grid voltage '" + field + "'");
    }
  }
  return grid;
}

std::vector<double> parse_voltage_sweep(const std::string& text) {
  double lo = 0.0, hi = 0.0;
  int n = 0;
  if (std::sscanf(text.c_str(), "%lf,%lf,%d", &lo, &hi, &n) != 3 || n < 1) {
    throw Error(ErrorKind::ParseError,
                "--voltages expects lo,hi,n with n >= 1 (got '" + text + "')");
  }
  std::vector<double> vs;
  for (int i = 0; i < n; ++i) {
    vs.push_back(n == 1 ? lo : lo + (hi - lo) * i / (n - 1));
  }
  return vs;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) {
    throw Error(ErrorKind::ParseError, "cannot open '" + path + "' for writing");
  }
  f << content;
}

std::string series_csv(const report::SeriesTable& table) {
  std::string text = "# " + table.x_name + "," + table.y_name + "\n";
  for (const auto& row : table.rows) {
    text += g9(row[0]) + "," + g9(row[1]) + "\n";
  }
  if (!table.overlay.empty()) {
    text += "# fitted_line\n";
    for (const auto& row : table.overlay) {
      text += g9(row[0]) + "," + g9(row[1]) + "\n";
    }
  }
  return text;
}

std::string iv_csv(const fnfit::IVDataset& ds) {
  std::string text = "voltage_V,current_A\n";
  for (const auto& p : ds.points) {
    text += g9(p.voltage_V) + "," + g9(p.current_A) + "\n";
  }
  return text;
}

void write_series_dir(const report::AnalysisReport& rep, const std::string& dir,
                      std::ostream& err) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw Error(ErrorKind::ParseError, "cannot create series directory '" + dir + "'");
  }
  const std::pair<report::Series, const char*> wanted[] = {
      {report::Series::SweepBeta, "sweep_beta.csv"},
      {report::Series::SweepArea, "sweep_area.csv"},
      {report::Series::SweepBrightness, "sweep_brightness.csv"},
      {report::Series::TedCurve, "ted_curve.csv"},
      {report::Series::FnPlot, "fn_plot.csv"},
  };
  for (const auto& [series, name] : wanted) {
    try {
      write_text_file((fs::path(dir) / name).string(),
                      series_csv(report::emit_series(rep, series)));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::MissingSection) throw;
      err << "note: skipped " << name << " (" << e.what() << ")\n";
    }
  }
}

// Shared by analyze and fit-only once a fit (and maybe a dataset) exists.
void run_pipeline(const fnfit::FNFitResult& fit, const fnfit::IVDataset* data,
                  const extract::ExtractionConfig& config, const std::string& out_path,
                  const std::string& series_dir, std::ostream& out, std::ostream& err) {
  // Surface extraction failures with their proper exit class before building
  // the (never-throwing) report.
  extract::extract_at(fit, fit.V_mid, config, data);

  report::AnalysisReport rep;
  if (data != nullptr) {
    rep = report::build_report(*data, config);
  } else {
    // No measured points: assemble the same sections from the line parameters.
    rep.label = "line-parameters";
    rep.phi = config.phi;
    rep.T = config.T;
    rep.fit = fit;
    rep.sweep = extract::sweep(fit, config);
    for (const auto& e : rep.sweep) {
      if (e.result && std::fabs(e.V_t - fit.V_mid) <= 1e-9 * fit.V_mid) {
        rep.definitive = e.result;
      }
    }
    if (rep.definitive) {
      rep.orthodoxy = fnfit::orthodoxy_test(fit, config.phi, rep.definitive->point.beta);
      rep.warnings = rep.definitive->warnings;
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
    }
    try {
      rep.error_bound = extract::area_error_bound(fit, config);
    } catch (const Error& e) {
      rep.error_bound_error = e.what();
    }
  }

  if (!rep.definitive) {
    throw Error(ErrorKind::NonConvergence,
                "no definitive extraction at V_mid = " + g6(fit.V_mid) + " V: " +
                    rep.definitive_error);
  }
  print_definitive(out, *rep.definitive);
  if (rep.orthodoxy) {
    out << "orthodoxy: " << fnfit::to_string(rep.orthodoxy->verdict)
        << " (f_low = " << g6(rep.orthodoxy->f_low)
        << ", f_high = " << g6(rep.orthodoxy->f_high) << ")\n";
  }
  if (rep.error_bound) {
    out << "A_f_SN extraction-error bound: " << g6(100.0 * rep.error_bound->relative_bound)
        << " % (V_mid -> V_max)\n";
  }
  if (!out_path.empty()) write_text_file(out_path, report::serialize(rep));
  if (!series_dir.empty()) write_series_dir(rep, series_dir, err);
}

struct AnalyzeOptions {
  std::string input;
  double phi = 0.0;
  double temp = 300.0;
  std::string area_macro;
  std::string vt_grid;
  std::string variant = "hp";
  std::string current_unit = "A";
  std::string out_path;
  std::string series_dir;
};

struct FitOnlyOptions {
  double ln_R = 0.0;
  double slope = 0.0;
  std::vector<double> vrange;
  double phi = 0.0;
  double temp = 300.0;
  std::optional<double> current_A;
  std::string area_macro;
  std::string vt_grid;
  std::string variant = "hp";
  std::string out_path;
  std::string series_dir;
};

extract::ExtractionConfig make_config(double phi, double temp, const std::string& variant,
                                      const std::string& vt_grid,
                                      const std::string& area_macro) {
  extract::ExtractionConfig config;
  config.phi = phi;
  config.T = temp;
  config.variant = parse_variant(variant);
  if (!vt_grid.empty()) config.vt_grid = parse_vt_grid(vt_grid);
  if (!area_macro.empty()) config.A_M_nm2 = parse_area_macro(area_macro);
  return config;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.push_back("emgkit");
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Field electron emission I-V analysis (extended Murphy-Good theory)"};
  app.require_subcommand(1);

  AnalyzeOptions an;
  auto* analyze = app.add_subcommand(
      "analyze", "Fit an FN plot from a current-voltage CSV and extract source parameters");
  analyze->add_option("--input", an.input, "two-column CSV: voltage_V,current_A")->required();
  analyze->add_option("--phi", an.phi, "local work function, eV")->required();
  analyze->add_option("--temp", an.temp, "temperature, K (default 300)");
  analyze->add_option("--area-macro", an.area_macro,
                      "macroscopic area with unit suffix, e.g. 0.92mm2 or 8e6nm2");
  analyze->add_option("--vt-grid", an.vt_grid,
                      "fitting-voltage grid: point count, or comma-separated voltages");
  analyze->add_option("--variant", an.variant, "correction-function family: hp | fd06");
  analyze->add_option("--current-unit", an.current_unit, "unit of the current column: A | nA | uA");
  analyze->add_option("--out", an.out_path, "write the JSON report here");
  analyze->add_option("--series", an.series_dir, "write plot-ready CSV series into this directory");

  FitOnlyOptions fo;
  auto* fit_only = app.add_subcommand(
      "fit-only", "Extract source parameters from published FN-plot line parameters");
  fit_only->add_option("--lnR", fo.ln_R, "FN-plot intercept ln(R_expt)")->required();
  fit_only->add_option("--slope", fo.slope, "FN-plot slope S_expt, V (negative)")->required();
  fit_only->add_option("--vrange", fo.vrange, "measured voltage range lo,hi in V")
      ->required()
      ->delimiter(',')
      ->expected(2);
  fit_only->add_option("--phi", fo.phi, "local work function, eV")->required();
  fit_only->add_option("--temp", fo.temp, "temperature, K (default 300)");
  double fo_current = 0.0;
  auto* fo_current_opt = fit_only->add_option(
      "--current", fo_current, "measured current at the mid-range voltage, A");
  fit_only->add_option("--area-macro", fo.area_macro, "macroscopic area with nm2/mm2 suffix");
  fit_only->add_option("--vt-grid", fo.vt_grid, "fitting-voltage grid");
  fit_only->add_option("--variant", fo.variant, "hp | fd06");
  fit_only->add_option("--out", fo.out_path, "write the JSON report here");
  fit_only->add_option("--series", fo.series_dir, "write plot-ready CSV series here");

  struct {
    double phi = 0.0, field = 0.0, temp = 300.0;
    std::string variant = "hp", out_path;
    int samples = 2001;
  } td;
  auto* ted_cmd = app.add_subcommand("ted", "Total-energy distribution for (phi, T, F)");
  ted_cmd->add_option("--phi", td.phi, "work function, eV")->required();
  ted_cmd->add_option("--field", td.field, "local field, V/nm")->required();
  ted_cmd->add_option("--temp", td.temp, "temperature, K (default 300)");
  ted_cmd->add_option("--variant", td.variant, "hp | fd06");
  ted_cmd->add_option("--samples", td.samples, "minimum sample count (default 2001)");
  ted_cmd->add_option("--out", td.out_path, "write the curve CSV here");

  struct {
    double x = 0.0, eta = -1.0;
    std::string variant;
  } sm;
  auto* smf_cmd = app.add_subcommand("smf", "Evaluate the barrier correction functions");
  smf_cmd->add_option("--x", sm.x, "Gauss variable in [0, 1]")->required();
  smf_cmd->add_option("--eta", sm.eta, "scaling parameter for the intercept correction");
  smf_cmd->add_option("--variant", sm.variant, "restrict output to one family: hp | fd06");

  struct {
    double hole_true = 0.0, hole_record = 0.0, spot_separation = 0.0, nn_spacing = 0.0;
    double spot_radius = 0.0, broadening = 1.2;
    std::string radius_level = "record", compare, config_path;
  } ff;
  auto* fimfem_cmd = app.add_subcommand(
      "fimfem", "Magnification arithmetic: image-record measurements to source area");
  fimfem_cmd->add_option("--config", ff.config_path, "key=value file with the measurements");
  auto* ff_hole_true =
      fimfem_cmd->add_option("--hole-true", ff.hole_true, "channel-plate hole true diameter, mm");
  auto* ff_hole_record =
      fimfem_cmd->add_option("--hole-record", ff.hole_record, "hole diameter on the record, mm");
  auto* ff_spot_sep = fimfem_cmd->add_option("--spot-separation", ff.spot_separation,
                                             "adjacent atom-spot separation on the record, mm");
  auto* ff_nn =
      fimfem_cmd->add_option("--nn-spacing", ff.nn_spacing, "nearest-neighbour spacing, nm");
  auto* ff_radius =
      fimfem_cmd->add_option("--spot-radius", ff.spot_radius, "FEM image-spot radius, mm");
  auto* ff_level = fimfem_cmd->add_option(
      "--radius-level", ff.radius_level,
      "whether --spot-radius is record- or screen-level: record | screen");
  auto* ff_broadening =
      fimfem_cmd->add_option("--broadening", ff.broadening, "beam-broadening divisor (default 1.2)");
  fimfem_cmd->add_option("--compare", ff.compare, "A_f_ET,A_f_SN in nm^2 for the area ratios");

  struct {
    double area = 0.0, beta = 0.0, phi = 0.0;
    std::string voltages, variant = "hp", out_path;
  } sy;
  auto* synth_cmd = app.add_subcommand(
      "synth", "Generate synthetic I-V data from the forward emission model");
  synth_cmd->add_option("--area", sy.area, "formal emission area, nm^2")->required();
  synth_cmd->add_option("--beta", sy.beta, "conversion factor, nm^-1")->required();
  synth_cmd->add_option("--phi", sy.phi, "work function, eV")->required();
  synth_cmd->add_option("--voltages", sy.voltages, "lo,hi,n")->required();
  synth_cmd->add_option("--variant", sy.variant, "hp | fd06");
  synth_cmd->add_option("--out", sy.out_path, "write the CSV here (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    if (app.got_subcommand(analyze)) {
      std::ifstream in(an.input);
      if (!in) {
        throw Error(ErrorKind::ParseError, "cannot open input file '" + an.input + "'");
      }
      fnfit::CsvOptions csv;
      csv.current_unit_multiplier = parse_current_unit(an.current_unit);
      const fnfit::IVDataset ds = fnfit::load_iv(in, csv, an.input);
      const auto config =
          make_config(an.phi, an.temp, an.variant, an.vt_grid, an.area_macro);
      const auto fit = fnfit::fit_dataset(ds);
      run_pipeline(fit, &ds, config, an.out_path, an.series_dir, out, err);
      return 0;
    }
    if (app.got_subcommand(fit_only)) {
      auto config = make_config(fo.phi, fo.temp, fo.variant, fo.vt_grid, fo.area_macro);
      if (fo_current_opt->count() > 0) config.current_at_vmid_A = fo_current;
      const auto fit =
          fnfit::from_line_parameters(fo.ln_R, fo.slope, fo.vrange[0], fo.vrange[1]);
      run_pipeline(fit, nullptr, config, fo.out_path, fo.series_dir, out, err);
      return 0;
    }
    if (app.got_subcommand(ted_cmd)) {
      ted::TedSpec spec;
      spec.phi = td.phi;
      spec.T = td.temp;
      spec.F = td.field;
      spec.variant = parse_variant(td.variant);
      spec.samples = td.samples;
      const auto curve = ted::ted_curve(spec);
      out << "d_F    " << g6(curve.d_F_eV) << " eV\n";
      out << "p      " << g6(curve.p) << "\n";
      out << "FWHM   " << g6(curve.fwhm_eV) << " eV\n";
      out << "peak   " << g6(curve.peak_energy_eV) << " eV\n";
      out << "normalization_residual " << g6(curve.normalization_residual) << "\n";
      if (!td.out_path.empty()) {
        std::string csv = "# energy_eV,density_per_eV\n";
        for (const auto& s : curve.samples) {
          csv += g9(s.energy_eV) + "," + g9(s.density_per_eV) + "\n";
        }
        write_text_file(td.out_path, csv);
      }
      return 0;
    }
    if (app.got_subcommand(smf_cmd)) {
      const bool want_fd06 = sm.variant.empty() || sm.variant == "fd06";
      const bool want_hp = sm.variant.empty() || sm.variant == "hp";
      if (!want_fd06 && !want_hp) parse_variant(sm.variant);  // throws
      auto row = [&](const char* name, auto eval) {
        char buf[96];
        std::string fd06 = "-", hp = "-";
        if (want_fd06) fd06 = g6(eval(smf::Variant::SimpleGood));
        if (want_hp) hp = g6(eval(smf::Variant::HighPrecision));
        std::snprintf(buf, sizeof(buf), "  %-4s %14s %14s\n", name, fd06.c_str(), hp.c_str());
        out << buf;
      };
      out << "  fn      simple-good high-precision\n";
      row("v", [&](smf::Variant v) { return smf::v_fd(sm.x, v); });
      if (sm.x > 0.0) {
        row("u", [&](smf::Variant v) { return smf::u_fd(sm.x, v); });
        row("t", [&](smf::Variant v) { return smf::t_fd(sm.x, v); });
      }
      row("s", [&](smf::Variant v) { return smf::s_fd(sm.x, v); });
      if (sm.eta >= 0.0) {
        row("r", [&](smf::Variant v) { return smf::r_fd(sm.eta, sm.x, v); });
      }
      return 0;
    }
    if (app.got_subcommand(fimfem_cmd)) {
      if (!ff.config_path.empty()) {
        std::ifstream cfg(ff.config_path);
        if (!cfg) {
          throw Error(ErrorKind::ParseError, "cannot open config '" + ff.config_path + "'");
        }
        std::string line;
        int line_no = 0;
        while (std::getline(cfg, line)) {
          ++line_no;
          if (!line.empty() && line.back() == '\r') line.pop_back();
          if (line.empty() || line.front() == '#') continue;
          const auto eq = line.find('=');
          if (eq == std::string::npos) {
            throw Error(ErrorKind::ParseError, "config line " + std::to_string(line_no) +
                                                   ": expected key=value");
          }
          const std::string key = line.substr(0, eq);
          const std::string value = line.substr(eq + 1);
          // Explicit flags take precedence over the config file.
          try {
            if (key == "hole_true_mm") {
              if (ff_hole_true->count() == 0) ff.hole_true = std::stod(value);
            } else if (key == "hole_record_mm") {
              if (ff_hole_record->count() == 0) ff.hole_record = std::stod(value);
            } else if (key == "spot_separation_mm") {
              if (ff_spot_sep->count() == 0) ff.spot_separation = std::stod(value);
            } else if (key == "nn_spacing_nm") {
              if (ff_nn->count() == 0) ff.nn_spacing = std::stod(value);
            } else if (key == "spot_radius_mm") {
              if (ff_radius->count() == 0) ff.spot_radius = std::stod(value);
            } else if (key == "radius_level") {
              if (ff_level->count() == 0) ff.radius_level = value;
            } else if (key == "broadening") {
              if (ff_broadening->count() == 0) ff.broadening = std::stod(value);
            } else {
              throw Error(ErrorKind::ParseError,
                          "config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
            }
          } catch (const std::invalid_argument&) {
            throw Error(ErrorKind::ParseError,
                        "config line " + std::to_string(line_no) + ": bad number '" + value + "'");
          }
        }
      }
      fimfem::RadiusLevel level;
      if (ff.radius_level == "record") level = fimfem::RadiusLevel::Record;
      else if (ff.radius_level == "screen") level = fimfem::RadiusLevel::Screen;
      else
        throw Error(ErrorKind::ParseError,
                    "--radius-level must be 'record' or 'screen', got '" + ff.radius_level + "'");

      const fimfem::FimMeasurements fim{ff.hole_true, ff.hole_record, ff.spot_separation,
                                        ff.nn_spacing};
      const fimfem::FemMeasurements fem{ff.spot_radius, level, ff.broadening};
      const double scale = fimfem::record_scale(fim.hole_true_diameter_mm,
                                                fim.hole_record_diameter_mm);
      const double m_lin = fimfem::linear_magnification(fim);
      const auto geom = fimfem::source_geometry(fem, scale, m_lin);
      print_row(out, "scale", scale, "-");
      print_row(out, "m_lin", geom.m_lin, "-");
      print_row(out, "M_area", geom.M_area, "-");
      print_row(out, "r_screen", geom.screen_radius_mm, "mm");
      print_row(out, "r_corr", geom.corrected_radius_mm, "mm");
      print_row(out, "rho_S", geom.rho_S_nm, "nm");
      print_row(out, "A_S", geom.A_S_nm2, "nm^2");
      if (!ff.compare.empty()) {
        double a_et = 0.0, a_sn = 0.0;
        if (std::sscanf(ff.compare.c_str(), "%lf,%lf", &a_et, &a_sn) != 2) {
          throw Error(ErrorKind::ParseError, "--compare expects A_f_ET,A_f_SN");
        }
        const auto cmp = fimfem::compare_areas(geom.A_S_nm2, a_et, a_sn);
        print_row(out, "A_ET/A_S", cmp.ratio_ET_over_S, "-");
        print_row(out, "A_S/A_SN", cmp.ratio_S_over_SN, "-");
      }
      return 0;
    }
    if (app.got_subcommand(synth_cmd)) {
      const auto voltages = parse_voltage_sweep(sy.voltages);
      const auto ds = extract::synthesize_emg_iv(sy.area, sy.beta, sy.phi, voltages,
                                                 parse_variant(sy.variant));
      const std::string csv = iv_csv(ds);
      if (sy.out_path.empty()) {
        out << csv;
      } else {
        write_text_file(sy.out_path, csv);
      }
      return 0;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.is_input_error() ? 1 : 2;
  }
  return 1;
}

}  // namespace emg::cli
