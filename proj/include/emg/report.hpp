#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "emg/extract.hpp"
#include "emg/fimfem.hpp"
#include "emg/fnfit.hpp"
#include "emg/ted.hpp"

namespace emg::report {

struct FimFemInputs {
  fimfem::FimMeasurements fim;
  fimfem::FemMeasurements fem;
};

struct FimFemSection {
  double record_scale;
  fimfem::SourceGeometry geometry;
  std::optional<fimfem::AreaComparison> comparison;  ///< needs extracted areas
};

/// Full analysis of one dataset. Sections that could not be produced are
/// absent, with the reason recorded in the matching *_error string
/// (partial-report mode).
struct AnalysisReport {
  std::string label;
  double phi = 0.0;
  double T = 0.0;
  std::string config_digest;

  std::vector<fnfit::FnPoint> fn_points;

  std::optional<fnfit::FNFitResult> fit;
  std::string fit_error;

  std::optional<fnfit::OrthodoxyVerdict> orthodoxy;
  std::string orthodoxy_error;

  std::optional<extract::ExtractionResult> definitive;  ///< at V_mid
  std::string definitive_error;

  std::vector<extract::SweepEntry> sweep;

  std::optional<extract::AreaErrorBound> error_bound;
  std::string error_bound_error;

  std::optional<ted::TedCurve> ted;
  std::string ted_error;

  std::optional<FimFemSection> fimfem;
  std::string fimfem_error;

  std::vector<std::string> warnings;
};

struct BuildOptions {
  std::optional<FimFemInputs> fimfem;
  bool with_ted = true;
};

/// Run fit -> sweep -> definitive -> orthodoxy -> error bound -> optional
/// TED and FIM-FEM sections. Deterministic given inputs; never throws for
/// per-section failures (they land in the *_error fields).
AnalysisReport build_report(const fnfit::IVDataset& dataset,
                            const extract::ExtractionConfig& config,
                            const BuildOptions& options = {});

struct ReportOptions {
  int sig_digits = 6;  ///< significant digits for every serialized number
};

/// Canonical one-line description of an extraction configuration
/// (deterministic; echoed into reports for reproducibility).
std::string config_digest(const extract::ExtractionConfig& config);

/// Fixed-key-order JSON with units suffixed in key names. Byte-stable:
/// identical reports serialize to identical bytes (no timestamps anywhere).
std::string serialize(const AnalysisReport& report, const ReportOptions& options = {});

/// Inverse of serialize (up to the serialized precision).
AnalysisReport parse(const std::string& json_text);

enum class Series {
  SweepBeta,
  SweepArea,
  SweepBrightness,
  TedCurve,
  FnPlot,
};

/// Plot-ready two-column table. FnPlot carries the fitted-line endpoints in
/// `overlay`. Throws MissingSection when the report lacks the data.
struct SeriesTable {
  std::string x_name;
  std::string y_name;
  std::vector<std::array<double, 2>> rows;
  std::vector<std::array<double, 2>> overlay;
};

SeriesTable emit_series(const AnalysisReport& report, Series which);

}  // namespace emg::report
