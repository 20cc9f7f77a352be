#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "emg/errors.hpp"

namespace emg::fnfit {

struct IVPoint {
  double voltage_V;
  double current_A;
};

/// Measured current-voltage data, canonically sorted by ascending voltage
/// with duplicate voltages averaged. Positivity is enforced on ingestion.
struct IVDataset {
  std::vector<IVPoint> points;
  std::string label;
};

struct CsvOptions {
  double current_unit_multiplier = 1.0;  ///< e.g. 1e-9 for data recorded in nA
};

/// Parse two-column CSV (voltage_V,current_A). Optional header row;
/// '#'-prefixed comment lines and blank lines are skipped. Requires >= 3
/// points after duplicate averaging.
IVDataset load_iv(std::istream& source, const CsvOptions& options = {},
                  std::string label = "");

/// Canonicalize (sort, average duplicates) and validate positivity.
/// Point-count is not enforced here; load_iv and fit add that.
IVDataset make_dataset(std::vector<IVPoint> points, std::string label = "");

struct FnPoint {
  double x;  ///< 1/V_m, V^-1
  double y;  ///< ln(I_m / V_m^2)
};

/// Transform to Fowler-Nordheim coordinates, one output per input, same order.
std::vector<FnPoint> fn_transform(const IVDataset& dataset);

/// Straight line fitted to an FN plot, plus the voltage-range bookkeeping
/// the extraction stage needs.
struct FNFitResult {
  double ln_R_expt;     ///< intercept, ln(A/V^2)
  double R_expt;        ///< A/V^2
  double S_expt;        ///< slope, V (negative for field-emission-like data)
  double RS2;           ///< R_expt * S_expt^2, A
  double V_min;         ///< V
  double V_max;         ///< V
  double V_mid;         ///< (V_min + V_max)/2, V
  double rms_residual;  ///< in FN-coordinate units
  int n_points;
};

/// Ordinary least squares of y on x. Throws TooFewPoints (< 3),
/// DegenerateAbscissa (all x equal) or PositiveSlope (S_expt >= 0).
FNFitResult fit_line(const std::vector<FnPoint>& points);

/// fn_transform then fit_line.
FNFitResult fit_dataset(const IVDataset& dataset);

/// Build a fit result directly from line parameters (no regression), for
/// workflows that start from published (ln R, S) values. n_points = 0,
/// rms_residual = 0.
FNFitResult from_line_parameters(double ln_R_expt, double S_expt, double V_min,
                                 double V_max);

/// Predicted current on the fitted line at voltage V.
double current_on_line(const FNFitResult& fit, double V);

struct OrthodoxyThresholds {
  double pass_lo = 0.15;
  double pass_hi = 0.45;
  double fail_lo = 0.10;
  double fail_hi = 0.75;
};

enum class Verdict { Pass, Inconclusive, Fail };

const char* to_string(Verdict v) noexcept;

/// Scaled-field validity check over the measured voltage range. Advisory,
/// never blocking: extraction proceeds regardless of the verdict.
struct OrthodoxyVerdict {
  double f_low;   ///< scaled field at V_min
  double f_high;  ///< scaled field at V_max
  Verdict verdict;
  OrthodoxyThresholds thresholds;
};

OrthodoxyVerdict orthodoxy_test(const FNFitResult& fit, double phi, double beta,
                                const OrthodoxyThresholds& thresholds = {});

}  // namespace emg::fnfit
