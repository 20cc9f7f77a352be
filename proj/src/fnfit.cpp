#include "emg/fnfit.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <istream>
#include <map>
#include <string>

#include "emg/constants.hpp"

namespace emg::fnfit {

namespace {

std::string trim(std::string s) {
  auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

bool parse_double(const std::string& field, double& out) {
  const char* begin = field.data();
  const char* end = begin + field.size();
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end;
}

}  // namespace

IVDataset make_dataset(std::vector<IVPoint> points, std::string label) {
  for (const IVPoint& p : points) {
    if (!(p.voltage_V > 0.0)) {
      throw Error(ErrorKind::NonPositiveValue,
                  "voltage must be > 0 V (got " + std::to_string(p.voltage_V) + ")");
    }
    if (!(p.current_A > 0.0)) {
      throw Error(ErrorKind::NonPositiveValue,
                  "current must be > 0 A (got " + std::to_string(p.current_A) + ")");
    }
  }
  std::sort(points.begin(), points.end(),
            [](const IVPoint& a, const IVPoint& b) { return a.voltage_V < b.voltage_V; });
  // Average the currents of duplicate voltages.
  std::vector<IVPoint> merged;
  for (std::size_t i = 0; i < points.size();) {
    std::size_t j = i;
    double sum = 0.0;
    while (j < points.size() && points[j].voltage_V == points[i].voltage_V) {
      sum += points[j].current_A;
      ++j;
    }
    merged.push_back({points[i].voltage_V, sum / static_cast<double>(j - i)});
    i = j;
  }
  return IVDataset{std::move(merged), std::move(label)};
}

IVDataset load_iv(std::istream& source, const CsvOptions& options, std::string label) {
  std::vector<IVPoint> points;
  std::string line;
  int line_no = 0;
  bool header_allowed = true;
  while (std::getline(source, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped.front() == '#') continue;
    const auto comma = stripped.find(',');
    if (comma == std::string::npos || stripped.find(',', comma + 1) != std::string::npos) {
      throw Error(ErrorKind::ParseError,
                  "line " + std::to_string(line_no) + ": expected two comma-separated columns");
    }
    const std::string a = trim(stripped.substr(0, comma));
    const std::string b = trim(stripped.substr(comma + 1));
    double v = 0.0, i = 0.0;
    if (!parse_double(a, v) || !parse_double(b, i)) {
      if (header_allowed && points.empty()) {
        header_allowed = false;  // one non-numeric row accepted as a header
        continue;
      }
      throw Error(ErrorKind::ParseError,
                  "line " + std::to_string(line_no) + ": non-numeric field");
    }
    header_allowed = false;
    if (!(v > 0.0) || !(i > 0.0)) {
      throw Error(ErrorKind::NonPositiveValue,
                  "line " + std::to_string(line_no) + ": voltage and current must be > 0");
    }
    points.push_back({v, i * options.current_unit_multiplier});
  }
  IVDataset ds = make_dataset(std::move(points), std::move(label));
  if (ds.points.size() < 3) {
    throw Error(ErrorKind::TooFewPoints,
                "need at least 3 data points, got " + std::to_string(ds.points.size()));
  }
  return ds;
}

std::vector<FnPoint> fn_transform(const IVDataset& dataset) {
  std::vector<FnPoint> out;
  out.reserve(dataset.points.size());
  for (const IVPoint& p : dataset.points) {
    out.push_back({1.0 / p.voltage_V,
                   std::log(p.current_A / (p.voltage_V * p.voltage_V))});
  }
  return out;
}

FNFitResult fit_line(const std::vector<FnPoint>& points) {
  const std::size_t n = points.size();
  if (n < 3) {
    throw Error(ErrorKind::TooFewPoints,
                "need at least 3 points to fit, got " + std::to_string(n));
  }
  double xbar = 0.0, ybar = 0.0;
  for (const FnPoint& p : points) {
    xbar += p.x;
    ybar += p.y;
  }
  xbar /= static_cast<double>(n);
  ybar /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (const FnPoint& p : points) {
    sxx += (p.x - xbar) * (p.x - xbar);
    sxy += (p.x - xbar) * (p.y - ybar);
  }
  if (sxx == 0.0) {
    throw Error(ErrorKind::DegenerateAbscissa, "all abscissa values are equal");
  }
  const double slope = sxy / sxx;
  const double intercept = ybar - slope * xbar;
  if (!(slope < 0.0)) {
    throw Error(ErrorKind::PositiveSlope,
                "fitted slope " + std::to_string(slope) +
                    " is not negative; data is not field-emission-like");
  }
  double ssr = 0.0;
  double x_min = points.front().x, x_max = points.front().x;
  for (const FnPoint& p : points) {
    const double r = p.y - (intercept + slope * p.x);
    ssr += r * r;
    x_min = std::min(x_min, p.x);
    x_max = std::max(x_max, p.x);
  }
  FNFitResult fit;
  fit.ln_R_expt = intercept;
  fit.R_expt = std::exp(intercept);
  fit.S_expt = slope;
  fit.RS2 = fit.R_expt * slope * slope;
  fit.V_min = 1.0 / x_max;
  fit.V_max = 1.0 / x_min;
  fit.V_mid = 0.5 * (fit.V_min + fit.V_max);
  fit.rms_residual = std::sqrt(ssr / static_cast<double>(n));
  fit.n_points = static_cast<int>(n);
  return fit;
}

FNFitResult fit_dataset(const IVDataset& dataset) {
  return fit_line(fn_transform(dataset));
}

FNFitResult from_line_parameters(double ln_R_expt, double S_expt, double V_min,
                                 double V_max) {
  if (!(S_expt < 0.0)) {
    throw Error(ErrorKind::PositiveSlope,
                "slope must be negative, got " + std::to_string(S_expt));
  }
  if (!(V_min > 0.0) || !(V_max >= V_min)) {
    throw Error(ErrorKind::DomainError, "voltage range must satisfy 0 < V_min <= V_max");
  }
  FNFitResult fit;
  fit.ln_R_expt = ln_R_expt;
  fit.R_expt = std::exp(ln_R_expt);
  fit.S_expt = S_expt;
  fit.RS2 = fit.R_expt * S_expt * S_expt;
  fit.V_min = V_min;
  fit.V_max = V_max;
  fit.V_mid = 0.5 * (V_min + V_max);
  fit.rms_residual = 0.0;
  fit.n_points = 0;
  return fit;
}

double current_on_line(const FNFitResult& fit, double V) {
  if (!(V > 0.0)) {
    throw Error(ErrorKind::DomainError, "voltage must be > 0");
  }
  return std::exp(fit.ln_R_expt + fit.S_expt / V) * V * V;
}

const char* to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Inconclusive: return "inconclusive";
    case Verdict::Fail: return "fail";
  }
  return "?";
}

OrthodoxyVerdict orthodoxy_test(const FNFitResult& fit, double phi, double beta,
                                const OrthodoxyThresholds& thresholds) {
  const auto wf = constants::derive(phi);
  if (!(beta > 0.0)) {
    throw Error(ErrorKind::DomainError, "conversion factor must be > 0");
  }
  const double f_low = beta * fit.V_min / wf.F_ref;
  const double f_high = beta * fit.V_max / wf.F_ref;
  const auto in = [](double f, double lo, double hi) { return f >= lo && f <= hi; };
  Verdict verdict;
  if (in(f_low, thresholds.pass_lo, thresholds.pass_hi) &&
      in(f_high, thresholds.pass_lo, thresholds.pass_hi)) {
    verdict = Verdict::Pass;
  } else if (!in(f_low, thresholds.fail_lo, thresholds.fail_hi) ||
             !in(f_high, thresholds.fail_lo, thresholds.fail_hi)) {
    verdict = Verdict::Fail;
  } else {
    verdict = Verdict::Inconclusive;
  }
  return OrthodoxyVerdict{f_low, f_high, verdict, thresholds};
}

}  // namespace emg::fnfit
