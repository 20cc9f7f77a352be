#include "emg/ted.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>

#include "emg/constants.hpp"
#include "emg/emission.hpp"

namespace emg::ted {

namespace {

const constants::UniversalConstants& uc() { return constants::kUniversal; }

double softplus(double y) {
  // log(1 + e^y) without overflow.
  return std::max(y, 0.0) + std::log1p(std::exp(-std::fabs(y)));
}

// Below this Swanson-Bell value the Fermi-Dirac edge is too narrow to sample
// and the zero-temperature form is the more accurate model.
constexpr double kZeroTempP = 1e-4;

double bisect(const std::function<double(double)>& g, double lo, double hi,
              double target, bool rising, double tol) {
  for (int i = 0; i < 200 && hi - lo > tol; ++i) {
    const double mid = 0.5 * (lo + hi);
    const bool below = g(mid) < target;
    if (below == rising) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double golden_max(const std::function<double(double)>& g, double lo, double hi) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  for (int i = 0; i < 120 && b - a > 1e-12 * std::max(1.0, std::fabs(a)); ++i) {
    if (g(c) > g(d)) {
      b = d;
    } else {
      a = c;
    }
    c = b - inv_phi * (b - a);
    d = a + inv_phi * (b - a);
  }
  return 0.5 * (a + b);
}

double trapezoid(const std::vector<TedSample>& s) {
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    sum += 0.5 * (s[i].density_per_eV + s[i + 1].density_per_eV) *
           (s[i + 1].energy_eV - s[i].energy_eV);
  }
  return sum;
}

double simpson(const std::vector<TedSample>& s) {
  // Uniform grid, odd sample count (enforced by the sampler).
  const std::size_t n = s.size();
  const double h = (s.back().energy_eV - s.front().energy_eV) / static_cast<double>(n - 1);
  double sum = s.front().density_per_eV + s.back().density_per_eV;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    sum += (i % 2 == 1 ? 4.0 : 2.0) * s[i].density_per_eV;
  }
  return sum * h / 3.0;
}

}  // namespace

double ined(double T, double eps_n) {
  if (!(T >= 0.0)) {
    throw Error(ErrorKind::DomainError, "temperature must be >= 0 K");
  }
  if (T == 0.0) {
    return eps_n < 0.0 ? -uc().z_S * eps_n : 0.0;
  }
  const double kT = uc().k_B * T;
  return uc().z_S * kT * softplus(-eps_n / kT);
}

TedCurve ted_curve(const TedSpec& spec) {
  if (!(spec.T >= 0.0)) {
    throw Error(ErrorKind::DomainError, "temperature must be >= 0 K");
  }
  if (spec.samples < 64) {
    throw Error(ErrorKind::DomainError, "sample count must be >= 64");
  }
  const double d = emission::decay_width(emission::BarrierKind::SchottkyNordheim,
                                         spec.phi, spec.F, spec.variant);
  const double kT = uc().k_B * spec.T;
  const double p = kT / d;
  if (p >= spec.pole_guard) {
    throw Error(ErrorKind::TemperatureRegimeError,
                "Swanson-Bell parameter p = " + std::to_string(p) +
                    " at or beyond the guard " + std::to_string(spec.pole_guard));
  }
  const bool cold = p < kZeroTempP;

  // Unnormalized density: exp(eps/d) times the Fermi-Dirac occupation. At
  // zero temperature the occupation is a step at the Fermi level.
  auto density = [&](double e) {
    if (cold) return e <= 0.0 ? std::exp(e / d) : 0.0;
    return std::exp(e / d) / (1.0 + std::exp(e / kT));
  };
  // Single interior maximum of the unimodal form (support edge when cold).
  const double peak_guess = cold ? 0.0 : kT * std::log(p / (1.0 - p));
  const double g_peak = density(cold ? 0.0 : peak_guess);

  double lo = spec.window_lo_eV.value_or(-10.0 * d);
  double hi = spec.window_hi_eV.value_or(cold ? 0.0 : 10.0 * kT + 5.0 * d);
  if (!(lo < 0.0) || hi < 0.0) {
    throw Error(ErrorKind::DomainError, "energy window must contain 0");
  }
  if (cold) hi = 0.0;  // support ends at the Fermi level
  // Widen until both tails are below 1e-6 of the peak.
  for (int i = 0; i < 200 && density(lo) > 1e-6 * g_peak; ++i) lo -= 2.0 * d;
  if (!cold) {
    for (int i = 0; i < 200 && density(hi) > 1e-6 * g_peak; ++i) hi += 2.0 * (kT + d);
  }

  // Refine the grid until the sharpest feature is well resolved; keep the
  // count odd for Simpson. The cold curve ends with a full-height sample at
  // the support edge, where the trapezoid rule loses its endpoint error
  // cancellation, so it needs a much finer step for the 1e-6 residual.
  const double step = cold ? d / 500.0 : std::min(d, kT) / 12.0;
  int n = std::max(spec.samples, static_cast<int>(std::ceil((hi - lo) / step)) + 1);
  n = std::min(n, 1000001);
  if (n % 2 == 0) ++n;

  TedCurve curve;
  curve.d_F_eV = d;
  curve.p = p;
  curve.samples.reserve(static_cast<std::size_t>(n));
  const double h = (hi - lo) / static_cast<double>(n - 1);
  for (int i = 0; i < n; ++i) {
    const double e = lo + h * i;
    curve.samples.push_back({e, density(e)});
  }
  const double norm = trapezoid(curve.samples);
  for (auto& s : curve.samples) s.density_per_eV /= norm;
  curve.normalization_residual = std::fabs(simpson(curve.samples) - 1.0);

  if (cold) {
    curve.peak_energy_eV = 0.0;
    // Right half-max crossing is the support edge at 0.
    const double left =
        bisect(density, lo, 0.0, 0.5 * g_peak, /*rising=*/true, 1e-9);
    curve.fwhm_eV = 0.0 - left;
  } else {
    // Peak by golden section on the bracket around the sampled maximum.
    const auto max_it =
        std::max_element(curve.samples.begin(), curve.samples.end(),
                         [](const TedSample& a, const TedSample& b) {
                           return a.density_per_eV < b.density_per_eV;
                         });
    const std::size_t k = static_cast<std::size_t>(max_it - curve.samples.begin());
    const double bl = curve.samples[k > 0 ? k - 1 : k].energy_eV;
    const double br = curve.samples[std::min(k + 1, curve.samples.size() - 1)].energy_eV;
    curve.peak_energy_eV = golden_max(density, bl, br);
    const double half = 0.5 * density(curve.peak_energy_eV);
    const double left =
        bisect(density, lo, curve.peak_energy_eV, half, /*rising=*/true, 1e-9);
    const double right =
        bisect(density, curve.peak_energy_eV, hi, half, /*rising=*/false, 1e-9);
    curve.fwhm_eV = right - left;
  }
  return curve;
}

double fwhm(const TedCurve& curve) {
  const auto& s = curve.samples;
  if (s.size() < 3) {
    throw Error(ErrorKind::DomainError, "curve has too few samples");
  }
  double peak = 0.0;
  for (const auto& q : s) peak = std::max(peak, q.density_per_eV);
  const double half = 0.5 * peak;

  std::vector<double> crossings;
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    const double a = s[i].density_per_eV - half;
    const double b = s[i + 1].density_per_eV - half;
    if (a == 0.0) crossings.push_back(s[i].energy_eV);
    if ((a < 0.0 && b > 0.0) || (a > 0.0 && b < 0.0)) {
      const double t = a / (a - b);
      crossings.push_back(s[i].energy_eV + t * (s[i + 1].energy_eV - s[i].energy_eV));
    }
  }
  if (crossings.size() > 2) {
    throw Error(ErrorKind::MultiPeak,
                std::to_string(crossings.size()) + " half-maximum crossings");
  }
  if (crossings.empty()) {
    throw Error(ErrorKind::DomainError, "no half-maximum crossing inside the window");
  }
  // A curve that ends above half maximum (cold support edge) uses the window
  // boundary as the missing crossing.
  const double left = crossings.front();
  const double right = crossings.size() == 2 ? crossings.back() : s.back().energy_eV;
  return right - left;
}

double practical_brightness(double I_m_A, double A_f_SN_nm2, double d_F_eV) {
  if (!(I_m_A > 0.0) || !(A_f_SN_nm2 > 0.0) || !(d_F_eV > 0.0)) {
    throw Error(ErrorKind::NonPositiveInput,
                "current, area and decay width must all be > 0");
  }
  const double j_per_m2 = I_m_A / A_f_SN_nm2 * constants::kPerNm2ToPerM2;
  return 1.44 * j_per_m2 / (std::numbers::pi * d_F_eV);
}

}  // namespace emg::ted
