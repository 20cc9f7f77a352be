#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>

#include "emg/constants.hpp"
#include "emg/emission.hpp"
#include "emg/ted.hpp"
#include "oracles.hpp"

using namespace emg;
using constants::kUniversal;

namespace {
void check_kind(ErrorKind kind, const std::function<void()>& fn) {
  try {
    fn();
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == kind);
  }
}

ted::TedSpec reference_spec() {
  ted::TedSpec spec;
  spec.phi = 2.5;
  spec.T = 300.0;
  spec.F = 2.8;
  return spec;
}

double trapezoid_mass(const ted::TedCurve& c) {
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < c.samples.size(); ++i) {
    sum += 0.5 * (c.samples[i].density_per_eV + c.samples[i + 1].density_per_eV) *
           (c.samples[i + 1].energy_eV - c.samples[i].energy_eV);
  }
  return sum;
}
}  // namespace

TEST_CASE("incident normal-energy distribution") {
  const double kT = kUniversal.k_B * 300.0;
  CHECK(ted::ined(300.0, 0.0) ==
        doctest::Approx(kUniversal.z_S * kT * std::log(2.0)).epsilon(1e-12));
  // Degenerate supply for energies far below the Fermi level.
  CHECK(ted::ined(300.0, -0.5) == doctest::Approx(kUniversal.z_S * 0.5).epsilon(1e-6));
  // Boltzmann tail far above.
  CHECK(ted::ined(300.0, 0.5) ==
        doctest::Approx(kUniversal.z_S * kT * std::exp(-0.5 / kT)).epsilon(1e-6));
  // Zero-temperature limit.
  CHECK(ted::ined(0.0, -0.5) == kUniversal.z_S * 0.5);
  CHECK(ted::ined(0.0, 0.5) == 0.0);
  check_kind(ErrorKind::DomainError, [] { ted::ined(-1.0, 0.0); });
}

TEST_CASE("room-temperature curve for the reference emitter") {
  const auto curve = ted::ted_curve(reference_spec());
  CHECK(curve.d_F_eV == doctest::Approx(0.1594912).epsilon(1e-6));
  CHECK(curve.p == doctest::Approx(0.1620904).epsilon(1e-5));
  CHECK(curve.normalization_residual <= 1e-6);
  CHECK(std::fabs(trapezoid_mass(curve) - 1.0) <= 1e-9);

  // Single peak slightly below the Fermi level; analytic location is
  // kT ln(p/(1-p)).
  const double kT = kUniversal.k_B * 300.0;
  const double expect_peak = kT * std::log(curve.p / (1.0 - curve.p));
  CHECK(curve.peak_energy_eV < 0.0);
  CHECK(curve.peak_energy_eV == doctest::Approx(expect_peak).epsilon(1e-4));

  // Frozen from an independent bisection on the analytic density.
  CHECK(curve.fwhm_eV == doctest::Approx(0.2062516).epsilon(1e-4));

  // The high-energy flank is the steeper one: the half-maximum point sits
  // closer to the peak on the right than on the left.
  double half = 0.0;
  for (const auto& s : curve.samples) half = std::max(half, s.density_per_eV);
  half *= 0.5;
  double left = 0.0, right = 0.0;
  for (std::size_t i = 0; i + 1 < curve.samples.size(); ++i) {
    const double a = curve.samples[i].density_per_eV - half;
    const double b = curve.samples[i + 1].density_per_eV - half;
    if (a < 0.0 && b >= 0.0) left = curve.samples[i].energy_eV;
    if (a >= 0.0 && b < 0.0) right = curve.samples[i + 1].energy_eV;
  }
  CHECK(left < curve.peak_energy_eV);
  CHECK(right > curve.peak_energy_eV);
  CHECK(right - curve.peak_energy_eV < curve.peak_energy_eV - left);

  // Density is non-negative, vanishing at the window ends.
  CHECK(curve.samples.front().density_per_eV <= 1e-5);
  CHECK(curve.samples.back().density_per_eV <= 1e-5);
  for (const auto& s : curve.samples) CHECK(s.density_per_eV >= 0.0);
}

TEST_CASE("zero-temperature curve is the bare exponential") {
  auto spec = reference_spec();
  spec.T = 0.0;
  const auto curve = ted::ted_curve(spec);
  CHECK(curve.fwhm_eV ==
        doctest::Approx(curve.d_F_eV * std::log(2.0)).epsilon(1e-9));
  CHECK(curve.peak_energy_eV == 0.0);
  CHECK(curve.normalization_residual <= 1e-6);
  CHECK(curve.samples.back().energy_eV == 0.0);

  // The sampled-curve width agrees with the analytic one.
  CHECK(ted::fwhm(curve) ==
        doctest::Approx(curve.d_F_eV * std::log(2.0)).epsilon(1e-4));
}

TEST_CASE("unnormalized integral equals decay width times temperature factor") {
  // This is the one-dimensional collapse of the emitted-current integral.
  const double d = 0.16;
  for (double p : {0.1, 0.3, 0.5}) {
    const double kT = p * d;
    const double T = kT / kUniversal.k_B;
    auto integrand = [&](double e) {
      return std::exp(e / d) / (1.0 + std::exp(e / kT));
    };
    const double lo = -40.0 * d;
    const double hi = 40.0 * (kT + d);
    const double integral = oracle::simpson(integrand, lo, hi, 200000);
    const double expect = d * emission::temperature_factor(p);
    CHECK(std::fabs(integral - expect) <= 1e-6 * expect);
    (void)T;
  }
}

TEST_CASE("thermal broadening is strictly monotone in temperature") {
  auto spec = reference_spec();
  double prev = 0.0;
  for (double T : {0.0, 100.0, 200.0, 300.0, 400.0}) {
    spec.T = T;
    const auto curve = ted::ted_curve(spec);
    CHECK(curve.fwhm_eV > prev);
    CHECK(curve.normalization_residual <= 1e-6);
    prev = curve.fwhm_eV;
  }
}

TEST_CASE("sampled-curve width matches the analytic width when warm") {
  const auto curve = ted::ted_curve(reference_spec());
  CHECK(ted::fwhm(curve) == doctest::Approx(curve.fwhm_eV).epsilon(1e-4));
}

TEST_CASE("multi-peaked input is rejected by the width reader") {
  ted::TedCurve fake;
  fake.d_F_eV = 0.1;
  fake.p = 0.0;
  fake.fwhm_eV = 0.0;
  fake.peak_energy_eV = 0.0;
  fake.normalization_residual = 0.0;
  for (int i = 0; i <= 400; ++i) {
    const double e = -2.0 + i * 0.01;
    const double two_bumps =
        std::exp(-std::pow((e + 1.0) / 0.2, 2)) + std::exp(-std::pow((e - 1.0) / 0.2, 2));
    fake.samples.push_back({e, two_bumps});
  }
  check_kind(ErrorKind::MultiPeak, [&] { ted::fwhm(fake); });
}

TEST_CASE("regime and domain errors") {
  auto spec = reference_spec();
  spec.T = 2500.0;  // pushes p past the pole guard for this decay width
  check_kind(ErrorKind::TemperatureRegimeError, [&] { ted::ted_curve(spec); });

  auto strong = reference_spec();
  strong.F = 10.0;  // beyond the reference field
  check_kind(ErrorKind::ScaledFieldOutOfRange, [&] { ted::ted_curve(strong); });

  auto few = reference_spec();
  few.samples = 10;
  check_kind(ErrorKind::DomainError, [&] { ted::ted_curve(few); });

  auto bad_window = reference_spec();
  bad_window.window_lo_eV = 0.5;  // does not contain 0
  check_kind(ErrorKind::DomainError, [&] { ted::ted_curve(bad_window); });
}

TEST_CASE("practical brightness") {
  // Chained from the published fixture: I = 75 nA, A = 0.46 nm^2,
  // d_F = 0.155151 eV.
  CHECK(ted::practical_brightness(75e-9, 0.46, 0.155151) ==
        doctest::Approx(4.81683e11).epsilon(1e-5));
  // Linear in the current.
  CHECK(ted::practical_brightness(150e-9, 0.46, 0.155151) ==
        doctest::Approx(2.0 * ted::practical_brightness(75e-9, 0.46, 0.155151))
            .epsilon(1e-12));
  check_kind(ErrorKind::NonPositiveInput, [] { ted::practical_brightness(0.0, 1.0, 1.0); });
  check_kind(ErrorKind::NonPositiveInput, [] { ted::practical_brightness(1.0, -1.0, 1.0); });
  check_kind(ErrorKind::NonPositiveInput, [] { ted::practical_brightness(1.0, 1.0, 0.0); });
}
