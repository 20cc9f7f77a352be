#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>
#include <random>

#include "emg/constants.hpp"
#include "emg/emission.hpp"
#include "emg/extract.hpp"
#include "emg/fnfit.hpp"

using namespace emg;
using namespace emg::extract;

namespace {

void check_kind(ErrorKind kind, const std::function<void()>& fn) {
  try {
    fn();
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == kind);
  }
}

fnfit::FNFitResult reference_fit() {
  return fnfit::from_line_parameters(-19.38, -3329.0, 362.0, 390.0);
}

ExtractionConfig reference_config() {
  ExtractionConfig c;
  c.phi = 2.5;
  return c;
}

}  // namespace

TEST_CASE("fixed-point iteration on the reference fixture") {
  const auto cfg = reference_config();
  const auto pt = iterate_beta(376.0, -3329.0, 2.5, cfg);
  // Frozen from an independent run of the same two-map composition.
  CHECK(pt.beta == doctest::Approx(7.238394e-3).epsilon(1e-4));
  CHECK(pt.f_t == doctest::Approx(0.627049).epsilon(1e-4));
  CHECK(pt.s_t == doctest::Approx(0.892421).epsilon(1e-4));
  CHECK(pt.r_t == doctest::Approx(282.970).epsilon(1e-4));
  CHECK(pt.F_t == doctest::Approx(2.72164).epsilon(1e-4));
  CHECK(pt.converged);
  CHECK(pt.iterations <= 10);

  // Published rounded values for the same inputs.
  CHECK(std::fabs(pt.beta - 7.26e-3) <= 0.015 * 7.26e-3);
  CHECK(std::fabs(pt.f_t - 0.629) <= 0.01);
  CHECK(std::fabs(pt.s_t - 0.892) <= 0.002);
}

TEST_CASE("fixed point is independent of the starting value") {
  auto cfg = reference_config();
  std::vector<double> betas;
  for (double start : {1e-4, 1e-3, 1e-2}) {
    cfg.beta_start = start;
    betas.push_back(iterate_beta(376.0, -3329.0, 2.5, cfg).beta);
  }
  for (double b : betas) {
    CHECK(std::fabs(b - betas[0]) <= 10.0 * cfg.convergence_tol * betas[0]);
  }
}

TEST_CASE("fixed-point residual is within tolerance at convergence") {
  const auto cfg = reference_config();
  for (double vt : {362.0, 376.0, 390.0}) {
    const auto pt = iterate_beta(vt, -3329.0, 2.5, cfg);
    const double b = constants::kUniversal.b;
    const double residual = pt.beta * -3329.0 + pt.s_t * b * 2.5 * std::sqrt(2.5);
    CHECK(std::fabs(residual) <= cfg.convergence_tol * std::fabs(pt.beta * 3329.0));
  }
}

TEST_CASE("simple-good variant lands on the published conversion factor") {
  auto cfg = reference_config();
  cfg.variant = smf::Variant::SimpleGood;
  const auto pt = iterate_beta(376.0, -3329.0, 2.5, cfg);
  CHECK(pt.beta == doctest::Approx(7.26069e-3).epsilon(1e-4));
  CHECK(pt.f_t == doctest::Approx(0.628981).epsilon(1e-4));
}

TEST_CASE("iteration error paths") {
  auto cfg = reference_config();
  cfg.max_iterations = 2;
  check_kind(ErrorKind::NonConvergence, [&] { iterate_beta(376.0, -3329.0, 2.5, cfg); });

  const auto cfg2 = reference_config();
  check_kind(ErrorKind::ScaledFieldOutOfRange,
             [&] { iterate_beta(376.0, -100.0, 2.5, cfg2); });
  check_kind(ErrorKind::PositiveSlope, [&] { iterate_beta(376.0, 3329.0, 2.5, cfg2); });
  check_kind(ErrorKind::NonPositiveWorkFunction,
             [&] { iterate_beta(376.0, -3329.0, -2.5, cfg2); });
}

TEST_CASE("absolute-tolerance mode converges to the same fixed point") {
  auto cfg = reference_config();
  cfg.absolute_tol = true;
  cfg.convergence_tol = 1e-9;
  const auto pt = iterate_beta(376.0, -3329.0, 2.5, cfg);
  CHECK(pt.beta == doctest::Approx(7.238394e-3).epsilon(1e-5));
}

TEST_CASE("extraction at the mid-range voltage") {
  const auto fit = reference_fit();
  const auto cfg = reference_config();
  const auto res = extract_at(fit, 376.0, cfg);

  CHECK(res.A_f_ET_nm2 == doctest::Approx(94.4585).epsilon(1e-4));
  CHECK(res.A_f_SN_nm2 == doctest::Approx(0.419142).epsilon(1e-4));
  CHECK(res.point.rt_st2 == doctest::Approx(225.361).epsilon(1e-4));
  CHECK(res.d_F_SN_eV == doctest::Approx(0.155248).epsilon(1e-4));

  // Published rounded values.
  CHECK(std::fabs(res.A_f_ET_nm2 - 90.0) <= 9.0);
  CHECK(std::fabs(res.A_f_SN_nm2 - 0.46) <= 0.069);
  CHECK(std::fabs(res.point.rt_st2 - 224.0) <= 6.72);

  // Structural identities.
  CHECK(res.A_f_ET_nm2 / res.A_f_SN_nm2 ==
        doctest::Approx(res.point.rt_st2).epsilon(1e-14));
  CHECK(res.Lambda_ET_nm2_per_A ==
        doctest::Approx(res.Lambda_SN_nm2_per_A * res.point.rt_st2).epsilon(1e-14));
  CHECK(res.A_f_ET_nm2 == doctest::Approx(res.Lambda_ET_nm2_per_A * fit.RS2).epsilon(1e-14));

  // The triangular-barrier area is what the corrections collapse to at
  // r = s = 1.
  CHECK(res.A_f_SN_nm2 * res.point.rt_st2 ==
        doctest::Approx(res.A_f_ET_nm2).epsilon(1e-14));

  // Advisory warnings: this fixture sits above the orthodoxy pass band.
  bool found = false;
  for (const auto& w : res.warnings) {
    if (w.find("orthodoxy") != std::string::npos) found = true;
  }
  CHECK(found);
}

TEST_CASE("extracted current density and brightness from a measured point") {
  const auto fit = reference_fit();
  const auto cfg = reference_config();
  const auto ds = fnfit::make_dataset(
      {{362.0, 5.2e-8}, {376.0, 7.5e-8}, {390.0, 1.05e-7}}, "hfc");
  const auto res = extract_at(fit, 376.0, cfg, &ds);
  CHECK(res.J_extr_A_per_nm2 ==
        doctest::Approx(7.5e-8 / res.A_f_SN_nm2).epsilon(1e-12));
  // Order of magnitude 5e11 for this fixture.
  CHECK(res.B_pract == doctest::Approx(5.283e11).epsilon(1e-3));
  CHECK(res.B_pract > 1e11);
  CHECK(res.B_pract < 1e12);
}

TEST_CASE("current lookup policy") {
  const auto fit = reference_fit();
  auto cfg = reference_config();
  const auto ds = fnfit::make_dataset(
      {{362.0, 5.2e-8}, {370.0, 6.4e-8}, {384.0, 9.1e-8}, {390.0, 1.05e-7}}, "");

  SUBCASE("exact point wins") {
    CHECK(current_at(fit, &ds, 370.0, cfg) == 6.4e-8);
  }
  SUBCASE("interpolation is log-linear in FN coordinates") {
    // Between 370 and 384 with data generated from the fitted line the
    // interpolation must reproduce the line value closely.
    const auto line_ds = fnfit::make_dataset(
        {{362.0, fnfit::current_on_line(fit, 362.0)},
         {370.0, fnfit::current_on_line(fit, 370.0)},
         {384.0, fnfit::current_on_line(fit, 384.0)},
         {390.0, fnfit::current_on_line(fit, 390.0)}},
        "");
    const double got = current_at(fit, &line_ds, 376.0, cfg);
    CHECK(got == doctest::Approx(fnfit::current_on_line(fit, 376.0)).epsilon(1e-9));
  }
  SUBCASE("fitted-line fallback") {
    CHECK(current_at(fit, nullptr, 376.0, cfg) ==
          doctest::Approx(fnfit::current_on_line(fit, 376.0)).epsilon(1e-14));
  }
  SUBCASE("measured-only policy reports missing current") {
    cfg.current_policy = CurrentPolicy::MeasuredOnly;
    check_kind(ErrorKind::MissingCurrent, [&] { current_at(fit, nullptr, 376.0, cfg); });
  }
  SUBCASE("explicit override at the mid-range voltage") {
    cfg.current_at_vmid_A = 7.5e-8;
    CHECK(current_at(fit, nullptr, 376.0, cfg) == 7.5e-8);
    CHECK(current_at(fit, nullptr, 380.0, cfg) ==
          doctest::Approx(fnfit::current_on_line(fit, 380.0)).epsilon(1e-14));
  }
}

TEST_CASE("sweep across the measured range") {
  const auto fit = reference_fit();
  const auto cfg = reference_config();
  const auto entries = sweep(fit, cfg);
  REQUIRE(entries.size() == 21);

  double prev_v = 0.0;
  double prev_beta = 1.0;
  double prev_area = 0.0;
  int mid_index = -1;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    REQUIRE(e.result.has_value());
    CHECK(e.V_t > prev_v);
    CHECK(e.V_t >= fit.V_min);
    CHECK(e.V_t <= fit.V_max);
    // Monotone along the sweep: beta falls, the formal area grows.
    CHECK(e.result->point.beta < prev_beta);
    CHECK(e.result->A_f_SN_nm2 > prev_area);
    prev_v = e.V_t;
    prev_beta = e.result->point.beta;
    prev_area = e.result->A_f_SN_nm2;
    if (e.V_t == fit.V_mid) mid_index = static_cast<int>(i);
  }
  REQUIRE(mid_index >= 0);
  const auto direct = extract_at(fit, fit.V_mid, cfg);
  CHECK(entries[mid_index].result->point.beta == direct.point.beta);

  // Relative spans match the published behaviour: about 1% in beta and
  // about 10% in area.
  const double beta_span =
      (entries.front().result->point.beta - entries.back().result->point.beta) /
      direct.point.beta;
  const double area_span =
      (entries.back().result->A_f_SN_nm2 - entries.front().result->A_f_SN_nm2) /
      direct.A_f_SN_nm2;
  CHECK(beta_span >= 0.005);
  CHECK(beta_span <= 0.02);
  CHECK(area_span >= 0.05);
  CHECK(area_span <= 0.15);
}

TEST_CASE("sweep grids") {
  const auto fit = reference_fit();
  auto cfg = reference_config();

  SUBCASE("single-point grid is the definitive point") {
    cfg.vt_grid.auto_count = 1;
    const auto entries = sweep(fit, cfg);
    REQUIRE(entries.size() == 1);
    CHECK(entries[0].V_t == fit.V_mid);
  }
  SUBCASE("the mid-range voltage is inserted when missing") {
    cfg.vt_grid.explicit_values = {365.0, 385.0};
    const auto entries = sweep(fit, cfg);
    REQUIRE(entries.size() == 3);
    CHECK(entries[1].V_t == fit.V_mid);
  }
  SUBCASE("grid outside the measured range is rejected") {
    cfg.vt_grid.explicit_values = {100.0};
    check_kind(ErrorKind::DomainError, [&] { sweep(fit, cfg); });
  }
  SUBCASE("per-point failures are collected, not fatal") {
    cfg.max_iterations = 2;
    const auto entries = sweep(fit, cfg);
    CHECK(entries.size() == 21);
    for (const auto& e : entries) {
      CHECK(!e.result.has_value());
      CHECK(e.error.find("NonConvergence") != std::string::npos);
    }
  }
}

TEST_CASE("area error bound from the fitting-voltage choice") {
  const auto fit = reference_fit();
  const auto cfg = reference_config();
  const auto bound = area_error_bound(fit, cfg);
  CHECK(bound.relative_bound == doctest::Approx(0.041534).epsilon(1e-3));
  CHECK(bound.A_at_Vmid_nm2 == doctest::Approx(0.419142).epsilon(1e-4));
  CHECK(bound.A_at_Vmax_nm2 == doctest::Approx(0.436551).epsilon(1e-4));
  // Published bound is 6 %, with its own rounding chain; stay within +/- 2
  // percentage points of it.
  CHECK(bound.relative_bound >= 0.04);
  CHECK(bound.relative_bound <= 0.08);

  // Degenerate range: V_max == V_mid.
  const auto flat = fnfit::from_line_parameters(-19.38, -3329.0, 376.0, 376.0);
  CHECK(area_error_bound(flat, cfg).relative_bound == 0.0);
}

TEST_CASE("formal area efficiency") {
  CHECK(formal_area_efficiency(8e6, 0.92 * constants::kNm2PerMm2) ==
        doctest::Approx(8.6957e-6).epsilon(1e-4));
  CHECK(formal_area_efficiency(2.3e4, 500.0 * constants::kNm2PerMm2) ==
        doctest::Approx(4.6e-11).epsilon(1e-6));
  CHECK(formal_area_efficiency(1.0, 1.0) == 1.0);
  check_kind(ErrorKind::NonPositiveArea, [] { formal_area_efficiency(0.0, 1.0); });
  check_kind(ErrorKind::NonPositiveArea, [] { formal_area_efficiency(1.0, -2.0); });
}

TEST_CASE("synthetic forward model") {
  std::vector<double> voltages;
  for (int i = 0; i < 15; ++i) voltages.push_back(362.0 + 2.0 * i);
  const auto ds = synthesize_emg_iv(0.46, 7.26e-3, 2.5, voltages);
  REQUIRE(ds.points.size() == 15);

  // Strictly increasing current.
  for (std::size_t i = 1; i < ds.points.size(); ++i) {
    CHECK(ds.points[i].current_A > ds.points[i - 1].current_A);
  }
  // Every point lies exactly on the theoretical curve in FN coordinates.
  for (const auto& p : ds.points) {
    const double f = emission::scaled_field(2.5, 7.26e-3 * p.voltage_V);
    const double expect = std::log(0.46 * constants::kUniversal.a / 2.5 *
                                   std::pow(7.26e-3, 2)) -
                          smf::v_fd(f) * constants::kUniversal.b * 2.5 *
                              std::sqrt(2.5) / (7.26e-3 * p.voltage_V);
    CHECK(std::log(p.current_A / (p.voltage_V * p.voltage_V)) ==
          doctest::Approx(expect).epsilon(1e-12));
  }

  check_kind(ErrorKind::ScaledFieldOutOfRange,
             [] { synthesize_emg_iv(0.46, 7.26e-3, 2.5, {6000.0}); });
  check_kind(ErrorKind::NonPositiveInput,
             [] { synthesize_emg_iv(-1.0, 7.26e-3, 2.5, {376.0}); });
}

TEST_CASE("round trip: synthesize, fit, extract") {
  std::vector<double> voltages;
  for (int i = 0; i < 15; ++i) voltages.push_back(362.0 + 2.0 * i);
  const auto ds = synthesize_emg_iv(0.46, 7.26e-3, 2.5, voltages);
  const auto fit = fnfit::fit_dataset(ds);
  CHECK(fit.S_expt < 0.0);
  const auto res = extract_at(fit, fit.V_mid, reference_config(), &ds);
  CHECK(std::fabs(res.point.beta - 7.26e-3) <= 0.01 * 7.26e-3);
  CHECK(std::fabs(res.A_f_SN_nm2 - 0.46) <= 0.12 * 0.46);
}

TEST_CASE("round trip holds across randomized generators") {
  std::mt19937 rng(20240817u);
  std::uniform_real_distribution<double> phi_dist(2.0, 5.0);
  std::uniform_real_distribution<double> beta_dist(2e-3, 1e-2);
  std::uniform_real_distribution<double> fmid_dist(0.55, 0.65);
  std::uniform_real_distribution<double> logA_dist(-1.0, 2.0);

  for (int trial = 0; trial < 8; ++trial) {
    const double phi = phi_dist(rng);
    const double beta = beta_dist(rng);
    const double f_mid = fmid_dist(rng);
    const double area = std::pow(10.0, logA_dist(rng));
    const double v_mid = f_mid * (phi * phi / constants::kUniversal.c2) / beta;

    std::vector<double> voltages;
    for (int i = 0; i < 13; ++i) {
      voltages.push_back(v_mid * (0.96 + 0.08 * i / 12.0));
    }
    const auto ds = synthesize_emg_iv(area, beta, phi, voltages);
    const auto fit = fnfit::fit_dataset(ds);
    ExtractionConfig cfg;
    cfg.phi = phi;
    const auto res = extract_at(fit, fit.V_mid, cfg, &ds);
    CHECK(std::fabs(res.point.beta - beta) <= 0.01 * beta);
    CHECK(std::fabs(res.A_f_SN_nm2 - area) <= 0.12 * area);
  }
}
