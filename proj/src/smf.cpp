#include "emg/smf.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace emg::smf {

namespace {

[[noreturn]] void domain_error(const char* fn, double x) {
  throw Error(ErrorKind::DomainError,
              std::string(fn) + " argument out of range (x = " + std::to_string(x) + ")");
}

// Unit interval check written so NaN fails too.
bool in_closed_unit(double x) { return x >= 0.0 && x <= 1.0; }
bool in_half_open_unit(double x) { return x > 0.0 && x <= 1.0; }

}  // namespace

const HpCoefficients& hp_coefficients() noexcept {
  static const HpCoefficients k = {
      // p1..p4
      {0.0, 0.03270530446, 0.009157798739, 0.002644272807, 0.00008987173811},
      // q1..q4
      {0.0, 0.1874993441, 0.01750636947, 0.005527069444, 0.001023904180},
      // s0..s5
      {0.0532499727, 0.02422225959, 0.01512205958, 0.007550739834,
       0.0006391728659, -0.00004881974589},
      // t0..t4   (t0 = 3/16 exactly)
      {0.1875, 0.03515555874, 0.01912752680, 0.01152284009, 0.003624569427},
      // u(1) = 3*pi/(8*sqrt(2))
      3.0 * std::numbers::pi / (8.0 * std::numbers::sqrt2),
  };
  return k;
}

double v_fd(double x, Variant variant) {
  if (!in_closed_unit(x)) domain_error("v_fd", x);
  if (x == 0.0) return 1.0;  // x ln x -> 0
  const double lnx = std::log(x);
  if (variant == Variant::SimpleGood) {
    return 1.0 - x + (1.0 / 6.0) * x * lnx;
  }
  const HpCoefficients& k = hp_coefficients();
  const double psum =
      1.0 + x * (k.p[1] + x * (k.p[2] + x * (k.p[3] + x * k.p[4])));
  const double qsum = k.q[1] + x * (k.q[2] + x * (k.q[3] + x * k.q[4]));
  return (1.0 - x) * psum + x * lnx * qsum;
}

double u_fd(double x, Variant variant) {
  if (!in_half_open_unit(x)) domain_error("u_fd", x);
  const double lnx = std::log(x);
  if (variant == Variant::SimpleGood) {
    return 5.0 / 6.0 - lnx / 6.0;
  }
  const HpCoefficients& k = hp_coefficients();
  const double ssum =
      k.s[0] +
      x * (k.s[1] + x * (k.s[2] + x * (k.s[3] + x * (k.s[4] + x * k.s[5]))));
  const double tsum =
      k.t[0] + x * (k.t[1] + x * (k.t[2] + x * (k.t[3] + x * k.t[4])));
  return k.u_at_one - (1.0 - x) * ssum - lnx * tsum;
}

double t_fd(double x, Variant variant) {
  if (!in_half_open_unit(x)) domain_error("t_fd", x);
  return v_fd(x, variant) + (4.0 / 3.0) * x * u_fd(x, variant);
}

double s_fd(double x, Variant variant) {
  if (!in_closed_unit(x)) domain_error("s_fd", x);
  if (x == 0.0) return 1.0;  // x*u -> 0 in both variants
  return v_fd(x, variant) + x * u_fd(x, variant);
}

double r_fd(double eta, double x, Variant variant) {
  if (!(eta >= 0.0)) {
    throw Error(ErrorKind::DomainError,
                "r_fd requires eta >= 0 (got " + std::to_string(eta) + ")");
  }
  if (eta == 0.0) {
    if (!in_half_open_unit(x)) domain_error("r_fd", x);
    return 1.0;
  }
  return std::exp(eta * u_fd(x, variant));
}

double series_v_loworder(double x) {
  if (!(x >= 0.0 && x <= 0.2)) domain_error("series_v_loworder", x);
  if (x == 0.0) return 1.0;
  const double ln2 = std::numbers::ln2;
  // Printed low-order terms of the exact double-series expansion.
  const double c1 = (9.0 / 8.0) * ln2 + 3.0 / 16.0;
  const double c2 = (27.0 / 256.0) * ln2 - 51.0 / 1024.0;
  const double c3 = (315.0 / 8192.0) * ln2 - 177.0 / 8192.0;
  const double poly = 1.0 - x * (c1 + x * (c2 + x * c3));
  const double logpart =
      x * std::log(x) * (3.0 / 16.0 + x * (9.0 / 512.0 + x * (105.0 / 16384.0)));
  return poly + logpart;
}

double nordheim_y_from_f(double f) {
  if (!(f >= 0.0)) domain_error("nordheim_y_from_f", f);
  return std::sqrt(f);
}

}  // namespace emg::smf
