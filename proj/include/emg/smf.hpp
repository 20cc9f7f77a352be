#pragma once

#include "emg/errors.hpp"

namespace emg::smf {

/// Which approximation family evaluates the barrier correction functions.
/// SimpleGood is the closed-form v = 1 - x + (1/6) x ln x family (absolute
/// accuracy better than 0.0024 on [0,1]); HighPrecision is the fitted
/// polynomial family (max error ~8e-10) and is the default everywhere
/// downstream.
enum class Variant {
  SimpleGood,
  HighPrecision,
};

/// Fitted coefficients of the high-precision v and u formulae.
/// Index ranges follow the published table: p[1..4], q[1..4], s[0..5],
/// t[0..4]; unused slots are zero.
struct HpCoefficients {
  double p[5];
  double q[5];
  double s[6];
  double t[5];
  double u_at_one;  ///< u(1) = 3*pi/(8*sqrt(2))
};

const HpCoefficients& hp_coefficients() noexcept;

/// Principal barrier function v(x), x in [0,1]. v(0)=1, v(1)=0.
double v_fd(double x, Variant variant = Variant::HighPrecision);

/// u(x) = -dv/dx, x in (0,1]. Diverges logarithmically at 0.
double u_fd(double x, Variant variant = Variant::HighPrecision);

/// Pre-exponential correction t(x) = v + (4/3) x u, x in (0,1].
double t_fd(double x, Variant variant = Variant::HighPrecision);

/// Slope correction s(x) = v + x u, x in [0,1] (the x=0 limit is 1).
double s_fd(double x, Variant variant = Variant::HighPrecision);

/// Intercept correction r(eta, x) = exp(eta * u(x)), eta >= 0, x in (0,1].
double r_fd(double eta, double x, Variant variant = Variant::HighPrecision);

/// Low-order exact series for v, valid only near 0 (domain [0, 0.2]).
/// Test oracle; independent of the two approximation families.
double series_v_loworder(double x);

/// Legacy-variable helper: y = sqrt(f). The toolkit itself never consumes y.
double nordheim_y_from_f(double f);

}  // namespace emg::smf
