#include "emg/emission.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "emg/constants.hpp"

namespace emg::emission {

namespace {

const constants::UniversalConstants& uc() { return constants::kUniversal; }

void require_positive(double v, const char* name) {
  if (!(v > 0.0)) {
    throw Error(ErrorKind::DomainError,
                std::string(name) + " must be > 0 (got " + std::to_string(v) + ")");
  }
}

double checked_scaled_field(double H, double F) {
  const double f = uc().c2 * F / (H * H);
  if (!(f > 0.0 && f <= 1.0)) {
    throw Error(ErrorKind::ScaledFieldOutOfRange,
                "scaled field f = " + std::to_string(f) +
                    " outside (0, 1]; barrier top would be below the Fermi level");
  }
  return f;
}

}  // namespace

BarrierState barrier_state(double H, double F, double phi) {
  require_positive(H, "barrier height");
  require_positive(F, "field");
  require_positive(phi, "work function");
  return BarrierState{H, F, phi};
}

ThermalState thermal_state(double T, double d_F) {
  if (!(T >= 0.0)) {
    throw Error(ErrorKind::DomainError, "temperature must be >= 0 K");
  }
  require_positive(d_F, "decay width");
  return ThermalState{T, d_F, uc().k_B * T / d_F};
}

double motive_energy(BarrierKind kind, double H, double F, double z) {
  require_positive(H, "barrier height");
  require_positive(F, "field");
  if (kind == BarrierKind::ExactTriangular) {
    if (!(z >= 0.0)) {
      throw Error(ErrorKind::DomainError, "z must be >= 0 for the triangular barrier");
    }
    return H - F * z;
  }
  if (!(z > 0.0)) {
    throw Error(ErrorKind::DomainError,
                "z must be > 0 for the image-rounded barrier (image term singular at 0)");
  }
  // Image coefficient e^2/16*pi*eps0 = 1/(4 * four_pi_eps0) in customary units.
  const double image = 1.0 / (4.0 * uc().four_pi_eps0);
  return H - F * z - image / z;
}

double gamow(BarrierKind kind, double H, double F, smf::Variant variant) {
  require_positive(H, "barrier height");
  require_positive(F, "field");
  const double g_et = uc().b * H * std::sqrt(H) / F;
  if (kind == BarrierKind::ExactTriangular) return g_et;
  const double f_H = checked_scaled_field(H, F);
  return smf::v_fd(f_H, variant) * g_et;
}

double transmission(BarrierKind kind, double H, double F, smf::Variant variant) {
  return std::exp(-gamow(kind, H, F, variant));
}

double decay_width(BarrierKind kind, double phi, double F, smf::Variant variant) {
  require_positive(phi, "work function");
  require_positive(F, "field");
  const double d_et = uc().two_thirds_over_b * F / std::sqrt(phi);
  if (kind == BarrierKind::ExactTriangular) return d_et;
  const double f = checked_scaled_field(phi, F);
  return d_et / smf::t_fd(f, variant);
}

double temperature_factor(double p, double pole_guard) {
  if (!(p >= 0.0)) {
    throw Error(ErrorKind::DomainError, "Swanson-Bell parameter must be >= 0");
  }
  if (p >= pole_guard) {
    throw Error(ErrorKind::TemperatureRegimeError,
                "Swanson-Bell parameter p = " + std::to_string(p) +
                    " at or beyond the guard " + std::to_string(pole_guard) +
                    " (factor has a pole at p = 1)");
  }
  if (p == 0.0) return 1.0;
  const double pip = std::numbers::pi * p;
  return pip / std::sin(pip);
}

double lecd_elementary(double phi, double F) {
  require_positive(phi, "work function");
  require_positive(F, "field");
  return uc().a / phi * F * F * std::exp(-uc().b * phi * std::sqrt(phi) / F);
}

double lecd_mg(double phi, double T, double F, smf::Variant variant,
               double pole_guard) {
  require_positive(phi, "work function");
  require_positive(F, "field");
  const double f = checked_scaled_field(phi, F);
  const double t = smf::t_fd(f, variant);
  const double j0 = kernel_current_density(phi, F, variant) / (t * t);
  if (T == 0.0) return j0;
  const ThermalState ts =
      thermal_state(T, decay_width(BarrierKind::SchottkyNordheim, phi, F, variant));
  return temperature_factor(ts.p, pole_guard) * j0;
}

double kernel_current_density(double phi, double F, smf::Variant variant) {
  require_positive(phi, "work function");
  require_positive(F, "field");
  const double f = checked_scaled_field(phi, F);
  return uc().a / phi * F * F *
         std::exp(-smf::v_fd(f, variant) * uc().b * phi * std::sqrt(phi) / F);
}

double scaled_field(double phi, double F) {
  require_positive(phi, "work function");
  if (!(F >= 0.0)) {
    throw Error(ErrorKind::DomainError, "field must be >= 0");
  }
  return uc().c2 * F / (phi * phi);
}

double reference_field(double phi) {
  require_positive(phi, "work function");
  return phi * phi / uc().c2;
}

double schottky_reduction(double F) {
  if (!(F >= 0.0)) {
    throw Error(ErrorKind::DomainError, "field must be >= 0");
  }
  return uc().c_schottky * std::sqrt(F);
}

}  // namespace emg::emission
