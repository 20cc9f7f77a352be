#pragma once

#include "emg/errors.hpp"
#include "emg/smf.hpp"

namespace emg::emission {

enum class BarrierKind {
  ExactTriangular,
  SchottkyNordheim,
};

/// A tunnelling barrier seen by an electron of zero-field height H under
/// local field F. phi is carried so SN evaluations can scale the field.
struct BarrierState {
  double H;    ///< zero-field barrier height, eV
  double F;    ///< local field magnitude, V/nm
  double phi;  ///< local work function, eV
};

/// Validated constructor: H, F and phi must all be positive.
BarrierState barrier_state(double H, double F, double phi);

/// Temperature bookkeeping for the finite-temperature correction.
struct ThermalState {
  double T;    ///< K
  double d_F;  ///< decay width, eV
  double p;    ///< Swanson-Bell parameter k_B*T/d_F
};

ThermalState thermal_state(double T, double d_F);

/// Barrier motive energy M(H,F,z) in eV at distance z (nm) outside the
/// surface. The SN image term is singular at z = 0.
double motive_energy(BarrierKind kind, double H, double F, double z);

/// Gamow barrier-strength exponent. SN requires the scaled field
/// f_H = c^2 H^-2 F to lie in (0,1].
double gamow(BarrierKind kind, double H, double F,
             smf::Variant variant = smf::Variant::HighPrecision);

/// Transmission probability exp(-G) in the deep-tunnelling formalism.
double transmission(BarrierKind kind, double H, double F,
                    smf::Variant variant = smf::Variant::HighPrecision);

/// Decay width at the Fermi level, eV. ET: (2/3b) phi^-1/2 F;
/// SN: the ET value divided by t(f).
double decay_width(BarrierKind kind, double phi, double F,
                   smf::Variant variant = smf::Variant::HighPrecision);

/// Temperature correction factor pi*p/sin(pi*p); 1 at p = 0. Rejects
/// p >= pole_guard (the factor has a pole at p = 1).
double temperature_factor(double p, double pole_guard = 0.9);

/// Elementary (zero-temperature, triangular-barrier) current density,
/// A/nm^2.
double lecd_elementary(double phi, double F);

/// Finite-temperature Murphy-Good current density, A/nm^2. T = 0 gives the
/// zero-temperature form exactly.
double lecd_mg(double phi, double T, double F,
               smf::Variant variant = smf::Variant::HighPrecision,
               double pole_guard = 0.9);

/// Kernel current density: the Murphy-Good form without the t^-2 factor,
/// A/nm^2. This is the forward model the extracted formal area multiplies.
double kernel_current_density(double phi, double F,
                              smf::Variant variant = smf::Variant::HighPrecision);

/// f = F / F_ref(phi) = c^2 phi^-2 F.
double scaled_field(double phi, double F);

/// Field that pulls the barrier top down to the Fermi level, V/nm.
double reference_field(double phi);

/// Barrier lowering c*sqrt(F), eV.
double schottky_reduction(double F);

}  // namespace emg::emission
