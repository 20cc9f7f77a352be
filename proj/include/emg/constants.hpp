#pragma once

#include "emg/errors.hpp"

namespace emg::constants {

// Field-emission customary units are used throughout the library:
// energy in eV, voltage in V, distance in nm, current in A.
// Areas are kept in nm^2 internally; conversion to m^2 happens only at
// presentation time (see kPerNm2ToPerM2).

/// Universal constants of cold field electron emission, CODATA-2018 derived,
/// hard-coded to 7 significant figures in customary units.
struct UniversalConstants {
  double kappa_e;            ///< Schroedinger-equation constant, eV^-1/2 nm^-1
  double z_S;                ///< Sommerfeld supply constant, A m^-2 eV^-2
  double a;                  ///< first FN constant, A eV V^-2
  double b;                  ///< second FN constant, eV^-3/2 V nm^-1
  double c_schottky;         ///< Schottky constant, eV V^-1/2 nm^1/2
  double four_pi_eps0;       ///< eV V^-2 nm
  double k_B;                ///< Boltzmann constant, eV K^-1
  double two_thirds_over_b;  ///< 2/(3b), eV^3/2 (V/nm)^-1
  double ab2;                ///< a*b^2, A eV^-2 nm^-2
  double c2;                 ///< c^2, eV^2 V^-1 nm
  double bc2;                ///< b*c^2, eV^1/2
};

namespace detail {
// The first FN constant is stored in A eV V^-2 (not the uA of some published
// tables); the 1e-6 shows up directly in the stored value. 1.541434e-6 is the
// CODATA-2018 value of e^3/8πh; published 7-figure tables of the combination
// a*b^2 (7.192493e-5 A eV^-2 nm^-2) and of the supply identity
// z_S*(2/3b)^2 = a agree with this value and not with the occasionally seen
// misprint 1.541453.
inline constexpr double kKappaE = 5.123168;
inline constexpr double kZS = 1.618311e14;
inline constexpr double kA = 1.541434e-6;
inline constexpr double kB_FN = 6.830890;
inline constexpr double kCSchottky = 1.199985;
inline constexpr double kFourPiEps0 = 0.6944615;
inline constexpr double kBoltzmann = 8.617333e-5;
}  // namespace detail

inline constexpr UniversalConstants kUniversal{
    detail::kKappaE,
    detail::kZS,
    detail::kA,
    detail::kB_FN,
    detail::kCSchottky,
    detail::kFourPiEps0,
    detail::kBoltzmann,
    2.0 / (3.0 * detail::kB_FN),
    detail::kA * detail::kB_FN * detail::kB_FN,
    detail::kCSchottky * detail::kCSchottky,
    detail::kB_FN * detail::kCSchottky * detail::kCSchottky,
};

/// Multiply an A/nm^2 current density (or 1/nm^2 area density) by this to
/// present it per m^2.
inline constexpr double kPerNm2ToPerM2 = 1e18;

/// nm^2 per mm^2, for macroscopic-area inputs.
inline constexpr double kNm2PerMm2 = 1e12;

/// Parameters derived from a local work function phi.
struct WorkFunctionDerived {
  double phi;       ///< eV
  double eta;       ///< scaling parameter b*c^2*phi^-1/2, dimensionless
  double F_ref;     ///< reference field c^-2*phi^2, V/nm
  double ab2_phi2;  ///< a*b^2*phi^2, A nm^-2
};

/// Throws NonPositiveWorkFunction unless phi > 0.
WorkFunctionDerived derive(double phi);

}  // namespace emg::constants
