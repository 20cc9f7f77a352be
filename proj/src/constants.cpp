#include "emg/constants.hpp"

#include <cmath>
#include <string>

namespace emg::constants {

WorkFunctionDerived derive(double phi) {
  if (!(phi > 0.0)) {
    throw Error(ErrorKind::NonPositiveWorkFunction,
                "work function must be > 0 eV (got " + std::to_string(phi) + ")");
  }
  const UniversalConstants& u = kUniversal;
  WorkFunctionDerived d;
  d.phi = phi;
  d.eta = u.bc2 / std::sqrt(phi);
  d.F_ref = phi * phi / u.c2;
  d.ab2_phi2 = u.ab2 * (phi * phi);
  return d;
}

}  // namespace emg::constants
