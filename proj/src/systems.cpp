#include "geomphase/systems.hpp"

#include <cmath>

namespace geomphase::systems {

void validate(const SpinHalfSystem& sys) {
  if (!std::isfinite(sys.gamma) || sys.gamma == 0.0) {
    throw ConfigError("spin-half gamma must be finite and nonzero");
  }
}

void validate(const ParityDoubletSystem& sys) {
  if (!std::isfinite(sys.half_splitting_B) || sys.half_splitting_B <= 0.0) {
    throw ConfigError("doublet half-splitting B must be finite and positive");
  }
  if (!std::isfinite(sys.d0) || sys.d0 <= 0.0) {
    throw ConfigError("doublet dipole moment d0 must be finite and positive");
  }
  if (!std::isfinite(sys.mu0) || sys.mu0 < 0.0) {
    throw ConfigError("doublet magnetic moment mu0 must be finite and >= 0");
  }
}

StaticSolution static_mix(const ParityDoubletSystem& sys, Real Ez, Real Bz) {
  validate(sys);
  if (!std::isfinite(Ez) || !std::isfinite(Bz)) {
    throw ConfigError("static fields must be finite");
  }
  const Real b = sys.half_splitting_B;
  const Real dez = sys.d0 * Ez;
  const Real root = std::hypot(b, dez);

  StaticSolution s;
  s.xi = std::atan2(dez, b);
  s.energy_tilde10 = root;
  s.energy_tilde00 = -root;
  s.delta0 = b + root;
  // b - root computed through the product identity to dodge cancellation
  // when |d0 Ez| << b
  s.delta1 = -(dez * dez) / s.delta0;
  s.zeeman_z = sys.mu0 * Bz;
  return s;
}

}  // namespace geomphase::systems
