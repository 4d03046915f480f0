#pragma once

#include "geomphase/errors.hpp"
#include "geomphase/types.hpp"

namespace geomphase::systems {

// Spin-1/2 with magnetic coupling H = -gamma S.B, basis (|+1/2>, |-1/2>).
struct SpinHalfSystem {
  Real gamma = 1.0;  // gyromagnetic ratio, energy / field / hbar; nonzero
};

// J=1 level plus an opposite-parity J=0 partner. Zero-field separation
// between |1,0> and |0,0> is 2 * half_splitting_B with the energy zero
// halfway between them. Basis order (|0,0>, |1,-1>, |1,0>, |1,+1>).
struct ParityDoubletSystem {
  Real half_splitting_B = 1.0;  // > 0
  Real d0 = 1.0;                // dipole matrix element, > 0
  Real mu0 = 0.0;               // magnetic moment matrix element, >= 0
};

inline constexpr int k00 = 0;  // |0,0>
inline constexpr int k1m = 1;  // |1,-1>
inline constexpr int k10 = 2;  // |1,0>
inline constexpr int k1p = 3;  // |1,+1>

// Longitudinal-field solution the perturbation series is built on.
struct StaticSolution {
  Real xi = 0.0;              // mixing angle, tan(xi) = d0 Ez / B
  Real energy_tilde10 = 0.0;  // +sqrt(B^2 + d0^2 Ez^2)
  Real energy_tilde00 = 0.0;  // -sqrt(B^2 + d0^2 Ez^2)
  Real delta0 = 0.0;          // B + sqrt(B^2 + d0^2 Ez^2), > 0
  Real delta1 = 0.0;          // B - sqrt(B^2 + d0^2 Ez^2), <= 0
  Real zeeman_z = 0.0;        // mu0 * Bz
};

void validate(const SpinHalfSystem& sys);
void validate(const ParityDoubletSystem& sys);

// Mixing of |1,0> with |0,0> by a longitudinal electric field, plus the
// energy denominators measured from the degenerate |1,+-1> pair.
// Negative Ez flips the sign of xi; all derived quantities are even in it.
StaticSolution static_mix(const ParityDoubletSystem& sys, Real Ez, Real Bz);

// -gamma S.B in the fixed z basis. Hermitian, traceless.
template <typename Derived>
Matrix2c<typename Derived::Scalar> hamiltonian_spinhalf(
    const SpinHalfSystem& sys, const Eigen::MatrixBase<Derived>& field) {
  using S = typename Derived::Scalar;
  using C = std::complex<S>;
  const S g = static_cast<S>(sys.gamma);
  Matrix2c<S> h;
  h(0, 0) = C(-g * field.z() / 2, 0);
  h(1, 1) = C(g * field.z() / 2, 0);
  h(0, 1) = C(-g * field.x() / 2, g * field.y() / 2);
  h(1, 0) = std::conj(h(0, 1));
  return h;
}

// Dipole plus magnetic coupling of the four-state system, in the fixed
// basis (|0,0>, |1,-1>, |1,0>, |1,+1>):
//   diagonal (-B, B, B, B) plus mu0 Bz m on the J=1 states,
//   <1,0|H|0,0> = -d0 Ez,
//   <1,+1|H|0,0> = d0 (Ex - i Ey)/sqrt(2),
//   <1,-1|H|0,0> = -d0 (Ex + i Ey)/sqrt(2),
//   J=1 transverse block mu0 (Jx Bx + Jy By)/hbar.
// The J=1 magnetic block carries +mu0 J.B/hbar, the sign that makes the
// second-order shifts come out with denominators Delta + mu0 Bz + hbar w
// for the m = +1 state.
template <typename DerivedE, typename DerivedB>
Matrix4c<typename DerivedE::Scalar> hamiltonian_doublet(
    const ParityDoubletSystem& sys, const Eigen::MatrixBase<DerivedE>& efield,
    const Eigen::MatrixBase<DerivedB>& bfield) {
  using S = typename DerivedE::Scalar;
  using C = std::complex<S>;
  const S b = static_cast<S>(sys.half_splitting_B);
  const S d0 = static_cast<S>(sys.d0);
  const S mu0 = static_cast<S>(sys.mu0);
  const S rt2 = std::sqrt(S(2));

  Matrix4c<S> h = Matrix4c<S>::Zero();
  h(k00, k00) = C(-b, 0);
  h(k1m, k1m) = C(b - mu0 * bfield.z(), 0);
  h(k10, k10) = C(b, 0);
  h(k1p, k1p) = C(b + mu0 * bfield.z(), 0);

  h(k10, k00) = C(-d0 * efield.z(), 0);
  h(k1p, k00) = C(d0 * efield.x() / rt2, -d0 * efield.y() / rt2);
  h(k1m, k00) = C(-d0 * efield.x() / rt2, -d0 * efield.y() / rt2);

  h(k1p, k10) = C(mu0 * bfield.x() / rt2, -mu0 * bfield.y() / rt2);
  h(k10, k1m) = C(mu0 * bfield.x() / rt2, -mu0 * bfield.y() / rt2);

  h(k00, k10) = std::conj(h(k10, k00));
  h(k00, k1p) = std::conj(h(k1p, k00));
  h(k00, k1m) = std::conj(h(k1m, k00));
  h(k10, k1p) = std::conj(h(k1p, k10));
  h(k1m, k10) = std::conj(h(k10, k1m));
  return h;
}

}  // namespace geomphase::systems
