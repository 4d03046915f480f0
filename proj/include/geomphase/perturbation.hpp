#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "geomphase/fields.hpp"
#include "geomphase/systems.hpp"
#include "geomphase/types.hpp"

namespace geomphase::perturbation {

enum class Part { kQuasiStatic, kGeometric };

// One retained second-order cross term, amplitude * cos(beat t + phase),
// assigned to either the quasi-static or the geometric side of the split.
struct OscillatoryTerm {
  Real amplitude = 0.0;
  Real beat_frequency = 0.0;
  Real phase = 0.0;
  Part part = Part::kQuasiStatic;
};

// Second-order shift split into a frequency-free piece and a piece linear
// in the drive frequencies. `exact` keeps the constant part of the
// unexpanded shift so callers can compare it against the series. The
// slope is referenced to the first component's frequency, so for a single
// drive it is the dimensionless coefficient D with shift = D * hbar * w.
// When any denominator comes within ten drive quanta of zero the series
// is untrustworthy: expansion_valid flips to false, the expansion fields
// are zeroed, and only `exact` is meaningful.
struct ShiftDecomposition {
  Real exact = 0.0;
  Real quasi_static = 0.0;
  Real geometric_energy = 0.0;
  Real geometric_slope = 0.0;
  bool expansion_valid = true;
  std::vector<OscillatoryTerm> oscillatory_terms;
};

struct PhaseResult {
  Real geometric_phase = 0.0;
  Real quasi_static_phase = 0.0;
  Real duration = 0.0;
};

struct SpinHalfShifts {
  ShiftDecomposition plus;        // m = +1/2
  ShiftDecomposition minus;       // m = -1/2
  ShiftDecomposition difference;  // plus minus minus
};

struct Spin1Shifts {
  Real exact_plus = 0.0;          // m = +1
  Real exact_minus = 0.0;         // m = -1
  ShiftDecomposition difference;  // plus minus minus, with C and D filled in
};

// Level shifts of the spin in a rotating transverse field, one diagonal
// term per component plus one beat term per component pair, each split
// into quasi-static and geometric parts.
SpinHalfShifts spinhalf_shifts(const systems::SpinHalfSystem& sys,
                               const fields::FieldTrajectory& traj,
                               Warnings* warnings = nullptr);

// Integrates -shift/hbar over [0, T] analytically, beat terms included,
// keeping the quasi-static and geometric contributions separate.
PhaseResult integrate_phase(const ShiftDecomposition& shift, Real T);

PhaseResult spinhalf_geometric_phase(const systems::SpinHalfSystem& sys,
                                     const fields::FieldTrajectory& traj,
                                     Real T, Warnings* warnings = nullptr);

// Stretched-state shifts for a rotating transverse electric field with no
// magnetic field. The quasi-static part of the difference is identically
// zero; the geometric slope collapses to -(Eperp/Ez)^2.
Spin1Shifts spin1_efield_shifts(const systems::ParityDoubletSystem& sys,
                                Real Ez, Real Eperp, Real wperp,
                                Warnings* warnings = nullptr);

// Rotating transverse E on top of static (Ez, Bz).
Spin1Shifts spin1_rotE_staticB_shifts(const systems::ParityDoubletSystem& sys,
                                      Real Ez, Real Bz, Real Eperp, Real wperp,
                                      Warnings* warnings = nullptr,
                                      Real denominator_margin = 1e-9);

// Rotating transverse B on top of static (Ez, Bz); same structure with the
// mixing weights swapped between the two denominators.
Spin1Shifts spin1_rotB_staticE_shifts(const systems::ParityDoubletSystem& sys,
                                      Real Ez, Real Bz, Real Bperp, Real wperp,
                                      Warnings* warnings = nullptr,
                                      Real denominator_margin = 1e-9);

struct DecomposeResult {
  ShiftDecomposition decomposition;
  Real fd_slope = 0.0;
  Real analytic_slope = 0.0;
  Real residual = 0.0;  // relative gap between fd and analytic slopes
  bool has_analytic = false;
};

// Numerical split of an arbitrary shift function: quasi_static is
// shift_fn(0), the slope comes from Richardson-refined central
// differences stepped at the scale of w_eval. Throws when the difference
// table fails to converge or the function has a kink at zero.
DecomposeResult geometric_decompose(const std::function<Real(Real)>& shift_fn,
                                    Real w_eval,
                                    std::optional<Real> analytic_slope = {});

}  // namespace geomphase::perturbation
