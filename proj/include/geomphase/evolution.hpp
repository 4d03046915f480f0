#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "geomphase/errors.hpp"
#include "geomphase/fields.hpp"
#include "geomphase/systems.hpp"
#include "geomphase/types.hpp"

namespace geomphase::evolution {

struct EvolutionConfig {
  int steps_per_fastest_period = 256;  // >= 64
  Real unitarity_tolerance = 1e-9;
  Real max_phase_per_step = kPi / 8.0;  // unwrap safety bound
  // Levels closer than this fraction of the spectral span are treated as
  // one degenerate cluster and tracked through their common eigenspace.
  // Must cover the drive-induced splitting of nominally degenerate pairs.
  Real degeneracy_cluster_tol = 1e-2;
  Real energy_offset = 0.0;  // adds offset * identity; diagnostics only
  bool apply_unitarity_budget = true;  // shrink the step until the predicted
                                       // norm drift fits the tolerance
};

void validate(const EvolutionConfig& cfg);

struct RateScales {
  Real spectral_radius = 0.0;  // max |eigenvalue| / hbar of the full problem
  Real drive_rate = 0.0;       // largest drive angular frequency
};

// Number of fixed RK4 steps covering [0, T] at the configured resolution.
std::size_t plan_steps(Real T, const RateScales& scales,
                       const EvolutionConfig& cfg);

namespace detail {

// One classical fourth-order step of i hbar dpsi/dt = H(t) psi for a state
// or a matrix of stacked states.
template <typename HFunc, typename State>
void rk4_step(const HFunc& hamiltonian, Real t, Real h, State& psi) {
  const Complex mi(0.0, -1.0);
  const State k1 = (mi / kHbar) * (hamiltonian(t) * psi).eval();
  const State k2 =
      (mi / kHbar) * (hamiltonian(t + 0.5 * h) * (psi + (0.5 * h) * k1)).eval();
  const State k3 =
      (mi / kHbar) * (hamiltonian(t + 0.5 * h) * (psi + (0.5 * h) * k2)).eval();
  const State k4 = (mi / kHbar) * (hamiltonian(t + h) * (psi + h * k3)).eval();
  psi += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace detail

// Fixed-step propagation of a normalized state. The caller supplies the
// rate scales of the full problem (energy_offset excluded; it is folded in
// here). Throws when the norm drifts beyond the configured tolerance.
template <typename HFunc, typename Vec>
Vec integrate_tdse(const HFunc& hamiltonian, Vec psi, Real T,
                   const EvolutionConfig& cfg, const RateScales& scales,
                   Real* drift_out = nullptr) {
  validate(cfg);
  if (std::abs(psi.norm() - 1.0) > 1e-10) {
    throw ConfigError("initial state must be normalized");
  }
  if (T < 0.0) {
    throw ConfigError("duration must be non-negative");
  }
  if (drift_out) *drift_out = 0.0;
  if (T == 0.0) return psi;

  RateScales full = scales;
  full.spectral_radius += std::abs(cfg.energy_offset) / kHbar;
  const std::size_t n = plan_steps(T, full, cfg);
  const Real h = T / static_cast<Real>(n);
  const Real off = cfg.energy_offset;
  auto shifted = [&](Real t) {
    auto m = hamiltonian(t);
    if (off != 0.0) {
      m += off * decltype(m)::Identity(m.rows(), m.cols());
    }
    return m;
  };

  Real drift = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    detail::rk4_step(shifted, h * static_cast<Real>(i), h, psi);
    drift = std::max(drift, std::abs(psi.norm() - 1.0));
  }
  if (drift_out) *drift_out = drift;
  if (drift > cfg.unitarity_tolerance) {
    throw NumericsError(
        "state norm drifted by more than the configured tolerance; "
        "increase steps_per_fastest_period or shorten the run");
  }
  return psi;
}

struct LevelPhaseReport {
  std::string label;
  Real total_phase = 0.0;
  Real dynamical_phase = 0.0;
  Real geometric_phase = 0.0;
};

struct OraclePhaseReport {
  std::vector<LevelPhaseReport> levels;
  Real stretched_difference = 0.0;  // geometric phase, first minus second level
  Real adiabaticity = 0.0;          // max hbar |<m|dH/dt|n>| / gap^2
  Real unitarity_drift = 0.0;
};

// Tracks the instantaneous eigenstates connected to the two spin-half
// levels, evolves them through the trajectory, and splits each accumulated
// phase into dynamical and geometric parts.
OraclePhaseReport extract_geometric_phase(const systems::SpinHalfSystem& sys,
                                          const fields::FieldTrajectory& traj,
                                          Real T,
                                          const EvolutionConfig& cfg = {},
                                          Warnings* warnings = nullptr);

// Same for the four-state system under independent electric and magnetic
// trajectories. `tracked` lists basis indices to follow; empty means the
// stretched pair (|1,+1>, |1,-1>).
OraclePhaseReport extract_geometric_phase(
    const systems::ParityDoubletSystem& sys,
    const fields::FieldTrajectory& efield,
    const fields::FieldTrajectory& bfield, Real T,
    const EvolutionConfig& cfg = {}, std::vector<int> tracked = {},
    Warnings* warnings = nullptr);

struct DressedResult {
  Real splitting = 0.0;        // rotating-frame level splitting
  Real geometric_phase = 0.0;  // stretched-state difference over [0, T]
};

// Closed-form rotating-frame solution for one rotating component on top of
// a static longitudinal field; exact for any amplitude ratio.
DressedResult dressed_exact_spinhalf(const systems::SpinHalfSystem& sys,
                                     Real bz, Real bperp, Real wperp, Real T);

}  // namespace geomphase::evolution
