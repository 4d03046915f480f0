#include "geomphase/perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>

#include "geomphase/errors.hpp"

namespace geomphase::perturbation {

namespace {

Real sinc(Real x) {
  if (std::abs(x) < 1e-4) {
    const Real x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

// integral of cos(eps t + delta) over [0, T]
Real beat_window(Real eps, Real delta, Real T) {
  const Real half = 0.5 * eps * T;
  return T * std::cos(delta + half) * sinc(half);
}

ShiftDecomposition combine_difference(const ShiftDecomposition& p,
                                      const ShiftDecomposition& m) {
  ShiftDecomposition d;
  d.exact = p.exact - m.exact;
  d.quasi_static = p.quasi_static - m.quasi_static;
  d.geometric_energy = p.geometric_energy - m.geometric_energy;
  d.geometric_slope = p.geometric_slope - m.geometric_slope;
  d.expansion_valid = p.expansion_valid && m.expansion_valid;
  d.oscillatory_terms = p.oscillatory_terms;
  for (std::size_t i = 0; i < d.oscillatory_terms.size(); ++i) {
    d.oscillatory_terms[i].amplitude -= m.oscillatory_terms[i].amplitude;
  }
  return d;
}

}  // namespace

SpinHalfShifts spinhalf_shifts(const systems::SpinHalfSystem& sys,
                               const fields::FieldTrajectory& traj,
                               Warnings* warnings) {
  systems::validate(sys);
  fields::validate(traj);
  if (traj.static_z == 0.0) {
    throw PhysicsError("static field is zero, the level splitting vanishes");
  }
  const Real r = traj.perturbative_ratio();
  if (r >= 1.0) {
    throw PhysicsError("transverse amplitude ratio " + std::to_string(r) +
                       " is outside the perturbative domain (needs < 1)");
  }

  const Real bz = traj.static_z;
  const Real g = sys.gamma;
  const Real w0 = g * bz / kHbar;  // level splitting as an angular frequency
  const auto& cs = traj.components;

  bool valid = true;
  for (std::size_t k = 0; k < cs.size(); ++k) {
    const Real wk = cs[k].angular_frequency;
    if (std::abs(wk - w0) < 1e-9 * std::max(std::abs(w0), std::abs(wk))) {
      throw PhysicsError("component " + std::to_string(k) +
                         " is resonant with the level splitting");
    }
    if (std::abs(wk) >= std::abs(w0)) {
      warn(warnings, "component " + std::to_string(k) +
                         " rotates faster than the level splitting; the "
                         "frequency expansion does not apply");
    }
    if (std::abs(wk - w0) <= 10.0 * kHbar * std::abs(wk)) {
      valid = false;
    }
  }
  if (!valid) {
    warn(warnings, "a drive quantum is within a factor ten of a "
                   "second-order denominator; only the exact shift is "
                   "reported");
  }

  const Real w_ref = cs.empty() ? 0.0 : cs.front().angular_frequency;

  auto level = [&](Real s) {
    ShiftDecomposition d;
    d.expansion_valid = valid;
    const Real quarter = 0.25 * g * g;
    for (const auto& c : cs) {
      const Real a = c.amplitude;
      const Real w = c.angular_frequency;
      d.exact += quarter * a * a * s / (w - w0);
      d.quasi_static += -s * 0.25 * g * a * a / bz;
      d.geometric_energy += -s * 0.25 * a * a * w * kHbar / (bz * bz);
    }
    for (std::size_t j = 0; j + 1 < cs.size(); ++j) {
      for (std::size_t k = j + 1; k < cs.size(); ++k) {
        const Real aj = cs[j].amplitude, ak = cs[k].amplitude;
        const Real wj = cs[j].angular_frequency, wk = cs[k].angular_frequency;
        const Real eps = wk - wj;
        const Real delta = cs[k].initial_phase - cs[j].initial_phase;
        d.oscillatory_terms.push_back(
            {-s * 0.5 * g * aj * ak / bz, eps, delta, Part::kQuasiStatic});
        d.oscillatory_terms.push_back(
            {-s * 0.25 * aj * ak * (wj + wk) * kHbar / (bz * bz), eps, delta,
             Part::kGeometric});
      }
    }
    d.geometric_slope =
        (w_ref != 0.0) ? d.geometric_energy / (kHbar * w_ref) : 0.0;
    if (!valid) {
      d.quasi_static = 0.0;
      d.geometric_energy = 0.0;
      d.geometric_slope = 0.0;
      d.oscillatory_terms.clear();
    }
    return d;
  };

  SpinHalfShifts out;
  out.plus = level(+1.0);
  out.minus = level(-1.0);
  out.difference = combine_difference(out.plus, out.minus);
  return out;
}

PhaseResult integrate_phase(const ShiftDecomposition& shift, Real T) {
  PhaseResult out;
  out.duration = T;
  Real qz = shift.quasi_static * T;
  Real geo = shift.geometric_energy * T;
  for (const auto& term : shift.oscillatory_terms) {
    const Real window =
        term.amplitude * beat_window(term.beat_frequency, term.phase, T);
    if (term.part == Part::kGeometric) {
      geo += window;
    } else {
      qz += window;
    }
  }
  out.geometric_phase = -geo / kHbar;
  out.quasi_static_phase = -qz / kHbar;
  return out;
}

PhaseResult spinhalf_geometric_phase(const systems::SpinHalfSystem& sys,
                                     const fields::FieldTrajectory& traj,
                                     Real T, Warnings* warnings) {
  return integrate_phase(spinhalf_shifts(sys, traj, warnings).difference, T);
}

namespace {

Spin1Shifts doublet_shifts(const systems::ParityDoubletSystem& sys, Real Ez,
                           Real Bz, Real coupling_sq, bool swap_weights,
                           Real wperp, Warnings* warnings, Real margin) {
  if (!std::isfinite(coupling_sq) || !std::isfinite(wperp)) {
    throw ConfigError("transverse drive parameters must be finite");
  }
  if (!(margin > 0.0) || margin >= 1.0) {
    throw ConfigError("denominator margin must lie in (0, 1)");
  }
  const auto sol = systems::static_mix(sys, Ez, Bz);
  const Real root = sol.energy_tilde10;
  const Real c2 = sol.delta0 / (2.0 * root);   // cos^2(xi/2)
  const Real s2 = -sol.delta1 / (2.0 * root);  // sin^2(xi/2)
  const Real wa = swap_weights ? s2 : c2;      // weight on the delta0 line
  const Real wb = swap_weights ? c2 : s2;      // weight on the delta1 line
  const Real x = sol.zeeman_z + kHbar * wperp;
  const Real x0 = sol.zeeman_z;

  const Real scale =
      std::max({sol.delta0, std::abs(sol.delta1), std::abs(x)});
  const struct {
    Real value;
    const char* name;
  } dens[] = {
      {sol.delta0 + x, "Delta0 + (mu0 Bz + hbar w)"},
      {sol.delta1 + x, "Delta1 + (mu0 Bz + hbar w)"},
      {sol.delta0 - x, "Delta0 - (mu0 Bz + hbar w)"},
      {sol.delta1 - x, "Delta1 - (mu0 Bz + hbar w)"},
  };
  for (const auto& den : dens) {
    if (std::abs(den.value) <= margin * scale) {
      throw PhysicsError(std::string("second-order denominator ") + den.name +
                         " is within margin of zero");
    }
  }

  Spin1Shifts out;
  out.exact_plus =
      0.5 * coupling_sq * (wa / dens[0].value + wb / dens[1].value);
  out.exact_minus =
      0.5 * coupling_sq * (wa / dens[2].value + wb / dens[3].value);

  auto& d = out.difference;
  d.exact = out.exact_plus - out.exact_minus;

  const Real p0 = sol.delta0 + x0, m0 = sol.delta0 - x0;
  const Real p1 = sol.delta1 + x0, m1 = sol.delta1 - x0;
  bool valid = true;
  for (Real den : {p0, m0, p1, m1}) {
    if (std::abs(den) <= 10.0 * kHbar * std::abs(wperp)) valid = false;
  }
  d.expansion_valid = valid;
  if (valid) {
    d.quasi_static = -coupling_sq * x0 * (wa / (p0 * m0) + wb / (p1 * m1));
    d.geometric_slope =
        -0.5 * coupling_sq *
        (wa * (1.0 / (p0 * p0) + 1.0 / (m0 * m0)) +
         wb * (1.0 / (p1 * p1) + 1.0 / (m1 * m1)));
    d.geometric_energy = d.geometric_slope * kHbar * wperp;
  } else {
    warn(warnings, "drive quantum is within a factor ten of a second-order "
                   "denominator; only the exact shift is reported");
  }
  return out;
}

void check_amplitude(Real amplitude, const char* what) {
  if (!std::isfinite(amplitude) || amplitude < 0.0) {
    throw ConfigError(std::string(what) +
                      " amplitude must be finite and non-negative");
  }
}

}  // namespace

Spin1Shifts spin1_efield_shifts(const systems::ParityDoubletSystem& sys,
                                Real Ez, Real Eperp, Real wperp,
                                Warnings* warnings) {
  check_amplitude(Eperp, "transverse electric");
  const auto sol = systems::static_mix(sys, Ez, 0.0);
  if (std::abs(kHbar * wperp) >= std::abs(sol.delta1)) {
    throw PhysicsError(
        "rotation quantum |hbar w| reaches the smallest level separation "
        "|Delta1|; the virtual level crosses a real one");
  }
  const Real g2 = sys.d0 * Eperp * sys.d0 * Eperp;
  return doublet_shifts(sys, Ez, 0.0, g2, false, wperp, warnings, 1e-9);
}

Spin1Shifts spin1_rotE_staticB_shifts(const systems::ParityDoubletSystem& sys,
                                      Real Ez, Real Bz, Real Eperp, Real wperp,
                                      Warnings* warnings,
                                      Real denominator_margin) {
  check_amplitude(Eperp, "transverse electric");
  const Real g2 = sys.d0 * Eperp * sys.d0 * Eperp;
  return doublet_shifts(sys, Ez, Bz, g2, false, wperp, warnings,
                        denominator_margin);
}

Spin1Shifts spin1_rotB_staticE_shifts(const systems::ParityDoubletSystem& sys,
                                      Real Ez, Real Bz, Real Bperp, Real wperp,
                                      Warnings* warnings,
                                      Real denominator_margin) {
  check_amplitude(Bperp, "transverse magnetic");
  const Real g2 = sys.mu0 * Bperp * sys.mu0 * Bperp;
  return doublet_shifts(sys, Ez, Bz, g2, true, wperp, warnings,
                        denominator_margin);
}

DecomposeResult geometric_decompose(const std::function<Real(Real)>& shift_fn,
                                    Real w_eval,
                                    std::optional<Real> analytic_slope) {
  if (!shift_fn) {
    throw ConfigError("shift function is empty");
  }
  const Real scale =
      (w_eval != 0.0 && std::isfinite(w_eval)) ? std::abs(w_eval) : 1.0;
  const Real f0 = shift_fn(0.0);
  Real fmax = std::abs(f0);

  auto central = [&](Real h) {
    const Real fp = shift_fn(h);
    const Real fm = shift_fn(-h);
    fmax = std::max({fmax, std::abs(fp), std::abs(fm)});
    return (fp - fm) / (2.0 * h);
  };

  const Real h0 = scale;
  const Real d0 = central(h0);
  const Real d1 = central(0.5 * h0);
  const Real d2 = central(0.25 * h0);
  const Real r1 = (4.0 * d1 - d0) / 3.0;
  const Real r2 = (4.0 * d2 - d1) / 3.0;
  const Real slope = (16.0 * r2 - r1) / 15.0;

  const Real noise =
      std::numeric_limits<Real>::epsilon() * fmax / (0.25 * h0);
  if (std::abs(r2 - r1) >
      std::max(1e-5 * std::max(std::abs(slope), std::abs(d2)), 64.0 * noise)) {
    throw NumericsError(
        "finite-difference slope did not converge; the shift function is "
        "not smooth at this frequency scale");
  }

  // one-sided slopes must approach each other as the step shrinks
  auto kink = [&](Real h) {
    const Real fwd = (shift_fn(h) - f0) / h;
    const Real bwd = (f0 - shift_fn(-h)) / h;
    return fwd - bwd;
  };
  const Real k1 = kink(0.25 * h0);
  const Real k2 = kink(0.125 * h0);
  const Real kink_floor = std::max(
      1e-6 * (std::abs(slope) + std::abs(d2)), 64.0 * noise);
  if (std::abs(k2) > kink_floor && std::abs(k2) > 0.75 * std::abs(k1)) {
    throw NumericsError("shift function has a kink at zero frequency");
  }

  DecomposeResult out;
  out.fd_slope = slope;
  out.decomposition.exact = shift_fn(w_eval);
  out.decomposition.quasi_static = f0;
  out.decomposition.geometric_slope = slope;
  out.decomposition.geometric_energy = slope * kHbar * w_eval;
  if (analytic_slope) {
    out.has_analytic = true;
    out.analytic_slope = *analytic_slope;
    const Real denom = std::max(std::abs(*analytic_slope), std::abs(slope));
    out.residual = denom > 0.0 ? std::abs(slope - *analytic_slope) / denom : 0.0;
  }
  return out;
}

}  // namespace geomphase::perturbation
