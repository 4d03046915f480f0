#include "geomphase/evolution.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <utility>

namespace geomphase::evolution {

void validate(const EvolutionConfig& cfg) {
  if (cfg.steps_per_fastest_period < 64) {
    throw ConfigError("steps_per_fastest_period must be at least 64");
  }
  if (!(cfg.unitarity_tolerance > 0.0) ||
      !std::isfinite(cfg.unitarity_tolerance)) {
    throw ConfigError("unitarity_tolerance must be positive and finite");
  }
  if (!(cfg.max_phase_per_step > 0.0) || cfg.max_phase_per_step > kPi) {
    throw ConfigError("max_phase_per_step must lie in (0, pi]");
  }
  if (!(cfg.degeneracy_cluster_tol > 0.0) ||
      cfg.degeneracy_cluster_tol >= 0.5) {
    throw ConfigError("degeneracy_cluster_tol must lie in (0, 0.5)");
  }
  if (!std::isfinite(cfg.energy_offset)) {
    throw ConfigError("energy_offset must be finite");
  }
}

std::size_t plan_steps(Real T, const RateScales& scales,
                       const EvolutionConfig& cfg) {
  validate(cfg);
  const Real rate = std::max(
      {2.0 * scales.spectral_radius, scales.drive_rate, 1e-300});
  Real h = (kTwoPi / rate) / static_cast<Real>(cfg.steps_per_fastest_period);
  if (cfg.apply_unitarity_budget && scales.spectral_radius > 0.0 && T > 0.0) {
    const Real lam = scales.spectral_radius;
    const Real cap = std::pow(
        14.4 * cfg.unitarity_tolerance / (T * std::pow(lam, 6.0)), 0.2);
    h = std::min(h, cap);
  }
  const Real n = std::ceil(T / h);
  if (!(n >= 1.0)) return 1;
  if (n > 4.0e8) {
    throw NumericsError(
        "configured resolution needs more than 4e8 steps; relax the "
        "tolerances or shorten the run");
  }
  return static_cast<std::size_t>(n);
}

namespace {

template <int N>
using MatN = Eigen::Matrix<Complex, N, N>;
template <int N>
using VecN = Eigen::Matrix<Complex, N, 1>;

struct Cluster {
  int begin = 0;  // eigenvalue index range [begin, end)
  int end = 0;
};

template <int N>
std::vector<Cluster> build_clusters(
    const Eigen::SelfAdjointEigenSolver<MatN<N>>& es, Real tol_abs) {
  std::vector<Cluster> out;
  int start = 0;
  for (int i = 1; i <= N; ++i) {
    if (i == N ||
        es.eigenvalues()[i] - es.eigenvalues()[i - 1] > tol_abs) {
      out.push_back({start, i});
      start = i;
    }
  }
  return out;
}

// Projection of v onto the eigenspace spanned by a cluster's columns.
template <int N>
VecN<N> project_onto(const Eigen::SelfAdjointEigenSolver<MatN<N>>& es,
                     const Cluster& c, const VecN<N>& v) {
  VecN<N> out = VecN<N>::Zero();
  for (int i = c.begin; i < c.end; ++i) {
    const VecN<N> col = es.eigenvectors().col(i);
    out += col * (col.dot(v));
  }
  return out;
}

template <int N>
struct TrackedState {
  std::string label;
  VecN<N> anchor;     // t = 0 eigenvector, fixes the gauge
  VecN<N> eigvec;     // current anchored instantaneous eigenvector
  Real energy = 0.0;  // current instantaneous eigenvalue
  Complex overlap{1.0, 0.0};
  Real unwrapped_arg = 0.0;
  Real dynamical_integral = 0.0;  // Int E dt
};

template <int N>
OraclePhaseReport run_oracle(
    const std::function<MatN<N>(Real)>& h_of_t,
    const std::function<MatN<N>(Real)>& dh_dt,
    const std::vector<std::pair<std::string, int>>& tracked_labels, Real T,
    Real drive_rate, const EvolutionConfig& cfg, Warnings* warnings) {
  validate(cfg);
  if (T < 0.0) throw ConfigError("duration must be non-negative");
  const MatN<N> offset_eye =
      MatN<N>::Identity() * Complex(cfg.energy_offset, 0.0);
  auto h_full = [&](Real t) -> MatN<N> { return h_of_t(t) + offset_eye; };

  Eigen::SelfAdjointEigenSolver<MatN<N>> es(h_full(0.0));
  if (es.info() != Eigen::Success) {
    throw NumericsError("eigensolve failed at t = 0");
  }
  const Real span = es.eigenvalues()[N - 1] - es.eigenvalues()[0];
  const Real cluster_tol =
      cfg.degeneracy_cluster_tol * std::max(span, 1e-300);
  const Real radius =
      std::max(std::abs(es.eigenvalues()[0]), std::abs(es.eigenvalues()[N - 1])) /
      kHbar;

  std::vector<TrackedState<N>> levels;
  {
    const auto clusters = build_clusters<N>(es, cluster_tol);
    for (const auto& [label, basis_index] : tracked_labels) {
      if (basis_index < 0 || basis_index >= N) {
        throw ConfigError("tracked basis index out of range");
      }
      VecN<N> e_b = VecN<N>::Zero();
      e_b[basis_index] = Complex(1.0, 0.0);
      Real best_w = -1.0;
      const Cluster* best = nullptr;
      for (const auto& c : clusters) {
        const Real w = project_onto<N>(es, c, e_b).squaredNorm();
        if (w > best_w) {
          best_w = w;
          best = &c;
        }
      }
      if (best_w < 0.5) {
        throw PhysicsError("basis state " + label +
                           " does not single out an energy level at t = 0");
      }
      TrackedState<N> s;
      s.label = label;
      s.anchor = project_onto<N>(es, *best, e_b).normalized();
      s.eigvec = s.anchor;
      s.energy =
          (s.eigvec.adjoint() * h_full(0.0) * s.eigvec)(0, 0).real();
      levels.push_back(std::move(s));
    }
  }

  OraclePhaseReport report;
  auto update_adiabaticity = [&](Real t,
                                 const Eigen::SelfAdjointEigenSolver<MatN<N>>&
                                     solver) {
    const MatN<N> a = dh_dt(t);
    for (const auto& lvl : levels) {
      const VecN<N> av = a * lvl.eigvec;
      for (int m = 0; m < N; ++m) {
        const Real gap = solver.eigenvalues()[m] - lvl.energy;
        if (std::abs(gap) <= cluster_tol) continue;
        const Real rate =
            kHbar * std::abs(solver.eigenvectors().col(m).dot(av)) /
            (gap * gap);
        report.adiabaticity = std::max(report.adiabaticity, rate);
      }
    }
  };
  update_adiabaticity(0.0, es);

  const std::size_t n_levels = levels.size();
  Eigen::Matrix<Complex, N, Eigen::Dynamic> psi(N, n_levels);
  for (std::size_t j = 0; j < n_levels; ++j) {
    psi.col(static_cast<int>(j)) = levels[j].eigvec;
  }

  if (T > 0.0) {
    const std::size_t n_steps =
        plan_steps(T, RateScales{radius, drive_rate}, cfg);
    const Real h = T / static_cast<Real>(n_steps);
    Real sub_dt = kPi / (16.0 * std::max(radius, 1e-300));
    if (drive_rate > 0.0) {
      sub_dt = std::min(sub_dt, kTwoPi / (64.0 * drive_rate));
    }
    const std::size_t k_sub = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::floor(sub_dt / h)));

    Real t_prev_sub = 0.0;
    for (std::size_t i = 0; i < n_steps; ++i) {
      detail::rk4_step(h_full, h * static_cast<Real>(i), h, psi);
      const std::size_t done = i + 1;
      if (done % k_sub != 0 && done != n_steps) continue;

      const Real t = (done == n_steps) ? T : h * static_cast<Real>(done);
      for (std::size_t j = 0; j < n_levels; ++j) {
        report.unitarity_drift =
            std::max(report.unitarity_drift,
                     std::abs(psi.col(static_cast<int>(j)).norm() - 1.0));
      }

      const MatN<N> hm = h_full(t);
      Eigen::SelfAdjointEigenSolver<MatN<N>> est(hm);
      if (est.info() != Eigen::Success) {
        throw NumericsError("eigensolve failed along the trajectory");
      }
      const auto clusters = build_clusters<N>(est, cluster_tol);
      for (std::size_t j = 0; j < n_levels; ++j) {
        auto& lvl = levels[j];
        Real best_w = -1.0;
        const Cluster* best = nullptr;
        for (const auto& c : clusters) {
          const Real w = project_onto<N>(est, c, lvl.eigvec).squaredNorm();
          if (w > best_w) {
            best_w = w;
            best = &c;
          }
        }
        if (best_w < 0.8) {
          throw NumericsError(
              "eigenstate continuation for " + lvl.label +
              " became ambiguous; levels may cross along this trajectory");
        }
        VecN<N> v = project_onto<N>(est, *best, lvl.eigvec).normalized();
        const Complex a0 = lvl.anchor.dot(v);
        if (std::abs(a0) < 0.1) {
          throw NumericsError(
              "gauge anchor lost for " + lvl.label +
              "; the eigenvector moved nearly orthogonal to its start");
        }
        v *= std::conj(a0) / std::abs(a0);
        const Real energy = (v.adjoint() * hm * v)(0, 0).real();

        const Real dt_sub = t - t_prev_sub;
        lvl.dynamical_integral += 0.5 * (lvl.energy + energy) * dt_sub;
        const Complex o = v.dot(psi.col(static_cast<int>(j)));
        const Real inc = std::arg(o * std::conj(lvl.overlap));
        if (std::abs(inc) > cfg.max_phase_per_step) {
          throw NumericsError(
              "phase increment exceeded max_phase_per_step; raise "
              "steps_per_fastest_period for safe unwrapping");
        }
        lvl.unwrapped_arg += inc;
        lvl.eigvec = v;
        lvl.energy = energy;
        lvl.overlap = o;
      }
      update_adiabaticity(t, est);
      t_prev_sub = t;
    }
  }

  for (const auto& lvl : levels) {
    LevelPhaseReport lr;
    lr.label = lvl.label;
    lr.dynamical_phase = -lvl.dynamical_integral / kHbar;
    lr.geometric_phase = lr.dynamical_phase - lvl.unwrapped_arg;
    lr.total_phase = lr.dynamical_phase + lr.geometric_phase;
    report.levels.push_back(std::move(lr));
  }
  if (report.levels.size() >= 2) {
    report.stretched_difference = report.levels[0].geometric_phase -
                                  report.levels[1].geometric_phase;
  }
  if (report.unitarity_drift > cfg.unitarity_tolerance) {
    throw NumericsError(
        "state norm drifted by more than the configured tolerance; "
        "increase steps_per_fastest_period or shorten the run");
  }
  if (report.adiabaticity >= 0.1) {
    warn(warnings,
         "adiabaticity diagnostic is 0.1 or larger; the geometric split is "
         "unreliable this far from the adiabatic regime");
  }
  return report;
}

}  // namespace

OraclePhaseReport extract_geometric_phase(const systems::SpinHalfSystem& sys,
                                          const fields::FieldTrajectory& traj,
                                          Real T, const EvolutionConfig& cfg,
                                          Warnings* warnings) {
  systems::validate(sys);
  fields::validate(traj);
  std::function<MatN<2>(Real)> h = [&sys, traj](Real t) {
    return systems::hamiltonian_spinhalf(sys, fields::evaluate(traj, t));
  };
  std::function<MatN<2>(Real)> dh = [&sys, traj](Real t) {
    return systems::hamiltonian_spinhalf(sys,
                                         fields::evaluate_derivative(traj, t));
  };
  const std::vector<std::pair<std::string, int>> tracked = {{"+1/2", 0},
                                                            {"-1/2", 1}};
  return run_oracle<2>(h, dh, tracked, T, traj.max_angular_frequency(), cfg,
                       warnings);
}

OraclePhaseReport extract_geometric_phase(
    const systems::ParityDoubletSystem& sys,
    const fields::FieldTrajectory& efield,
    const fields::FieldTrajectory& bfield, Real T, const EvolutionConfig& cfg,
    std::vector<int> tracked, Warnings* warnings) {
  systems::validate(sys);
  fields::validate(efield);
  fields::validate(bfield);
  if (tracked.empty()) tracked = {systems::k1p, systems::k1m};
  static const char* const kBasisNames[4] = {"|0,0>", "|1,-1>", "|1,0>",
                                             "|1,+1>"};
  std::vector<std::pair<std::string, int>> labels;
  for (int idx : tracked) {
    if (idx < 0 || idx >= 4) {
      throw ConfigError("tracked basis index out of range");
    }
    labels.emplace_back(kBasisNames[idx], idx);
  }
  std::function<MatN<4>(Real)> h = [&sys, efield, bfield](Real t) {
    return systems::hamiltonian_doublet(sys, fields::evaluate(efield, t),
                                        fields::evaluate(bfield, t));
  };
  const Real b = sys.half_splitting_B;
  std::function<MatN<4>(Real)> dh = [&sys, efield, bfield, b](Real t) {
    MatN<4> m = systems::hamiltonian_doublet(
        sys, fields::evaluate_derivative(efield, t),
        fields::evaluate_derivative(bfield, t));
    m(systems::k00, systems::k00) += Complex(b, 0.0);
    m(systems::k1m, systems::k1m) -= Complex(b, 0.0);
    m(systems::k10, systems::k10) -= Complex(b, 0.0);
    m(systems::k1p, systems::k1p) -= Complex(b, 0.0);
    return m;
  };
  const Real drive = std::max(efield.max_angular_frequency(),
                              bfield.max_angular_frequency());
  return run_oracle<4>(h, dh, labels, T, drive, cfg, warnings);
}

namespace {

// Continuous arg of cos(x) - i c sin(x), unwrapped across branch cuts.
Real wound_arg(Real x, Real c) {
  const Real k = std::round(x / kPi);
  const Real d = x - k * kPi;
  const Real sgn = (c > 0.0) ? 1.0 : ((c < 0.0) ? -1.0 : 0.0);
  return -std::atan(c * std::tan(d)) - k * kPi * sgn;
}

}  // namespace

DressedResult dressed_exact_spinhalf(const systems::SpinHalfSystem& sys,
                                     Real bz, Real bperp, Real wperp, Real T) {
  systems::validate(sys);
  if (!std::isfinite(bz) || !std::isfinite(bperp) || !std::isfinite(wperp) ||
      !std::isfinite(T)) {
    throw ConfigError("dressed solution needs finite parameters");
  }
  if (bperp < 0.0) throw ConfigError("transverse amplitude must be >= 0");
  if (bz == 0.0) {
    throw PhysicsError(
        "dressed solution needs a nonzero static field component");
  }

  const Real hx = sys.gamma * bperp;
  const Real hz = sys.gamma * bz;
  const Real hmag = std::hypot(hx, hz);
  const Real wx = hx;
  const Real wz = hz + wperp;
  const Real wmag = std::hypot(wx, wz);

  DressedResult out;
  out.splitting = kHbar * wmag;
  if (wmag == 0.0) return out;

  // Bloch direction of the level dominated by the first basis state.
  const Real sign_hz = (hz > 0.0) ? 1.0 : -1.0;
  const Real bloch_x = sign_hz * hx / hmag;
  const Real bloch_z = std::abs(hz) / hmag;
  const Real e_lab_plus = -sign_hz * 0.5 * kHbar * hmag;
  const Real aligned = bloch_x * wx / wmag + bloch_z * wz / wmag;
  const Real e_rot_plus = ((aligned >= 0.0) ? -1.0 : 1.0) * 0.5 * kHbar * wmag;

  const Real x = 0.5 * wperp * T;
  out.geometric_phase = 2.0 * (e_rot_plus - e_lab_plus) * T / kHbar -
                        2.0 * wound_arg(x, bloch_z);
  return out;
}

}  // namespace geomphase::evolution
