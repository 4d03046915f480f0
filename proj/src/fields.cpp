#include "geomphase/fields.hpp"

#include "geomphase/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>

namespace geomphase::fields {

namespace {

// sin(x)/x with a series branch near zero so the x -> 0 limit is exact.
Real sinc(Real x) {
  if (std::abs(x) < 1e-4) {
    const Real x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

}  // namespace

Real FieldTrajectory::perp_amplitude_sum() const {
  Real sum = 0.0;
  for (const auto& c : components) sum += c.amplitude;
  return sum;
}

Real FieldTrajectory::perturbative_ratio() const {
  const Real sum = perp_amplitude_sum();
  if (static_z == 0.0) {
    return sum == 0.0 ? 0.0 : std::numeric_limits<Real>::infinity();
  }
  return sum / std::abs(static_z);
}

Real FieldTrajectory::max_angular_frequency() const {
  Real m = 0.0;
  for (const auto& c : components) {
    m = std::max(m, std::abs(c.angular_frequency));
  }
  return m;
}

void validate(const FieldTrajectory& traj) {
  if (!std::isfinite(traj.static_z)) {
    throw ConfigError("field trajectory: static_z is not finite");
  }
  for (std::size_t k = 0; k < traj.components.size(); ++k) {
    const auto& c = traj.components[k];
    if (!std::isfinite(c.amplitude) || !std::isfinite(c.angular_frequency) ||
        !std::isfinite(c.initial_phase)) {
      throw ConfigError("field trajectory: component " + std::to_string(k) +
                        " has a non-finite entry");
    }
    if (c.amplitude < 0.0) {
      throw ConfigError("field trajectory: component " + std::to_string(k) +
                        " has negative amplitude");
    }
  }
}

Vec3 evaluate(const FieldTrajectory& traj, Real t) {
  Real x = 0.0, y = 0.0;
  for (const auto& c : traj.components) {
    const Real arg = c.angular_frequency * t + c.initial_phase;
    x += c.amplitude * std::cos(arg);
    y += c.amplitude * std::sin(arg);
  }
  return Vec3(x, y, traj.static_z);
}

Vec3 evaluate_derivative(const FieldTrajectory& traj, Real t) {
  Real x = 0.0, y = 0.0;
  for (const auto& c : traj.components) {
    const Real arg = c.angular_frequency * t + c.initial_phase;
    x -= c.amplitude * c.angular_frequency * std::sin(arg);
    y += c.amplitude * c.angular_frequency * std::cos(arg);
  }
  return Vec3(x, y, 0.0);
}

Real swept_area(const FieldTrajectory& traj, Real T) {
  validate(traj);
  const auto& cs = traj.components;
  Real total = 0.0;
  for (std::size_t k = 0; k < cs.size(); ++k) {
    total += cs[k].amplitude * cs[k].amplitude * cs[k].angular_frequency * T;
  }
  // Pair term: a_j a_k (w_j + w_k) / (w_k - w_j) *
  //            (sin((w_k - w_j) T + p_k - p_j) - sin(p_k - p_j)),
  // rewritten through sinc so nearly equal frequencies stay stable.
  for (std::size_t j = 0; j < cs.size(); ++j) {
    for (std::size_t k = j + 1; k < cs.size(); ++k) {
      const Real eps = cs[k].angular_frequency - cs[j].angular_frequency;
      const Real del = cs[k].initial_phase - cs[j].initial_phase;
      total += cs[j].amplitude * cs[k].amplitude *
               (cs[j].angular_frequency + cs[k].angular_frequency) * T *
               std::cos(del + 0.5 * eps * T) * sinc(0.5 * eps * T);
    }
  }
  return 0.5 * total;
}

Real solid_angle_small(const FieldTrajectory& traj, Real T,
                       Warnings* warnings) {
  validate(traj);
  if (traj.static_z == 0.0) {
    throw PhysicsError(
        "solid_angle_small: static_z is zero, quantization axis undefined");
  }
  const Real r = traj.perturbative_ratio();
  if (r >= 1.0) {
    throw PhysicsError(
        "solid_angle_small: perturbative ratio " + std::to_string(r) +
        " >= 1, small-angle expansion invalid");
  }
  if (r > 0.3) {
    warn(warnings, "solid_angle_small: perturbative ratio " +
                       std::to_string(r) + " > 0.3, result is low accuracy");
  }
  return swept_area(traj, T) / (traj.static_z * traj.static_z);
}

namespace {

// (1 - cos theta) dphi/dt for the field direction, written as
// (B_x dB_y - B_y dB_x) / (|B| (|B| + B_z)); finite wherever |B| > 0
// except at the -z pole, where the transverse zero is crossed with the
// limit value 0 (isolated instants only).
Real solid_angle_rate(const FieldTrajectory& traj, Real t) {
  const Vec3 b = evaluate(traj, t);
  const Vec3 db = evaluate_derivative(traj, t);
  const Real mag = b.norm();
  const Real den = mag * (mag + b.z());
  if (den == 0.0) return 0.0;
  return (b.x() * db.y() - b.y() * db.x()) / den;
}

Real simpson(const FieldTrajectory& traj, Real T, std::size_t n) {
  const Real h = T / static_cast<Real>(n);
  Real odd = 0.0, even = 0.0;
  for (std::size_t i = 1; i < n; i += 2) odd += solid_angle_rate(traj, h * i);
  for (std::size_t i = 2; i < n; i += 2) even += solid_angle_rate(traj, h * i);
  return h / 3.0 *
         (solid_angle_rate(traj, 0.0) + 4.0 * odd + 2.0 * even +
          solid_angle_rate(traj, T));
}

}  // namespace

Real solid_angle_exact(const FieldTrajectory& traj, Real T) {
  validate(traj);
  if (T == 0.0) return 0.0;
  const Real scale =
      std::abs(traj.static_z) + traj.perp_amplitude_sum();
  if (scale == 0.0) {
    throw PhysicsError("solid_angle_exact: field is identically zero");
  }

  // Step bound: max|w_k| h <= 2 pi / 64, then refine until converged.
  const Real wmax = traj.max_angular_frequency();
  std::size_t n = 16;
  if (wmax > 0.0) {
    const Real needed = std::abs(T) * wmax * 64.0 / kTwoPi;
    while (static_cast<Real>(n) < needed && n < (1u << 20)) n *= 2;
  }

  Real coarse = simpson(traj, T, n);
  for (; n < (1u << 21); n *= 2) {
    const Real fine = simpson(traj, T, 2 * n);
    const Real diff = std::abs(fine - coarse);
    if (diff <= std::max(1e-14, 1e-12 * std::abs(fine))) {
      return fine + (fine - coarse) / 15.0;
    }
    coarse = fine;
  }
  return coarse;
}

}  // namespace geomphase::fields
