#pragma once

#include "geomphase/types.hpp"

namespace geomphase::fields {

// One circularly rotating transverse Fourier component:
//   a * (x cos(w t + p) + y sin(w t + p)).
// angular_frequency is signed; positive rotates counter-clockwise about +z.
struct RotatingComponent {
  Real amplitude = 0.0;          // >= 0, same unit as the static field
  Real angular_frequency = 0.0;  // rad / time
  Real initial_phase = 0.0;      // rad
};

// Static longitudinal field plus a list of rotating transverse components.
struct FieldTrajectory {
  Real static_z = 0.0;  // sign sets the quantization direction
  std::vector<RotatingComponent> components;

  Real perp_amplitude_sum() const;
  // (sum of amplitudes) / |static_z|; +inf when static_z == 0
  Real perturbative_ratio() const;
  Real max_angular_frequency() const;  // max |w_k|, 0 for empty list
};

// Throws ConfigError if amplitudes are negative or any entry is non-finite.
void validate(const FieldTrajectory& traj);

// Field vector at time t:
//   (sum_k a_k cos(w_k t + p_k), sum_k a_k sin(w_k t + p_k), static_z)
Vec3 evaluate(const FieldTrajectory& traj, Real t);

// Time derivative of evaluate.
Vec3 evaluate_derivative(const FieldTrajectory& traj, Real t);

// Area swept by the transverse field vector in the xy plane over [0, T]:
//   (1/2) Int (B_perp x dB_perp/dt) . z dt
// evaluated in closed form. Degenerate frequency pairs take the analytic
// limit a_j a_k w_j T cos(p_k - p_j) instead of dividing by zero.
Real swept_area(const FieldTrajectory& traj, Real T);

// Small-tilt solid angle swept_area / static_z^2.
// Warns above perturbative ratio 0.3; throws PhysicsError at ratio >= 1
// or when static_z == 0.
Real solid_angle_small(const FieldTrajectory& traj, Real T,
                       Warnings* warnings = nullptr);

// Signed solid angle Int (1 - cos theta) dphi traced by the field
// direction over [0, T], by adaptive quadrature. Throws PhysicsError if
// the total field magnitude vanishes on the path.
Real solid_angle_exact(const FieldTrajectory& traj, Real T);

}  // namespace geomphase::fields
