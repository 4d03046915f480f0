#pragma once

#include <Eigen/Dense>

#include <complex>
#include <string>
#include <vector>

namespace geomphase {

using Real = double;
using Complex = std::complex<Real>;

template <typename Scalar>
using Vector3 = Eigen::Matrix<Scalar, 3, 1>;
template <typename Scalar>
using Matrix2c = Eigen::Matrix<std::complex<Scalar>, 2, 2>;
template <typename Scalar>
using Matrix4c = Eigen::Matrix<std::complex<Scalar>, 4, 4>;

using Vec3 = Vector3<Real>;
using Mat2c = Matrix2c<Real>;
using Mat4c = Matrix4c<Real>;

inline constexpr Real kHbar = 1.0;  // internal unit system
inline constexpr Real kPi = 3.14159265358979323846;
inline constexpr Real kTwoPi = 2.0 * kPi;

// Non-fatal diagnostics collected by operations that keep going after a
// soft validity check fails. Pass nullptr to ignore.
struct Warnings {
  std::vector<std::string> messages;

  void add(std::string msg) { messages.push_back(std::move(msg)); }
  bool empty() const { return messages.empty(); }
};

inline void warn(Warnings* w, std::string msg) {
  if (w) w->add(std::move(msg));
}

}  // namespace geomphase
