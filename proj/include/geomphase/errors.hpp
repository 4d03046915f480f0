#pragma once

#include <stdexcept>
#include <string>

namespace geomphase {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input (config files, bad parameter paths).
// CLI exit code 2.
struct ConfigError : Error {
  using Error::Error;
};

// Parameters outside the physical validity domain of an operation
// (resonant denominators, perturbative ratio >= 1, undefined axis).
// CLI exit code 3.
struct PhysicsError : Error {
  using Error::Error;
};

// Numerical failure during evolution or extraction (norm drift, unsafe
// phase unwrap, finite-difference noise). CLI exit code 4.
struct NumericsError : Error {
  using Error::Error;
};

}  // namespace geomphase
