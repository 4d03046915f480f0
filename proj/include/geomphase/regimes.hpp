#pragma once

#include <optional>
#include <string>

#include "geomphase/systems.hpp"
#include "geomphase/types.hpp"

namespace geomphase::regimes {

// Which transverse field rotates, with the other one static.
enum class TableId { kRotatingE = 1, kRotatingB = 2 };

enum class CaseId { kI = 1, kII = 2, kIII = 3, kIV = 4 };

std::string to_string(TableId table);
std::string to_string(CaseId case_id);

// The four energy scales whose ordering picks a limiting case.
struct RegimeScales {
  Real mu_bz = 0.0;        // |mu0 Bz|
  Real d_ez = 0.0;         // |d0 Ez|
  Real abs_delta1 = 0.0;   // |Delta1|
  Real two_b = 0.0;        // 2B
};

RegimeScales regime_scales(const systems::ParityDoubletSystem& sys, Real ez,
                           Real bz);

struct RegimeCase {
  TableId table = TableId::kRotatingE;
  CaseId case_id = CaseId::kI;
  std::string ordering;  // the scale chain that defines the case
  std::string formula;   // closed form for the phase per w T
};

// Matches the scale ordering against the known chains. a << b is accepted
// when b >= separation_factor * a. Returns nothing when no chain holds.
std::optional<RegimeCase> classify(TableId table, const RegimeScales& scales,
                                   Real separation_factor = 30.0);

// Evaluates the case's closed form literally; wt is the accumulated
// rotation angle w * T.
Real limiting_phase(const RegimeCase& c,
                    const systems::ParityDoubletSystem& sys, Real ez, Real bz,
                    Real perp_amplitude, Real wt);

}  // namespace geomphase::regimes
