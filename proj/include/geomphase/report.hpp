#pragma once

#include <string>
#include <vector>

#include "geomphase/evolution.hpp"
#include "geomphase/scenario.hpp"
#include "geomphase/types.hpp"

namespace geomphase::report {

// Round-trippable decimal rendering: up to 17 significant digits, always
// carrying a '.' or an exponent so the token reads as floating point.
std::string format_number(Real value);

std::string csv_line(const std::vector<std::string>& cells);

// One-row CSV for a single phase comparison.
std::string phase_csv(const scenario::PhaseComparison& cmp, Real duration);

// Human-readable comparison table. Degrees affect the display only.
std::string phase_report(const scenario::PhaseComparison& cmp, Real duration,
                         bool degrees);

std::string oracle_report(const evolution::OraclePhaseReport& rep,
                          Real duration, bool degrees);

std::string regimes_report(const scenario::RegimeReport& rep, bool degrees);

}  // namespace geomphase::report
