#include "geomphase/report.hpp"

#include <charconv>
#include <cmath>
#include <cstddef>
#include <string>

#include "geomphase/regimes.hpp"

namespace geomphase::report {
namespace {

constexpr Real kDegPerRad = 180.0 / kPi;

std::string to_chars_string(Real value, std::chars_format fmt,
                            int precision) {
  char buf[64];
  const auto res =
      std::to_chars(buf, buf + sizeof(buf), value, fmt, precision);
  return std::string(buf, res.ptr);
}

// Compact scientific rendering for diagnostic lines.
std::string short_number(Real value) {
  return to_chars_string(value, std::chars_format::scientific, 3);
}

std::string pad(std::string s, std::size_t width) {
  while (s.size() < width) s.push_back(' ');
  return s;
}

std::string angle(Real radians, bool degrees) {
  return format_number(degrees ? radians * kDegPerRad : radians);
}

const char* angle_unit(bool degrees) { return degrees ? "deg" : "rad"; }

}  // namespace

std::string format_number(Real value) {
  std::string s = to_chars_string(value, std::chars_format::general, 17);
  if (s.find_first_of(".einafEINAF") == std::string::npos) {
    s += ".0";
  }
  return s;
}

std::string csv_line(const std::vector<std::string>& cells) {
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) line.push_back(',');
    line += cells[i];
  }
  line.push_back('\n');
  return line;
}

std::string phase_csv(const scenario::PhaseComparison& cmp, Real duration) {
  std::vector<std::string> header = {"duration"};
  std::vector<std::string> row = {format_number(duration)};
  for (const auto& b : cmp.backends) {
    header.push_back("phase_" + b.name);
    row.push_back(format_number(b.phase));
  }
  for (const auto& r : cmp.residuals) {
    header.push_back("residual_" + r.a + "_vs_" + r.b);
    row.push_back(format_number(r.value));
  }
  if (cmp.has_oracle) {
    header.push_back("adiabaticity");
    header.push_back("unitarity_drift");
    row.push_back(format_number(cmp.adiabaticity));
    row.push_back(format_number(cmp.unitarity_drift));
  }
  return csv_line(header) + csv_line(row);
}

std::string phase_report(const scenario::PhaseComparison& cmp, Real duration,
                         bool degrees) {
  std::string out = "duration: " + format_number(duration) + "\n";
  out += pad("backend", 14);
  out += std::string("phase [") + angle_unit(degrees) + "]\n";
  for (const auto& b : cmp.backends) {
    out += pad(b.name, 14) + angle(b.phase, degrees) + "\n";
  }
  for (const auto& r : cmp.residuals) {
    out += "residual " + r.a + " vs " + r.b + ": " + short_number(r.value) +
           "\n";
  }
  if (cmp.has_oracle) {
    out += "adiabaticity: " + short_number(cmp.adiabaticity) + "\n";
    out += "unitarity drift: " + short_number(cmp.unitarity_drift) + "\n";
  }
  for (const auto& msg : cmp.warnings.messages) {
    out += "warning: " + msg + "\n";
  }
  return out;
}

std::string oracle_report(const evolution::OraclePhaseReport& rep,
                          Real duration, bool degrees) {
  const std::string unit = std::string(" [") + angle_unit(degrees) + "]";
  std::string out = "duration: " + format_number(duration) + "\n";
  for (const auto& level : rep.levels) {
    out += "level " + level.label + "\n";
    out += "  total phase" + unit + ":     " +
           angle(level.total_phase, degrees) + "\n";
    out += "  dynamical phase" + unit + ": " +
           angle(level.dynamical_phase, degrees) + "\n";
    out += "  geometric phase" + unit + ": " +
           angle(level.geometric_phase, degrees) + "\n";
  }
  out += "stretched geometric difference" + unit + ": " +
         angle(rep.stretched_difference, degrees) + "\n";
  out += "adiabaticity: " + short_number(rep.adiabaticity) + "\n";
  out += "unitarity drift: " + short_number(rep.unitarity_drift) + "\n";
  return out;
}

std::string regimes_report(const scenario::RegimeReport& rep, bool degrees) {
  const std::string unit = std::string(" [") + angle_unit(degrees) + "]";
  std::string out;
  if (!rep.classified) {
    out += "no clean scale separation matches a tabulated case\n";
    out += "full phase" + unit + ": " + angle(rep.full, degrees) + "\n";
    return out;
  }
  out += "table: " + regimes::to_string(rep.regime.table) + "\n";
  out += "case: " + regimes::to_string(rep.regime.case_id) + "\n";
  out += "ordering: " + rep.regime.ordering + "\n";
  out += "limiting form: " + rep.regime.formula + "\n";
  out += "limiting phase" + unit + ": " + angle(rep.limiting, degrees) + "\n";
  out += "full phase" + unit + ": " + angle(rep.full, degrees) + "\n";
  out += "relative deviation: " + short_number(rep.relative_deviation) + "\n";
  return out;
}

}  // namespace geomphase::report
