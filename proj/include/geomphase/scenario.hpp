#pragma once

#include <optional>
#include <string>
#include <vector>

#include "geomphase/evolution.hpp"
#include "geomphase/fields.hpp"
#include "geomphase/regimes.hpp"
#include "geomphase/systems.hpp"
#include "geomphase/types.hpp"

namespace geomphase::scenario {

enum class SystemKind { kSpinHalf, kParityDoublet };

// A fully validated run description, resolved from the JSON config.
struct ScenarioConfig {
  SystemKind kind = SystemKind::kSpinHalf;
  systems::SpinHalfSystem spin_half;
  systems::ParityDoubletSystem doublet;
  std::optional<fields::FieldTrajectory> efield;
  std::optional<fields::FieldTrajectory> bfield;
  Real duration = 0.0;
  std::vector<std::string> backends;  // canonical order, deduplicated
  evolution::EvolutionConfig evolution;
  Real denominator_margin = 1e-9;  // relative guard for second-order poles
  std::string output_path;  // empty when the config names none
  std::string sweep_path;   // JSON pointer of the swept leaf, empty if none
  std::vector<Real> sweep_grid;
};

// Validates backend names, drops duplicates, and returns them in the fixed
// order perturbative, geometric, oracle, dressed.
std::vector<std::string> canonical_backends(
    const std::vector<std::string>& names);

std::string read_file(const std::string& path);

// Parses and validates a JSON scenario. Unknown keys, missing fields, and
// type mismatches throw ConfigError naming the offending path and line.
ScenarioConfig parse_config(const std::string& text);
ScenarioConfig parse_config_file(const std::string& path);

struct BackendRow {
  std::string name;
  Real phase = 0.0;  // stretched-state geometric phase, radians
};

struct PhaseComparison {
  std::vector<BackendRow> backends;
  struct Residual {
    std::string a, b;
    Real value = 0.0;  // (a - b) / max(|a|, |b|)
  };
  std::vector<Residual> residuals;
  bool has_oracle = false;
  Real adiabaticity = 0.0;
  Real unitarity_drift = 0.0;
  Warnings warnings;
};

PhaseComparison run_phase(const ScenarioConfig& cfg);

evolution::OraclePhaseReport run_oracle(const ScenarioConfig& cfg,
                                        Warnings* warnings = nullptr);

struct RegimeReport {
  bool classified = false;
  regimes::RegimeCase regime;  // meaningful only when classified
  Real limiting = 0.0;
  Real full = 0.0;
  Real relative_deviation = 0.0;
};

RegimeReport run_regimes(const ScenarioConfig& cfg);

// Runs the phase backends across the sweep grid and returns the CSV text.
// Rebuilds the scenario from the mutated config for each grid point so
// every run looks exactly like a standalone one. A non-empty
// backend_override replaces the config's backend list.
std::string run_sweep(const std::string& config_text,
                      const std::vector<std::string>& backend_override = {});

}  // namespace geomphase::scenario
