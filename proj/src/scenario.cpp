#include "geomphase/scenario.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "geomphase/errors.hpp"
#include "geomphase/perturbation.hpp"
#include "geomphase/report.hpp"
#include "json.hpp"

namespace geomphase::scenario {
namespace {

using nlohmann::json;

constexpr std::array<const char*, 4> kBackendOrder = {"perturbative",
                                                      "geometric", "oracle",
                                                      "dressed"};
constexpr Real kResidualFloor = 1e-300;

std::size_t line_of_offset(const std::string& text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<std::size_t>(
                 std::count(text.begin(), text.begin() + offset, '\n'));
}

// Best-effort line hint for a key name; JSON values carry no positions, so
// the first textual occurrence of the quoted key stands in.
std::string line_hint(const std::string& raw, const std::string& key) {
  const auto pos = raw.find("\"" + key + "\"");
  if (pos == std::string::npos) return "";
  return " (line " + std::to_string(line_of_offset(raw, pos)) + ")";
}

struct Parser {
  const std::string& raw;

  [[noreturn]] void fail(const std::string& msg,
                         const std::string& key = "") const {
    throw ConfigError(msg + (key.empty() ? "" : line_hint(raw, key)));
  }

  void check_keys(const json& obj, const std::string& path,
                  std::initializer_list<const char*> allowed) const {
    for (const auto& item : obj.items()) {
      const bool known =
          std::any_of(allowed.begin(), allowed.end(),
                      [&](const char* k) { return item.key() == k; });
      if (!known) {
        fail("unknown key \"" + item.key() + "\" in " + path, item.key());
      }
    }
  }

  const json& require(const json& obj, const std::string& path,
                      const char* key) const {
    if (!obj.contains(key)) {
      fail("missing required key \"" + std::string(key) + "\" in " + path);
    }
    return obj.at(key);
  }

  void expect_object(const json& j, const std::string& path) const {
    if (!j.is_object()) fail(path + " must be an object");
  }

  Real number(const json& j, const std::string& path) const {
    if (!j.is_number()) fail(path + " must be a number");
    const Real v = j.get<Real>();
    if (!std::isfinite(v)) fail(path + " must be finite");
    return v;
  }

  Real opt_number(const json& obj, const std::string& path, const char* key,
                  Real fallback) const {
    if (!obj.contains(key)) return fallback;
    return number(obj.at(key), path + "/" + key);
  }

  int integer(const json& j, const std::string& path) const {
    if (!j.is_number_integer()) fail(path + " must be an integer");
    return j.get<int>();
  }

  bool boolean(const json& j, const std::string& path) const {
    if (!j.is_boolean()) fail(path + " must be true or false");
    return j.get<bool>();
  }

  std::string string(const json& j, const std::string& path) const {
    if (!j.is_string()) fail(path + " must be a string");
    return j.get<std::string>();
  }
};

fields::FieldTrajectory parse_field(const Parser& p, const json& j,
                                    const std::string& path) {
  p.expect_object(j, path);
  p.check_keys(j, path, {"static_z", "components"});
  fields::FieldTrajectory traj;
  traj.static_z = p.number(p.require(j, path, "static_z"), path + "/static_z");
  if (j.contains("components")) {
    const json& comps = j.at("components");
    if (!comps.is_array()) p.fail(path + "/components must be an array");
    for (std::size_t i = 0; i < comps.size(); ++i) {
      const std::string cpath = path + "/components/" + std::to_string(i);
      const json& c = comps.at(i);
      p.expect_object(c, cpath);
      p.check_keys(c, cpath, {"amplitude", "angular_frequency",
                              "initial_phase"});
      fields::RotatingComponent rc;
      rc.amplitude =
          p.number(p.require(c, cpath, "amplitude"), cpath + "/amplitude");
      rc.angular_frequency = p.number(p.require(c, cpath, "angular_frequency"),
                                      cpath + "/angular_frequency");
      rc.initial_phase = p.opt_number(c, cpath, "initial_phase", 0.0);
      traj.components.push_back(rc);
    }
  }
  try {
    fields::validate(traj);
  } catch (const ConfigError& e) {
    p.fail(path + ": " + e.what());
  }
  return traj;
}

void parse_system(const Parser& p, const json& j, ScenarioConfig& cfg) {
  const std::string path = "/system";
  p.expect_object(j, path);
  const std::string kind =
      p.string(p.require(j, path, "kind"), path + "/kind");
  if (kind == "spin_half") {
    cfg.kind = SystemKind::kSpinHalf;
    p.check_keys(j, path, {"kind", "gamma"});
    cfg.spin_half.gamma = p.opt_number(j, path, "gamma", 1.0);
    systems::validate(cfg.spin_half);
  } else if (kind == "parity_doublet") {
    cfg.kind = SystemKind::kParityDoublet;
    p.check_keys(j, path, {"kind", "half_splitting_B", "d0", "mu0"});
    cfg.doublet.half_splitting_B =
        p.number(p.require(j, path, "half_splitting_B"),
                 path + "/half_splitting_B");
    cfg.doublet.d0 = p.number(p.require(j, path, "d0"), path + "/d0");
    cfg.doublet.mu0 = p.opt_number(j, path, "mu0", 0.0);
    systems::validate(cfg.doublet);
  } else {
    p.fail("/system/kind must be \"spin_half\" or \"parity_doublet\"", "kind");
  }
}

void parse_run(const Parser& p, const json& j, ScenarioConfig& cfg) {
  const std::string path = "/run";
  p.expect_object(j, path);
  p.check_keys(j, path, {"duration", "cycles", "backends", "evolution",
                         "output", "denominator_margin"});

  const bool has_duration = j.contains("duration");
  const bool has_cycles = j.contains("cycles");
  if (has_duration == has_cycles) {
    p.fail("/run needs exactly one of \"duration\" and \"cycles\"");
  }
  if (has_duration) {
    cfg.duration = p.number(j.at("duration"), path + "/duration");
    if (cfg.duration < 0.0) p.fail("/run/duration must be non-negative");
  } else {
    const Real cycles = p.number(j.at("cycles"), path + "/cycles");
    if (cycles < 0.0) p.fail("/run/cycles must be non-negative");
    const fields::FieldTrajectory* rotating = nullptr;
    if (cfg.efield && !cfg.efield->components.empty()) {
      rotating = &*cfg.efield;
    } else if (cfg.bfield && !cfg.bfield->components.empty()) {
      rotating = &*cfg.bfield;
    }
    if (!rotating) {
      p.fail("/run/cycles needs at least one rotating component", "cycles");
    }
    const Real w = std::abs(rotating->components.front().angular_frequency);
    if (w == 0.0) {
      p.fail("/run/cycles needs a nonzero first angular_frequency", "cycles");
    }
    cfg.duration = cycles * kTwoPi / w;
  }

  const json& b = p.require(j, path, "backends");
  if (!b.is_array() || b.empty()) {
    p.fail("/run/backends must be a non-empty array of backend names",
           "backends");
  }
  std::vector<std::string> names;
  for (std::size_t i = 0; i < b.size(); ++i) {
    names.push_back(
        p.string(b.at(i), path + "/backends/" + std::to_string(i)));
  }
  cfg.backends = canonical_backends(names);

  if (j.contains("evolution")) {
    const json& e = j.at("evolution");
    const std::string epath = path + "/evolution";
    p.expect_object(e, epath);
    p.check_keys(e, epath,
                 {"steps_per_fastest_period", "unitarity_tolerance",
                  "max_phase_per_step", "degeneracy_cluster_tol",
                  "energy_offset", "apply_unitarity_budget"});
    auto& ev = cfg.evolution;
    if (e.contains("steps_per_fastest_period")) {
      ev.steps_per_fastest_period =
          p.integer(e.at("steps_per_fastest_period"),
                    epath + "/steps_per_fastest_period");
    }
    ev.unitarity_tolerance = p.opt_number(e, epath, "unitarity_tolerance",
                                          ev.unitarity_tolerance);
    ev.max_phase_per_step =
        p.opt_number(e, epath, "max_phase_per_step", ev.max_phase_per_step);
    ev.degeneracy_cluster_tol = p.opt_number(
        e, epath, "degeneracy_cluster_tol", ev.degeneracy_cluster_tol);
    ev.energy_offset =
        p.opt_number(e, epath, "energy_offset", ev.energy_offset);
    if (e.contains("apply_unitarity_budget")) {
      ev.apply_unitarity_budget = p.boolean(
          e.at("apply_unitarity_budget"), epath + "/apply_unitarity_budget");
    }
    try {
      evolution::validate(ev);
    } catch (const ConfigError& err) {
      p.fail(epath + ": " + err.what());
    }
  }

  cfg.denominator_margin =
      p.opt_number(j, path, "denominator_margin", cfg.denominator_margin);
  if (cfg.denominator_margin <= 0.0) {
    p.fail("/run/denominator_margin must be positive", "denominator_margin");
  }

  if (j.contains("output")) {
    cfg.output_path = p.string(j.at("output"), path + "/output");
  }
}

ScenarioConfig build_scenario(const json& root, const std::string& raw) {
  Parser p{raw};
  p.expect_object(root, "config root");
  p.check_keys(root, "the config root",
               {"system", "efield", "bfield", "run", "sweep"});

  ScenarioConfig cfg;
  parse_system(p, p.require(root, "the config root", "system"), cfg);

  if (root.contains("efield")) {
    cfg.efield = parse_field(p, root.at("efield"), "/efield");
  }
  if (root.contains("bfield")) {
    cfg.bfield = parse_field(p, root.at("bfield"), "/bfield");
  }
  if (!cfg.efield && !cfg.bfield) {
    p.fail("the config needs an efield or bfield block");
  }
  if (cfg.kind == SystemKind::kSpinHalf) {
    if (cfg.efield) {
      p.fail("spin_half scenarios take a bfield block only", "efield");
    }
    if (!cfg.bfield) p.fail("spin_half scenarios need a bfield block");
  }

  parse_run(p, p.require(root, "the config root", "run"), cfg);

  if (root.contains("sweep")) {
    const json& s = root.at("sweep");
    const std::string spath = "/sweep";
    p.expect_object(s, spath);
    p.check_keys(s, spath, {"path", "grid"});
    cfg.sweep_path = p.string(p.require(s, spath, "path"), spath + "/path");
    const json& grid = p.require(s, spath, "grid");
    if (!grid.is_array()) p.fail("/sweep/grid must be an array of numbers");
    for (std::size_t i = 0; i < grid.size(); ++i) {
      cfg.sweep_grid.push_back(
          p.number(grid.at(i), spath + "/grid/" + std::to_string(i)));
    }
  }
  return cfg;
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("config is not valid JSON (line " +
                      std::to_string(line_of_offset(text, e.byte)) +
                      "): " + e.what());
  }
}

enum class DoubletDrive { kPureE, kRotEStaticB, kRotBStaticE };

// Splits the doublet configurations the closed forms cover: exactly one
// rotating component, living in either the electric or the magnetic block.
DoubletDrive doublet_drive(const ScenarioConfig& cfg) {
  const bool e_rot = cfg.efield && !cfg.efield->components.empty();
  const bool b_rot = cfg.bfield && !cfg.bfield->components.empty();
  if (e_rot && b_rot) {
    throw ConfigError(
        "parity_doublet closed forms take one rotating field block; move the "
        "components into a single block or run the oracle backend alone");
  }
  if (e_rot) {
    if (cfg.efield->components.size() > 1) {
      throw ConfigError(
          "parity_doublet closed forms take a single rotating component");
    }
    const bool b_static =
        cfg.bfield && cfg.bfield->static_z != 0.0;
    return b_static ? DoubletDrive::kRotEStaticB : DoubletDrive::kPureE;
  }
  if (b_rot) {
    if (cfg.bfield->components.size() > 1) {
      throw ConfigError(
          "parity_doublet closed forms take a single rotating component");
    }
    return DoubletDrive::kRotBStaticE;
  }
  throw ConfigError(
      "parity_doublet closed forms need one rotating component");
}

Real doublet_perturbative(const ScenarioConfig& cfg, Warnings* warnings) {
  const auto drive = doublet_drive(cfg);
  const Real ez = cfg.efield ? cfg.efield->static_z : 0.0;
  const Real bz = cfg.bfield ? cfg.bfield->static_z : 0.0;
  perturbation::Spin1Shifts shifts;
  if (drive == DoubletDrive::kRotBStaticE) {
    const auto& c = cfg.bfield->components.front();
    shifts = perturbation::spin1_rotB_staticE_shifts(
        cfg.doublet, ez, bz, c.amplitude, c.angular_frequency, warnings,
        cfg.denominator_margin);
  } else {
    const auto& c = cfg.efield->components.front();
    if (drive == DoubletDrive::kPureE) {
      shifts = perturbation::spin1_efield_shifts(
          cfg.doublet, ez, c.amplitude, c.angular_frequency, warnings);
    } else {
      shifts = perturbation::spin1_rotE_staticB_shifts(
          cfg.doublet, ez, bz, c.amplitude, c.angular_frequency, warnings,
          cfg.denominator_margin);
    }
  }
  return perturbation::integrate_phase(shifts.difference, cfg.duration)
      .geometric_phase;
}

Real backend_phase(const ScenarioConfig& cfg, const std::string& name,
                   PhaseComparison& cmp) {
  Warnings* w = &cmp.warnings;
  if (cfg.kind == SystemKind::kSpinHalf) {
    const auto& traj = *cfg.bfield;
    if (name == "perturbative") {
      return perturbation::spinhalf_geometric_phase(cfg.spin_half, traj,
                                                    cfg.duration, w)
          .geometric_phase;
    }
    if (name == "geometric") {
      return fields::solid_angle_small(traj, cfg.duration, w);
    }
    if (name == "oracle") {
      const auto rep = evolution::extract_geometric_phase(
          cfg.spin_half, traj, cfg.duration, cfg.evolution, w);
      cmp.has_oracle = true;
      cmp.adiabaticity = rep.adiabaticity;
      cmp.unitarity_drift = rep.unitarity_drift;
      return rep.stretched_difference;
    }
    if (name == "dressed") {
      if (traj.components.size() != 1) {
        throw ConfigError(
            "dressed backend takes exactly one rotating component");
      }
      const auto& c = traj.components.front();
      return evolution::dressed_exact_spinhalf(cfg.spin_half, traj.static_z,
                                               c.amplitude,
                                               c.angular_frequency,
                                               cfg.duration)
          .geometric_phase;
    }
  } else {
    if (name == "perturbative") {
      return doublet_perturbative(cfg, w);
    }
    if (name == "geometric") {
      if (doublet_drive(cfg) != DoubletDrive::kPureE) {
        throw ConfigError(
            "geometric backend covers spin_half and the pure rotating-E "
            "doublet drive only");
      }
      return 2.0 * fields::solid_angle_small(*cfg.efield, cfg.duration, w);
    }
    if (name == "oracle") {
      const fields::FieldTrajectory empty{};
      const auto rep = evolution::extract_geometric_phase(
          cfg.doublet, cfg.efield ? *cfg.efield : empty,
          cfg.bfield ? *cfg.bfield : empty, cfg.duration, cfg.evolution, {},
          w);
      cmp.has_oracle = true;
      cmp.adiabaticity = rep.adiabaticity;
      cmp.unitarity_drift = rep.unitarity_drift;
      return rep.stretched_difference;
    }
    if (name == "dressed") {
      throw ConfigError("dressed backend covers spin_half only");
    }
  }
  throw ConfigError("unknown backend \"" + name + "\"");
}

}  // namespace

std::vector<std::string> canonical_backends(
    const std::vector<std::string>& names) {
  if (names.empty()) {
    throw ConfigError("backend list must not be empty");
  }
  for (const auto& n : names) {
    const bool known =
        std::any_of(kBackendOrder.begin(), kBackendOrder.end(),
                    [&](const char* k) { return n == k; });
    if (!known) {
      throw ConfigError("unknown backend \"" + n +
                        "\"; known backends: perturbative, geometric, "
                        "oracle, dressed");
    }
  }
  std::vector<std::string> out;
  for (const char* k : kBackendOrder) {
    if (std::find(names.begin(), names.end(), k) != names.end()) {
      out.emplace_back(k);
    }
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError("cannot read config file: " + path);
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ScenarioConfig parse_config(const std::string& text) {
  return build_scenario(parse_json(text), text);
}

ScenarioConfig parse_config_file(const std::string& path) {
  return parse_config(read_file(path));
}

PhaseComparison run_phase(const ScenarioConfig& cfg) {
  PhaseComparison cmp;
  for (const auto& name : cfg.backends) {
    cmp.backends.push_back({name, backend_phase(cfg, name, cmp)});
  }
  for (std::size_t i = 0; i < cmp.backends.size(); ++i) {
    for (std::size_t j = i + 1; j < cmp.backends.size(); ++j) {
      const Real a = cmp.backends[i].phase;
      const Real b = cmp.backends[j].phase;
      const Real denom = std::max({std::abs(a), std::abs(b), kResidualFloor});
      cmp.residuals.push_back(
          {cmp.backends[i].name, cmp.backends[j].name, (a - b) / denom});
    }
  }
  return cmp;
}

evolution::OraclePhaseReport run_oracle(const ScenarioConfig& cfg,
                                        Warnings* warnings) {
  if (cfg.kind == SystemKind::kSpinHalf) {
    return evolution::extract_geometric_phase(cfg.spin_half, *cfg.bfield,
                                              cfg.duration, cfg.evolution,
                                              warnings);
  }
  const fields::FieldTrajectory empty{};
  return evolution::extract_geometric_phase(
      cfg.doublet, cfg.efield ? *cfg.efield : empty,
      cfg.bfield ? *cfg.bfield : empty, cfg.duration, cfg.evolution, {},
      warnings);
}

RegimeReport run_regimes(const ScenarioConfig& cfg) {
  if (cfg.kind != SystemKind::kParityDoublet) {
    throw ConfigError("regime classification needs a parity_doublet system");
  }
  const auto drive = doublet_drive(cfg);
  const Real ez = cfg.efield ? cfg.efield->static_z : 0.0;
  const Real bz = cfg.bfield ? cfg.bfield->static_z : 0.0;
  const auto& comp = drive == DoubletDrive::kRotBStaticE
                         ? cfg.bfield->components.front()
                         : cfg.efield->components.front();
  const auto table = drive == DoubletDrive::kRotBStaticE
                         ? regimes::TableId::kRotatingB
                         : regimes::TableId::kRotatingE;

  RegimeReport rep;
  Warnings ignored;
  rep.full = doublet_perturbative(cfg, &ignored);
  const auto scales = regimes::regime_scales(cfg.doublet, ez, bz);
  const auto match = regimes::classify(table, scales);
  if (!match) return rep;
  rep.classified = true;
  rep.regime = *match;
  rep.limiting =
      regimes::limiting_phase(*match, cfg.doublet, ez, bz, comp.amplitude,
                              comp.angular_frequency * cfg.duration);
  rep.relative_deviation =
      std::abs(rep.limiting - rep.full) /
      std::max(std::abs(rep.full), kResidualFloor);
  return rep;
}

std::string run_sweep(const std::string& config_text,
                      const std::vector<std::string>& backend_override) {
  const json root = parse_json(config_text);
  ScenarioConfig base = build_scenario(root, config_text);
  if (base.sweep_path.empty()) {
    throw ConfigError(
        "sweep runs need a sweep block with \"path\" and \"grid\"");
  }
  if (!backend_override.empty()) base.backends = backend_override;

  json::json_pointer ptr;
  try {
    ptr = json::json_pointer(base.sweep_path);
  } catch (const json::exception&) {
    throw ConfigError("sweep path \"" + base.sweep_path +
                      "\" is not a valid JSON pointer");
  }
  if (!root.contains(ptr)) {
    throw ConfigError("sweep path \"" + base.sweep_path +
                      "\" does not name an existing config leaf");
  }
  if (!root.at(ptr).is_number()) {
    throw ConfigError("sweep path \"" + base.sweep_path +
                      "\" must point at a numeric leaf");
  }

  std::vector<std::string> header = {"swept_value"};
  for (const auto& name : base.backends) header.push_back("phase_" + name);
  for (std::size_t i = 0; i < base.backends.size(); ++i) {
    for (std::size_t j = i + 1; j < base.backends.size(); ++j) {
      header.push_back("residual_" + base.backends[i] + "_vs_" +
                       base.backends[j]);
    }
  }

  std::string csv = report::csv_line(header);
  for (const Real value : base.sweep_grid) {
    json point = root;
    point.at(ptr) = value;
    ScenarioConfig cfg = build_scenario(point, config_text);
    cfg.backends = base.backends;
    const PhaseComparison cmp = run_phase(cfg);
    std::vector<std::string> cells = {report::format_number(value)};
    for (const auto& row : cmp.backends) {
      cells.push_back(report::format_number(row.phase));
    }
    for (const auto& r : cmp.residuals) {
      cells.push_back(report::format_number(r.value));
    }
    csv += report::csv_line(cells);
  }
  return csv;
}

}  // namespace geomphase::scenario
