#include "doctest.h"

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "geomphase/errors.hpp"
#include "geomphase/fields.hpp"
#include "geomphase/report.hpp"
#include "geomphase/scenario.hpp"
#include "geomphase/types.hpp"

using namespace geomphase;
namespace sc = geomphase::scenario;

namespace {

std::string temp_path(const std::string& stem) {
  static int counter = 0;
  return "/tmp/geomphase_cli_" + std::to_string(::getpid()) + "_" +
         std::to_string(counter++) + "_" + stem;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  REQUIRE(out.good());
  out << text;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct CliRun {
  int code = -1;
  std::string output;  // stdout and stderr combined
};

CliRun cli(const std::string& args) {
  const std::string capture = temp_path("capture.txt");
  const std::string cmd = std::string(GEOMPHASE_CLI_PATH) + " " + args +
                          " > " + capture + " 2>&1";
  const int status = std::system(cmd.c_str());
  CliRun r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.output = slurp(capture);
  std::remove(capture.c_str());
  return r;
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::string line;
  for (const char c : text) {
    if (c == '\n') {
      lines.push_back(line);
      line.clear();
    } else {
      line.push_back(c);
    }
  }
  if (!line.empty()) lines.push_back(line);
  return lines;
}

std::vector<std::string> csv_cells(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  for (const char c : line) {
    if (c == ',') {
      cells.push_back(cell);
      cell.clear();
    } else {
      cell.push_back(c);
    }
  }
  cells.push_back(cell);
  return cells;
}

std::string config_error(const std::string& text) {
  try {
    sc::parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

const char* kSpinHalfJson = R"({
  "system": {"kind": "spin_half", "gamma": 1.0},
  "bfield": {
    "static_z": 1.0,
    "components": [{"amplitude": 0.1, "angular_frequency": 0.001}]
  },
  "run": {"cycles": 1, "backends": ["perturbative", "geometric", "oracle"]}
})";

const char* kPureEJson = R"({
  "system": {"kind": "parity_doublet", "half_splitting_B": 1.0, "d0": 1.0},
  "efield": {
    "static_z": 0.5,
    "components": [{"amplitude": 0.05, "angular_frequency": 0.001}]
  },
  "run": {"cycles": 1, "backends": ["perturbative", "geometric"]}
})";

}  // namespace

TEST_CASE("config parsing resolves cycles and canonicalizes backends") {
  const auto cfg = sc::parse_config(R"({
    "system": {"kind": "spin_half"},
    "bfield": {
      "static_z": 2.0,
      "components": [{"amplitude": 0.1, "angular_frequency": 0.001,
                      "initial_phase": 0.25}]
    },
    "run": {"cycles": 3, "backends": ["oracle", "perturbative", "oracle"]}
  })");
  CHECK(cfg.kind == sc::SystemKind::kSpinHalf);
  CHECK(cfg.spin_half.gamma == 1.0);
  REQUIRE(cfg.bfield.has_value());
  CHECK(cfg.bfield->components.front().initial_phase == 0.25);
  CHECK(cfg.duration == doctest::Approx(3.0 * kTwoPi / 0.001).epsilon(1e-14));
  REQUIRE(cfg.backends.size() == 2);
  CHECK(cfg.backends[0] == "perturbative");
  CHECK(cfg.backends[1] == "oracle");
}

TEST_CASE("config errors name the offending field") {
  CHECK(config_error(R"({
    "system": {"kind": "spin_half"},
    "bfield": {"components": []},
    "run": {"cycles": 1, "backends": ["perturbative"]}
  })").find("static_z") != std::string::npos);

  const std::string unknown = config_error(R"({
    "system": {"kind": "spin_half", "gama": 2.0},
    "bfield": {"static_z": 1.0},
    "run": {"duration": 1.0, "backends": ["perturbative"]}
  })");
  CHECK(unknown.find("gama") != std::string::npos);
  CHECK(unknown.find("line 2") != std::string::npos);

  CHECK(config_error(R"({
    "system": {"kind": "spin_half"},
    "efield": {"static_z": 1.0},
    "bfield": {"static_z": 1.0},
    "run": {"duration": 1.0, "backends": ["perturbative"]}
  })").find("spin_half") != std::string::npos);

  CHECK(config_error(R"({
    "system": {"kind": "spin_half"},
    "bfield": {"static_z": 1.0},
    "run": {"duration": 1.0, "cycles": 1.0, "backends": ["perturbative"]}
  })").find("exactly one") != std::string::npos);

  CHECK(config_error(R"({
    "system": {"kind": "spin_half"},
    "bfield": {"static_z": 1.0},
    "run": {"duration": 1.0, "backends": ["perturbativ"]}
  })").find("perturbativ") != std::string::npos);

  CHECK(config_error(R"({
    "system": {"kind": "spin_half"},
    "bfield": {"static_z": 1.0},
    "run": {"duration": 1.0, "backends": ["oracle"],
            "evolution": {"steps_per_fastest_period": 8}}
  })").find("evolution") != std::string::npos);

  CHECK(config_error(R"({
    "system": {"kind": "spin_half"},
    "bfield": {"static_z": 1.0},
    "run": {"duration": -2.0, "backends": ["oracle"]}
  })").find("non-negative") != std::string::npos);

  CHECK(config_error(R"({
    "system": {"kind": "parity_doublet", "half_splitting_B": 1.0, "d0": 1.0},
    "run": {"duration": 1.0, "backends": ["oracle"]}
  })").find("field block") != std::string::npos);

  CHECK(config_error(R"({
    "system": {"kind": "spin_half"},
    "bfield": {"static_z": 1.0},
    "run": {"duration": 1.0, "backends": ["oracle"]},
    "sweep": {"path": "/bfield/static_z", "grid": [1.0, "two"]}
  })").find("/sweep/grid/1") != std::string::npos);

  CHECK(config_error("{ not json }").find("not valid JSON") !=
        std::string::npos);
}

TEST_CASE("standard one-cycle comparison matches the closed form") {
  const auto cfg = sc::parse_config(kSpinHalfJson);
  const auto cmp = sc::run_phase(cfg);
  REQUIRE(cmp.backends.size() == 3);
  const Real expected = kPi * 0.01;
  CHECK(cmp.backends[0].name == "perturbative");
  CHECK(cmp.backends[0].phase == doctest::Approx(expected).epsilon(1e-12));
  CHECK(cmp.backends[1].name == "geometric");
  CHECK(cmp.backends[1].phase == doctest::Approx(expected).epsilon(1e-12));
  CHECK(cmp.backends[2].name == "oracle");
  CHECK(cmp.backends[2].phase == doctest::Approx(expected).epsilon(0.01));
  REQUIRE(cmp.residuals.size() == 3);
  CHECK(cmp.residuals[0].a == "perturbative");
  CHECK(cmp.residuals[0].b == "geometric");
  CHECK(std::abs(cmp.residuals[0].value) < 1e-12);
  CHECK(cmp.has_oracle);
  CHECK(cmp.adiabaticity < 0.01);
  CHECK(cmp.unitarity_drift <= 1e-9);
}

TEST_CASE("pure electric drive doubles the swept solid angle") {
  const auto cfg = sc::parse_config(kPureEJson);
  const auto cmp = sc::run_phase(cfg);
  const Real ratio = 0.05 / 0.5;
  const Real expected = kTwoPi * ratio * ratio;
  REQUIRE(cmp.backends.size() == 2);
  CHECK(cmp.backends[0].phase == doctest::Approx(expected).epsilon(1e-12));
  CHECK(cmp.backends[1].phase ==
        doctest::Approx(2.0 * fields::solid_angle_small(*cfg.efield,
                                                        cfg.duration))
            .epsilon(1e-12));
  CHECK(std::abs(cmp.residuals[0].value) < 1e-12);
}

TEST_CASE("regime command classifies and evaluates the limiting form") {
  const auto cfg = sc::parse_config(R"({
    "system": {"kind": "parity_doublet", "half_splitting_B": 1.0,
               "d0": 1.0, "mu0": 0.001},
    "efield": {
      "static_z": 2000.0,
      "components": [{"amplitude": 200.0, "angular_frequency": 1e-6}]
    },
    "bfield": {"static_z": 1.0},
    "run": {"cycles": 1, "backends": ["perturbative"],
            "denominator_margin": 1e-12}
  })");
  const auto rep = sc::run_regimes(cfg);
  REQUIRE(rep.classified);
  CHECK(rep.regime.table == regimes::TableId::kRotatingE);
  CHECK(rep.regime.case_id == regimes::CaseId::kI);
  CHECK(rep.limiting == doctest::Approx(kTwoPi * 0.01).epsilon(1e-12));
  CHECK(rep.relative_deviation < 1e-9);

  const auto spin = sc::parse_config(kSpinHalfJson);
  CHECK_THROWS_AS((void)sc::run_regimes(spin), ConfigError);
}

TEST_CASE("sweep re-runs the backends across the grid") {
  std::string text = kSpinHalfJson;
  text.insert(text.rfind('}'),
              R"(, "sweep": {"path": "/bfield/components/0/amplitude",
                             "grid": [0.02, 0.1]})");
  // keep the grid cheap: drop the oracle
  const auto csv = sc::run_sweep(text, {"perturbative", "geometric"});
  const auto lines = split_lines(csv);
  REQUIRE(lines.size() == 3);
  CHECK(lines[0] ==
        "swept_value,phase_perturbative,phase_geometric,"
        "residual_perturbative_vs_geometric");
  const auto row1 = csv_cells(lines[1]);
  const auto row2 = csv_cells(lines[2]);
  REQUIRE(row1.size() == 4);
  const Real p1 = std::stod(row1[1]);
  const Real p2 = std::stod(row2[1]);
  CHECK(p2 / p1 == doctest::Approx(25.0).epsilon(1e-9));
  CHECK(std::stod(row1[0]) == 0.02);
  CHECK(std::stod(row2[0]) == 0.1);
}

TEST_CASE("two-frequency sweep shows the beat oscillation") {
  const Real a1 = 0.1, w1 = 0.01, a2 = 0.05, w2 = 0.012;
  const Real dw = w2 - w1;
  std::string text = R"({
    "system": {"kind": "spin_half"},
    "bfield": {
      "static_z": 1.0,
      "components": [{"amplitude": 0.1, "angular_frequency": 0.01},
                     {"amplitude": 0.05, "angular_frequency": 0.012}]
    },
    "run": {"duration": 1.0, "backends": ["perturbative"]},
    "sweep": {"path": "/run/duration", "grid": [GRID]}
  })";
  std::string grid;
  std::vector<Real> durations;
  for (int k = 1; k <= 8; ++k) {
    const Real t = static_cast<Real>(k) * kPi / (2.0 * dw);
    durations.push_back(t);
    if (k > 1) grid += ", ";
    grid += report::format_number(t);
  }
  text.replace(text.find("GRID"), 4, grid);

  const auto lines = split_lines(sc::run_sweep(text));
  REQUIRE(lines.size() == 9);
  std::vector<Real> wobble;
  for (std::size_t i = 0; i < durations.size(); ++i) {
    const Real t = durations[i];
    const Real phase = std::stod(csv_cells(lines[i + 1])[1]);
    fields::FieldTrajectory traj{1.0, {{a1, w1, 0.0}, {a2, w2, 0.0}}};
    CHECK(phase ==
          doctest::Approx(fields::swept_area(traj, t)).epsilon(1e-12));
    const Real line = 0.5 * (a1 * a1 * w1 + a2 * a2 * w2) * t;
    wobble.push_back(phase - line);
  }
  // cross term ~ sin(dw t): sign flips each half period, zero at multiples
  CHECK(wobble[0] > 1e-5);   // dw t = pi/2
  CHECK(wobble[2] < -1e-5);  // dw t = 3 pi / 2
  CHECK(wobble[4] > 1e-5);   // dw t = 5 pi / 2
  CHECK(std::abs(wobble[3]) < 1e-12);  // dw t = 2 pi
  CHECK(std::abs(wobble[7]) < 1e-12);  // dw t = 4 pi
}

TEST_CASE("sweep validation rejects bad paths and non-numeric leaves") {
  std::string base = kSpinHalfJson;
  auto with_sweep = [&](const std::string& sweep) {
    std::string text = base;
    text.insert(text.rfind('}'), ", " + sweep);
    return text;
  };
  CHECK_THROWS_WITH_AS(
      (void)sc::run_sweep(with_sweep(
          R"("sweep": {"path": "/bfield/componentz/0/amplitude",
                       "grid": [0.1]})")),
      doctest::Contains("does not name"), ConfigError);
  CHECK_THROWS_WITH_AS(
      (void)sc::run_sweep(with_sweep(
          R"("sweep": {"path": "/system/kind", "grid": [0.1]})")),
      doctest::Contains("numeric"), ConfigError);
  CHECK_THROWS_WITH_AS(
      (void)sc::run_sweep(with_sweep(
          R"("sweep": {"path": "bad pointer", "grid": [0.1]})")),
      doctest::Contains("JSON pointer"), ConfigError);
  CHECK_THROWS_WITH_AS((void)sc::run_sweep(base),
                       doctest::Contains("sweep block"), ConfigError);
}

TEST_CASE("empty sweep grid emits the header only") {
  std::string text = kSpinHalfJson;
  text.insert(text.rfind('}'),
              R"(, "sweep": {"path": "/bfield/static_z", "grid": []})");
  const auto csv = sc::run_sweep(text);
  const auto lines = split_lines(csv);
  REQUIRE(lines.size() == 1);
  CHECK(lines[0].rfind("swept_value,phase_perturbative", 0) == 0);
}

TEST_CASE("csv numbers round-trip at full precision") {
  CHECK(report::format_number(1.0) == "1.0");
  CHECK(report::format_number(-2.0) == "-2.0");
  CHECK(std::stod(report::format_number(0.1)) == 0.1);
  const Real pi100 = kPi * 0.01;
  CHECK(std::stod(report::format_number(pi100)) == pi100);
  CHECK(std::stod(report::format_number(1e-300)) == 1e-300);
  CHECK(report::csv_line({"a", "b", "c"}) == "a,b,c\n");
}

TEST_CASE("dressed and geometric backends guard their domains") {
  auto cfg = sc::parse_config(kPureEJson);
  cfg.backends = {"dressed"};
  CHECK_THROWS_WITH_AS((void)sc::run_phase(cfg),
                       doctest::Contains("spin_half"), ConfigError);

  auto rot_e = sc::parse_config(R"({
    "system": {"kind": "parity_doublet", "half_splitting_B": 1.0,
               "d0": 1.0, "mu0": 0.5},
    "efield": {
      "static_z": 0.5,
      "components": [{"amplitude": 0.05, "angular_frequency": 0.001}]
    },
    "bfield": {"static_z": 1.0},
    "run": {"cycles": 1, "backends": ["perturbative"]}
  })");
  CHECK(sc::run_phase(rot_e).backends[0].phase != 0.0);
  rot_e.backends = {"geometric"};
  CHECK_THROWS_AS((void)sc::run_phase(rot_e), ConfigError);

  auto both = sc::parse_config(R"({
    "system": {"kind": "parity_doublet", "half_splitting_B": 1.0, "d0": 1.0},
    "efield": {
      "static_z": 0.5,
      "components": [{"amplitude": 0.05, "angular_frequency": 0.001}]
    },
    "bfield": {
      "static_z": 1.0,
      "components": [{"amplitude": 0.01, "angular_frequency": 0.002}]
    },
    "run": {"cycles": 1, "backends": ["perturbative"]}
  })");
  CHECK_THROWS_WITH_AS((void)sc::run_phase(both),
                       doctest::Contains("one rotating"), ConfigError);
}

TEST_CASE("the binary reports config, physics, and numerics failures "
          "distinctly") {
  const std::string bad = temp_path("bad.json");
  write_file(bad, R"({
    "system": {"kind": "spin_half"},
    "bfield": {"components": []},
    "run": {"cycles": 1, "backends": ["perturbative"]}
  })");
  auto r = cli("phase --config " + bad);
  CHECK(r.code == 2);
  CHECK(r.output.find("static_z") != std::string::npos);

  const std::string resonant = temp_path("resonant.json");
  write_file(resonant, R"({
    "system": {"kind": "spin_half"},
    "bfield": {"static_z": 1.0,
               "components": [{"amplitude": 0.1, "angular_frequency": 1.0}]},
    "run": {"cycles": 1, "backends": ["perturbative"]}
  })");
  r = cli("phase --config " + resonant);
  CHECK(r.code == 3);
  CHECK(r.output.find("resonant") != std::string::npos);

  const std::string drift = temp_path("drift.json");
  write_file(drift, R"({
    "system": {"kind": "spin_half"},
    "bfield": {"static_z": 1.0,
               "components": [{"amplitude": 0.1,
                               "angular_frequency": 0.001}]},
    "run": {"cycles": 1, "backends": ["oracle"],
            "evolution": {"unitarity_tolerance": 1e-15,
                          "apply_unitarity_budget": false,
                          "steps_per_fastest_period": 64}}
  })");
  r = cli("phase --config " + drift);
  CHECK(r.code == 4);
  CHECK(r.output.find("norm") != std::string::npos);

  r = cli("phase --config /nonexistent/nowhere.json");
  CHECK(r.code == 2);

  std::remove(bad.c_str());
  std::remove(resonant.c_str());
  std::remove(drift.c_str());
}

TEST_CASE("repeated binary sweeps are byte-identical") {
  const std::string config = temp_path("sweep.json");
  std::string text = kSpinHalfJson;
  text.insert(text.rfind('}'),
              R"(, "sweep": {"path": "/bfield/components/0/amplitude",
                             "grid": [0.02, 0.05, 0.1]})");
  write_file(config, text);
  const std::string out1 = temp_path("a.csv");
  const std::string out2 = temp_path("b.csv");
  const std::string args = "sweep --config " + config +
                           " --backends perturbative,geometric --out ";
  REQUIRE(cli(args + out1).code == 0);
  REQUIRE(cli(args + out2).code == 0);
  const std::string csv1 = slurp(out1);
  CHECK(csv1 == slurp(out2));
  CHECK(csv1.find("\r") == std::string::npos);
  CHECK(split_lines(csv1).size() == 4);
  std::remove(config.c_str());
  std::remove(out1.c_str());
  std::remove(out2.c_str());
}

TEST_CASE("degree display leaves the csv in radians") {
  const std::string config = temp_path("deg.json");
  write_file(config, R"({
    "system": {"kind": "spin_half"},
    "bfield": {"static_z": 1.0,
               "components": [{"amplitude": 0.1,
                               "angular_frequency": 0.001}]},
    "run": {"cycles": 1, "backends": ["perturbative"]}
  })");
  const std::string out1 = temp_path("rad.csv");
  const std::string out2 = temp_path("deg.csv");
  auto plain = cli("phase --config " + config + " --out " + out1);
  auto deg = cli("phase --config " + config + " --degrees --out " + out2);
  REQUIRE(plain.code == 0);
  REQUIRE(deg.code == 0);
  CHECK(plain.output.find("[rad]") != std::string::npos);
  CHECK(deg.output.find("[deg]") != std::string::npos);
  CHECK(deg.output.find("1.8") != std::string::npos);
  CHECK(slurp(out1) == slurp(out2));
  CHECK(slurp(out1).find("0.031415926535897934") != std::string::npos);
  std::remove(config.c_str());
  std::remove(out1.c_str());
  std::remove(out2.c_str());
}

TEST_CASE("oracle command prints per-level splits") {
  const std::string config = temp_path("oracle.json");
  write_file(config, kPureEJson);
  const auto r = cli("oracle --config " + config);
  CHECK(r.code == 0);
  CHECK(r.output.find("level |1,+1>") != std::string::npos);
  CHECK(r.output.find("level |1,-1>") != std::string::npos);
  CHECK(r.output.find("stretched geometric difference") !=
        std::string::npos);
  CHECK(r.output.find("dynamical phase") != std::string::npos);
  std::remove(config.c_str());
}

TEST_CASE("run block output path writes the comparison row") {
  const std::string out = temp_path("row.csv");
  const std::string config = temp_path("outpath.json");
  write_file(config, R"({
    "system": {"kind": "spin_half"},
    "bfield": {"static_z": 1.0,
               "components": [{"amplitude": 0.1,
                               "angular_frequency": 0.001}]},
    "run": {"cycles": 1, "backends": ["perturbative", "geometric"],
            "output": ")" + out + R"("}
  })");
  REQUIRE(cli("phase --config " + config).code == 0);
  const auto lines = split_lines(slurp(out));
  REQUIRE(lines.size() == 2);
  CHECK(lines[0] ==
        "duration,phase_perturbative,phase_geometric,"
        "residual_perturbative_vs_geometric");
  CHECK(csv_cells(lines[1]).size() == 4);
  std::remove(config.c_str());
  std::remove(out.c_str());
}
