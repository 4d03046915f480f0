#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "geomphase/errors.hpp"
#include "geomphase/report.hpp"
#include "geomphase/scenario.hpp"

namespace {

using namespace geomphase;

std::vector<std::string> split_list(const std::string& csv) {
  std::vector<std::string> out;
  std::string item;
  for (const char c : csv) {
    if (c == ',') {
      if (!item.empty()) out.push_back(item);
      item.clear();
    } else if (c != ' ') {
      item.push_back(c);
    }
  }
  if (!item.empty()) out.push_back(item);
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw ConfigError("cannot open output file: " + path);
  }
  out << text;
}

struct Options {
  std::string config_path;
  std::string backends_arg;
  std::string out_path;
  bool degrees = false;
};

int cmd_phase(const Options& opt) {
  scenario::ScenarioConfig cfg =
      scenario::parse_config_file(opt.config_path);
  if (!opt.backends_arg.empty()) {
    cfg.backends = scenario::canonical_backends(split_list(opt.backends_arg));
  }
  const auto cmp = scenario::run_phase(cfg);
  std::cout << report::phase_report(cmp, cfg.duration, opt.degrees);
  const std::string target =
      opt.out_path.empty() ? cfg.output_path : opt.out_path;
  if (!target.empty()) {
    write_text(target, report::phase_csv(cmp, cfg.duration));
  }
  return 0;
}

int cmd_sweep(const Options& opt) {
  const std::string text = scenario::read_file(opt.config_path);
  std::vector<std::string> override_list;
  if (!opt.backends_arg.empty()) {
    override_list = scenario::canonical_backends(split_list(opt.backends_arg));
  }
  const std::string csv = scenario::run_sweep(text, override_list);
  if (!opt.out_path.empty()) {
    write_text(opt.out_path, csv);
  } else {
    std::cout << csv;
  }
  return 0;
}

int cmd_regimes(const Options& opt) {
  const auto cfg = scenario::parse_config_file(opt.config_path);
  std::cout << report::regimes_report(scenario::run_regimes(cfg),
                                      opt.degrees);
  return 0;
}

int cmd_oracle(const Options& opt) {
  const auto cfg = scenario::parse_config_file(opt.config_path);
  Warnings warnings;
  const auto rep = scenario::run_oracle(cfg, &warnings);
  std::cout << report::oracle_report(rep, cfg.duration, opt.degrees);
  for (const auto& msg : warnings.messages) {
    std::cout << "warning: " << msg << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"geometric phases of rotating-field spin systems, computed "
               "by independent backends"};
  app.require_subcommand(1);

  Options opt;
  bool seed_free = false;  // every run is deterministic; flag kept for
                           // interface stability
  app.add_flag("--seed-free", seed_free,
               "reserved; runs never draw randomness");

  auto add_common = [&](CLI::App* sub, bool with_backends, bool with_out) {
    sub->add_option("--config", opt.config_path, "scenario JSON file")
        ->required();
    if (with_backends) {
      sub->add_option("--backends", opt.backends_arg,
                      "comma-separated backends overriding the config "
                      "(perturbative, geometric, oracle, dressed)");
    }
    if (with_out) {
      sub->add_option("--out", opt.out_path, "CSV output path");
    }
    sub->add_flag("--degrees", opt.degrees,
                  "display angles in degrees; CSV stays in radians");
  };

  auto* phase = app.add_subcommand(
      "phase", "run the configured backends once and compare their phases");
  add_common(phase, true, true);
  auto* sweep = app.add_subcommand(
      "sweep", "repeat the phase comparison across the config's sweep grid");
  add_common(sweep, true, true);
  auto* regimes = app.add_subcommand(
      "regimes", "classify the scale ordering and check the limiting form");
  add_common(regimes, false, false);
  auto* oracle = app.add_subcommand(
      "oracle", "direct time evolution with per-level phase splits");
  add_common(oracle, false, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (phase->parsed()) return cmd_phase(opt);
    if (sweep->parsed()) return cmd_sweep(opt);
    if (regimes->parsed()) return cmd_regimes(opt);
    return cmd_oracle(opt);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const PhysicsError& e) {
    std::cerr << "physics error: " << e.what() << "\n";
    return 3;
  } catch (const NumericsError& e) {
    std::cerr << "numerics error: " << e.what() << "\n";
    return 4;
  }
}
