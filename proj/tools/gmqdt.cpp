// gmqdt command-line driver.
//
//   gmqdt <channels|beta|bound|defects|kmatrix|resonances|xsec>
//         --config PATH [--output DIR] [--dipole-off] [--oracle]
//
// Exit codes: 0 ok, 2 configuration error, 3 computation error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "gmqdt/config.hpp"
#include "gmqdt/error.hpp"
#include "gmqdt/log.hpp"
#include "gmqdt/pipeline.hpp"
#include "gmqdt/units.hpp"

namespace fs = std::filesystem;
using namespace gmqdt;

namespace {

struct Options {
  std::string config_path;
  std::string output_dir;
  bool dipole_off = false;
  bool oracle = false;
};

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c == '\n' ? ' ' : c);
  }
  return out;
}

int report(const std::string& kind, const std::string& what, int code) {
  std::cerr << "error: kind=" << kind << " message=\"" << escape(what) << "\"\n";
  return code;
}

void write_file(const fs::path& dir, const std::string& name, const std::string& text) {
  fs::create_directories(dir);
  const fs::path path = dir / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("io", "cannot write " + path.string());
  out << text;
  std::cout << "wrote " << path.string() << "\n";
}

int run(const std::string& command, const Options& opt) {
  config::RunConfig cfg = config::load_config(opt.config_path);
  const bool on = !opt.dipole_off;
  const fs::path dir = opt.output_dir.empty() ? fs::path(cfg.output_dir) : fs::path(opt.output_dir);

  if (command == "channels") {
    write_file(dir, "channels.csv", pipeline::channels_csv(cfg, on));
  } else if (command == "beta") {
    write_file(dir, "beta.csv", pipeline::beta_csv(cfg, on));
  } else if (command == "bound") {
    const auto rep = pipeline::bound_csv(cfg, on, opt.oracle);
    write_file(dir, "bound.csv", rep.csv);
    if (opt.oracle) std::printf("max_abs_diff_hartree=%.8e\n", rep.max_abs_diff);
  } else if (command == "defects") {
    write_file(dir, "defects.csv", pipeline::defects_csv(cfg, on));
  } else if (command == "kmatrix") {
    write_file(dir, "kmatrix.csv", pipeline::kmatrix_csv(cfg, on));
    const auto sys = pipeline::vibronic_system(cfg, on);
    write_file(dir, "vibronic_kmatrix.csv", pipeline::vibronic_csv(cfg, sys, on));
  } else if (command == "resonances") {
    const auto sys = pipeline::vibronic_system(cfg, on);
    const double lo = 1e-10;
    const double hi = cfg.grids.energy_max_ev * units::kEvToHartree;
    const auto res = pipeline::resonances(cfg, sys, lo, hi);
    write_file(dir, "resonances.csv", pipeline::resonances_csv(cfg, res, on));
  } else if (command == "xsec") {
    const auto curve = pipeline::cross_section(cfg, on);
    write_file(dir, "xsec.csv", pipeline::xsec_csv(cfg, curve));
    if (on) {
      const auto off = pipeline::cross_section(cfg.without_dipole(), false);
      write_file(dir, "xsec_compare.csv", pipeline::xsec_compare_csv(cfg, curve, off));
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generalized MQDT for electron collisions with a polar linear ion"};
  app.require_subcommand(1);
  Options opt;
  const char* commands[] = {"channels", "beta", "bound", "defects", "kmatrix", "resonances", "xsec"};
  const char* help[] = {"partial waves and mixing fractions",
                        "phase parameter, K and density on an energy grid",
                        "bound energies (with --oracle: against the radial integrator)",
                        "quantum-defect surfaces over the bend grid",
                        "body-frame and vibronic reaction matrices",
                        "resonance positions and widths",
                        "binned and convolved cross sections"};
  for (int i = 0; i < 7; ++i) {
    auto* sub = app.add_subcommand(commands[i], help[i]);
    sub->add_option("--config", opt.config_path, "run configuration (JSON)")->required();
    sub->add_option("--output", opt.output_dir, "output directory (overrides the config)");
    sub->add_flag("--dipole-off", opt.dipole_off, "run with the dipole switched off");
    sub->add_flag("--oracle", opt.oracle, "compare against the radial integrator (bound)");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    return report("usage", e.what(), 2);
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    return run(command, opt);
  } catch (const ConfigError& e) {
    return report(e.kind(), e.what(), 2);
  } catch (const Error& e) {
    return report(e.kind(), e.what(), 3);
  } catch (const std::exception& e) {
    return report("internal", e.what(), 3);
  }
}
