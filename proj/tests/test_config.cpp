#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "gmqdt/config.hpp"
#include "gmqdt/error.hpp"
#include "gmqdt/pipeline.hpp"

using namespace gmqdt;
using doctest::Approx;

namespace {

std::string default_path() { return std::string(GMQDT_SOURCE_DIR) + "/config/default.json"; }

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("bundled config loads") {
  const auto cfg = config::load_config(default_path());
  CHECK(cfg.dipole_debye == 3.9);
  CHECK(cfg.vibrational_channels[1] == 10);
  CHECK(cfg.vibrational_channels[1] == cfg.vibrational_channels[3]);
  CHECK(cfg.hash.size() == 16);
}

TEST_CASE("empty object takes the defaults") {
  const auto cfg = config::parse_config("{}");
  CHECK(cfg.dipole_debye == 3.9);
  CHECK(cfg.grids.nu_cut == 60.0);
  CHECK(cfg.vibrational_channels[0] == 4);
}

TEST_CASE("malformed input is a ConfigError") {
  CHECK_THROWS_AS(config::parse_config("{\"dipole_debye\": "), ConfigError);
  CHECK_THROWS_AS(config::parse_config("[1, 2]"), ConfigError);
  CHECK_THROWS_AS(config::parse_config("{\"dipole_debye\": \"3.9\"}"), ConfigError);
  CHECK_THROWS_AS(config::parse_config("{\"dipole_debye\": -1}"), ConfigError);
  CHECK_THROWS_AS(config::parse_config("{\"grids\": {\"bin_ev\": 0}}"), ConfigError);
  CHECK_THROWS_AS(config::parse_config("{\"grids\": {\"beta_energies_hartree\": [0.1]}}"), ConfigError);
  CHECK_THROWS_AS(config::parse_config("{\"kernel\": {\"type\": \"lorentz\"}}"), ConfigError);
  CHECK_THROWS_AS(config::parse_config("{\"surfaces\": {\"p_sigma\": [[0, 0, 0]]}}"), ConfigError);
  CHECK_THROWS_AS(config::load_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("unknown keys are rejected at every level") {
  CHECK_THROWS_AS(config::parse_config("{\"dipole\": 3.9}"), ConfigError);
  CHECK_THROWS_AS(config::parse_config("{\"grids\": {\"nu_max\": 60}}"), ConfigError);
  CHECK_THROWS_AS(config::parse_config("{\"channels\": {\"vibrational_per_electronic\": {\"pi\": 2}}}"),
                  ConfigError);
}

TEST_CASE("per-electronic channel counts") {
  const auto a = config::parse_config("{\"channels\": {\"vibrational_per_electronic\": 3}}");
  for (int n : a.vibrational_channels) CHECK(n == 3);
  const auto b = config::parse_config("{\"channels\": {\"vibrational_per_electronic\": {\"ppi\": 2}}}");
  CHECK(b.vibrational_channels[1] == 2);
  CHECK(b.vibrational_channels[3] == 2);
  CHECK(b.vibrational_channels[0] == 4);
  CHECK_THROWS_AS(config::parse_config("{\"channels\": {\"vibrational_per_electronic\": 0}}"), ConfigError);
}

TEST_CASE("hash ignores layout, not content") {
  const auto a = config::parse_config("{\"dipole_debye\": 3.9, \"grids\": {\"nu_cut\": 50}}");
  const auto b = config::parse_config("{\n  \"grids\": {\"nu_cut\": 50},\n  \"dipole_debye\": 3.9\n}");
  const auto c = config::parse_config("{\"dipole_debye\": 3.9, \"grids\": {\"nu_cut\": 51}}");
  CHECK(a.hash == b.hash);
  CHECK(a.hash != c.hash);
  CHECK(config::load_config(default_path()).hash == config::parse_config(slurp(default_path())).hash);
}

TEST_CASE("channels at zero dipole are the Coulomb partial waves") {
  const auto cfg = config::load_config(default_path());
  std::istringstream csv(pipeline::channels_csv(cfg, false));
  std::string line;
  std::getline(csv, line);
  CHECK(line.rfind("# config_hash=" + cfg.hash, 0) == 0);
  std::getline(csv, line);
  const double expect[] = {0.0, 1.0, 1.0, 1.0, 2.0};
  for (double lambda : expect) {
    REQUIRE(std::getline(csv, line));
    const auto a = line.find(',');
    const auto b = line.find(',', a + 1);
    CHECK(std::stod(line.substr(a + 1, b - a - 1)) == lambda);
    CHECK(std::stod(line.substr(b + 1)) == 0.0);
  }
}

TEST_CASE("csv output is repeatable") {
  const auto cfg = config::load_config(default_path());
  CHECK(pipeline::beta_csv(cfg, true) == pipeline::beta_csv(cfg, true));
  CHECK(pipeline::defects_csv(cfg, true) == pipeline::defects_csv(cfg, true));
}
