// Copyright 2026 The qgas authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "config.hpp"
#include "driver.hpp"
#include "error.hpp"

using namespace qgas;
namespace fs = std::filesystem;

namespace {

std::string demo_config(const std::string& extra_evolution = "",
                        const std::string& extra_particle = "",
                        const std::string& outputs = "") {
  std::ostringstream ss;
  ss << R"({
  "lattice": {"d": 1, "L": 25.132741228718345, "n_max": 24},
  "bath": {"T": 0.5, "m_B": 1.0, "n": 0.02},
  "particle": {"m_S": 1.0, "k0": [5.0])"
     << extra_particle << R"(},
  "potential": {"shape": "gaussian", "u0": 1.0, "R": 0.3},
  "evolution": {"backend": "boltzmann-diagonal", "dt": 4.0, "t_end": 2000.0,
                "record_every": 10)"
     << extra_evolution << "}" << (outputs.empty() ? "" : "," + outputs) << R"(
})";
  return ss.str();
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "qgas_driver_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("minimal config parses with defaults and healthy regime flags") {
  const RunConfig cfg = parse_config_json(demo_config(), "test");
  CHECK(cfg.evolution.backend == Backend::boltzmann_diagonal);
  CHECK(cfg.outputs.prefix == "run");
  CHECK(cfg.q_cutoff == 0);

  RateTable table = RateTable::build(cfg.bath, cfg.potential, Lattice(cfg.lattice),
                                     cfg.particle.m_S, cfg.q_cutoff);
  const ValidationReport report = validate_config(cfg, table);
  CHECK(report.flags.weak_scattering);
  CHECK(report.flags.classical_gas);
  CHECK(report.flags.short_range);
  CHECK(report.flags.bath_coverage);
  CHECK(!report.tail_warning);
}

TEST_CASE("schema errors name the missing field") {
  try {
    (void)parse_config_json(R"({"lattice": {"d": 1, "L": 10.0}})", "test");
    FAIL("expected a ValidationError");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("lattice.n_max") != std::string::npos);
  }

  CHECK_THROWS_AS((void)parse_config_json("{no json", "test"), ValidationError);
}

TEST_CASE("off-lattice k0 reports the nearest lattice point") {
  std::string text = demo_config();
  const auto pos = text.find("[5.0]");
  REQUIRE(pos != std::string::npos);
  text.replace(pos, 5, "[5.1]");
  try {
    (void)parse_config_json(text, "test");
    FAIL("expected a ValidationError");
  } catch (const ValidationError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("off-lattice") != std::string::npos);
    CHECK(msg.find("nearest") != std::string::npos);
  }
}

TEST_CASE("superposition requires plane waves") {
  std::string text = demo_config("", R"(, "sigma_k": 0.4, "superpose_with": [-5.0])");
  CHECK_THROWS_AS((void)parse_config_json(text, "test"), ValidationError);
}

TEST_CASE("malformed field types map to validation errors") {
  std::string text = demo_config();
  const auto pos = text.find("\"record_every\": 10");
  REQUIRE(pos != std::string::npos);
  text.replace(pos, 18, "\"record_every\": \"x\"");
  CHECK_THROWS_AS((void)parse_config_json(text, "test"), ValidationError);

  CHECK_THROWS_AS((void)parse_config_json(
                      demo_config(", \"backend\": \"unknown\""), "test"),
                  ValidationError);
}

TEST_CASE("dt above the stiffness bound is rejected with the bound cited") {
  const RunConfig cfg = parse_config_json(demo_config(), "test");
  RunConfig fast = cfg;
  fast.evolution.dt = 1e9;
  RateTable table = RateTable::build(cfg.bath, cfg.potential, Lattice(cfg.lattice),
                                     cfg.particle.m_S, cfg.q_cutoff);
  try {
    (void)validate_config(fast, table);
    FAIL("expected a ValidationError");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("0.1/max-rate") != std::string::npos);
  }
}

TEST_CASE("empty trajectories produce header-only plot files") {
  const fs::path dir = fresh_dir("empty");
  Lattice lattice(LatticeSpec{1, 10.0, 2});
  emit_plot_data(dir.string(), "empty", lattice, {});
  const struct {
    const char* name;
    const char* header;
  } files[] = {
      {"empty_observables.csv",
       "t,trace,hermiticity_defect,min_eigenvalue,mean_energy,mean_momentum_0,"
       "purity,l1_coherence"},
      {"empty_dist.csv", "t,k_0,f"},
      {"empty_energy.csv", "t,energy"},
      {"empty_purity.csv", "t,purity"},
      {"empty_coherence.csv", "t,coherence"},
      {"empty_min_eigenvalue.csv", "t,min_eigenvalue"},
  };
  for (const auto& f : files) {
    const std::string text = slurp(dir / f.name);
    CHECK(text == std::string(f.header) + "\n");  // header only
  }
}

TEST_CASE("runs are deterministic and cache-aware") {
  const fs::path out_a = fresh_dir("run_a");
  const fs::path out_b = fresh_dir("run_b");
  const fs::path cache = fresh_dir("cache");

  const RunConfig cfg = parse_config_json(
      demo_config("", "", R"("outputs": {"prefix": "demo", "final_state": true})"),
      "test");

  RunOptions options;
  options.cache_dir = cache.string();
  options.quiet = true;

  options.out_dir = out_a.string();
  const std::string summary_a = cmd_run(cfg, options);
  options.out_dir = out_b.string();
  const std::string summary_b = cmd_run(cfg, options);

  // Second run hits the cache and produces byte-identical CSV streams.
  const auto ja = nlohmann::json::parse(summary_a);
  const auto jb = nlohmann::json::parse(summary_b);
  CHECK(ja["cache"]["hit"] == false);
  CHECK(jb["cache"]["hit"] == true);
  for (const char* name : {"demo_observables.csv", "demo_dist.csv", "demo_energy.csv",
                           "demo_purity.csv", "demo_coherence.csv",
                           "demo_min_eigenvalue.csv", "demo_final_state.csv"}) {
    CHECK(slurp(out_a / name) == slurp(out_b / name));
  }
}

TEST_CASE("run summaries carry the required schema") {
  const fs::path out = fresh_dir("schema");
  const RunConfig cfg = parse_config_json(demo_config(), "test");
  RunOptions options;
  options.out_dir = out.string();
  options.quiet = true;

  const auto j = nlohmann::json::parse(cmd_run(cfg, options));
  CHECK(j.contains("backend"));
  CHECK(j["report"].contains("regime"));
  for (const char* flag : {"weak_scattering", "classical_gas", "short_range",
                           "bath_coverage", "weak_ratio"})
    CHECK(j["report"]["regime"].contains(flag));
  CHECK(j["report"]["leakage"].contains("q_tail_fraction"));
  CHECK(j["report"]["leakage"].contains("edge_leak_fraction"));
  CHECK(j.contains("trace_drift_max"));
  CHECK(j.contains("hermiticity_defect_max"));
  CHECK(j.contains("wall_time_s"));
  CHECK(j.contains("cache"));
}

TEST_CASE("compare emits pairwise population discrepancies") {
  const fs::path out = fresh_dir("compare");
  RunConfig cfg = parse_config_json(demo_config(), "test");
  cfg.evolution.t_end = 400.0;
  cfg.evolution.dt = 2.0;
  RunOptions options;
  options.out_dir = out.string();
  options.quiet = true;

  const auto j = nlohmann::json::parse(cmd_compare(cfg, options));
  CHECK(j["max_population_discrepancy"].get<double>() <= 1e-9);
  CHECK(fs::exists(out / "run_discrepancy.csv"));
  CHECK(fs::exists(out / "run_redfield_observables.csv"));
  CHECK(fs::exists(out / "run_lindblad_observables.csv"));
  CHECK(fs::exists(out / "run_boltzmann-diagonal_observables.csv"));
}

TEST_CASE("superposition runs emit a decaying coherence stream") {
  const fs::path out = fresh_dir("decoherence");
  // Opposite momenta carry equal kinetic energies, so the coherence decay is
  // purely collisional.
  RunConfig cfg = parse_config_json(R"({
    "lattice": {"d": 1, "L": 25.132741228718345, "n_max": 24},
    "bath": {"T": 0.5, "m_B": 1.0, "n": 0.02},
    "particle": {"m_S": 1.0, "k0": [1.25], "superpose_with": [-1.25]},
    "potential": {"shape": "gaussian", "u0": 1.0, "R": 0.3},
    "evolution": {"backend": "redfield", "dt": 0.2, "t_end": 200.0, "record_every": 50}
  })",
                                    "test");
  RunOptions options;
  options.out_dir = out.string();
  options.quiet = true;
  (void)cmd_run(cfg, options);

  const std::string text = slurp(out / "run_coherence.csv");
  std::istringstream lines(text);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "t,coherence");
  double first = -1.0, last = -1.0;
  while (std::getline(lines, line)) {
    const auto comma = line.find(',');
    const double value = std::stod(line.substr(comma + 1));
    if (first < 0.0) first = value;
    last = value;
  }
  CHECK(first == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(last < 0.9 * first);  // visibly decayed
}
