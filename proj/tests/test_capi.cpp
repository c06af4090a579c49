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

// End-to-end checks of the shared-library C ABI.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>

#include "qgas/qgas.h"

namespace fs = std::filesystem;

namespace {

const char* kDemo = R"({
  "lattice": {"d": 1, "L": 25.132741228718345, "n_max": 24},
  "bath": {"T": 0.5, "m_B": 1.0, "n": 0.02},
  "particle": {"m_S": 1.0, "k0": [5.0]},
  "potential": {"shape": "gaussian", "u0": 1.0, "R": 0.3},
  "evolution": {"backend": "boltzmann-diagonal", "dt": 4.0, "t_end": 1000.0,
                "record_every": 10}
})";

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "qgas_capi_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("version and error strings are always valid") {
  CHECK(qgas_version() != nullptr);
  CHECK(qgas_last_error() != nullptr);
}

TEST_CASE("status codes map failures to the documented exit codes") {
  qgas_config* config = nullptr;

  CHECK(qgas_config_load("/nonexistent/config.json", &config) == QGAS_ERROR_IO);
  CHECK(std::strlen(qgas_last_error()) > 0);
  CHECK(config == nullptr);

  CHECK(qgas_config_parse("{broken", &config) == QGAS_ERROR_VALIDATION);
  CHECK(config == nullptr);

  CHECK(qgas_config_parse(R"({"lattice": {"d": 1}})", &config) ==
        QGAS_ERROR_VALIDATION);
  CHECK(config == nullptr);

  // A parseable config whose dt breaks the stiffness bound fails validation.
  std::string stiff(kDemo);
  const auto pos = stiff.find("\"dt\": 4.0, \"t_end\": 1000.0");
  REQUIRE(pos != std::string::npos);
  stiff.replace(pos, 26, "\"dt\": 1e9, \"t_end\": 1e10");
  REQUIRE(qgas_config_parse(stiff.c_str(), &config) == QGAS_OK);
  char* report = nullptr;
  CHECK(qgas_validate(config, nullptr, &report) == QGAS_ERROR_VALIDATION);
  CHECK(std::string(qgas_last_error()).find("0.1/max-rate") != std::string::npos);
  qgas_config_free(config);
  config = nullptr;
}

TEST_CASE("load, validate, table, run and compare through the C surface") {
  const fs::path dir = fresh_dir("roundtrip");
  const fs::path config_path = dir / "demo.json";
  {
    std::ofstream out(config_path);
    out << kDemo;
  }

  qgas_config* config = nullptr;
  REQUIRE(qgas_config_load(config_path.string().c_str(), &config) == QGAS_OK);
  REQUIRE(config != nullptr);

  const std::string out_dir = (dir / "out").string();
  const std::string cache_dir = (dir / "cache").string();
  qgas_options options{};
  options.out_dir = out_dir.c_str();
  options.cache_dir = cache_dir.c_str();
  options.quiet = 1;

  char* report = nullptr;
  REQUIRE(qgas_validate(config, &options, &report) == QGAS_OK);
  REQUIRE(report != nullptr);
  CHECK(std::string(report).find("weak_scattering") != std::string::npos);
  qgas_string_free(report);

  char* table_summary = nullptr;
  REQUIRE(qgas_table(config, &options, &table_summary) == QGAS_OK);
  CHECK(std::string(table_summary).find("fingerprint") != std::string::npos);
  qgas_string_free(table_summary);

  char* run_summary = nullptr;
  REQUIRE(qgas_run(config, &options, &run_summary) == QGAS_OK);
  const std::string summary(run_summary);
  qgas_string_free(run_summary);
  CHECK(summary.find("\"hit\": true") != std::string::npos);  // table was cached
  CHECK(fs::exists(fs::path(out_dir) / "run_observables.csv"));
  CHECK(fs::exists(fs::path(out_dir) / "run_summary.json"));

  // Backend override through the options.
  options.backend = "lindblad";
  char* override_summary = nullptr;
  REQUIRE(qgas_run(config, &options, &override_summary) == QGAS_OK);
  CHECK(std::string(override_summary).find("\"backend\": \"lindblad\"") !=
        std::string::npos);
  qgas_string_free(override_summary);
  options.backend = nullptr;

  char* compare_summary = nullptr;
  REQUIRE(qgas_compare(config, &options, &compare_summary) == QGAS_OK);
  CHECK(std::string(compare_summary).find("max_population_discrepancy") !=
        std::string::npos);
  qgas_string_free(compare_summary);
  CHECK(fs::exists(fs::path(out_dir) / "run_discrepancy.csv"));

  qgas_config_free(config);
}
