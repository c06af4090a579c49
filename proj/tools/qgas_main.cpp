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

// Command-line front end; everything goes through the public C API.

#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "qgas/qgas.h"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir = ".";
  std::string cache_dir;
  std::string backend;
  bool quiet = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("config", args.config_path, "JSON run configuration")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--out-dir", args.out_dir, "directory for CSV/JSON outputs");
  cmd->add_option("--cache-dir", args.cache_dir, "rate-table cache directory");
  cmd->add_flag("--quiet", args.quiet, "suppress progress output");
}

int dispatch(qgas_status (*verb)(const qgas_config*, const qgas_options*, char**),
             const CommonArgs& args) {
  qgas_config* config = nullptr;
  qgas_status status = qgas_config_load(args.config_path.c_str(), &config);
  if (status != QGAS_OK) {
    std::fprintf(stderr, "error: %s\n", qgas_last_error());
    return status;
  }

  qgas_options options{};
  options.out_dir = args.out_dir.c_str();
  options.cache_dir = args.cache_dir.empty() ? nullptr : args.cache_dir.c_str();
  options.quiet = args.quiet ? 1 : 0;
  options.backend = args.backend.empty() ? nullptr : args.backend.c_str();

  char* summary = nullptr;
  status = verb(config, &options, &summary);
  if (status != QGAS_OK) {
    std::fprintf(stderr, "error: %s\n", qgas_last_error());
  } else if (summary && !args.quiet) {
    std::printf("%s\n", summary);
  }
  qgas_string_free(summary);
  qgas_config_free(config);
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"momentum-lattice simulator for a fast quantum particle in a thermal gas"};
  app.require_subcommand(1);

  CommonArgs validate_args, table_args, run_args, compare_args;
  CLI::App* validate = app.add_subcommand("validate", "check a config and print the report");
  add_common(validate, validate_args);
  CLI::App* table = app.add_subcommand("table", "build and cache the rate table");
  add_common(table, table_args);
  CLI::App* run = app.add_subcommand("run", "run the configured backend");
  add_common(run, run_args);
  run->add_option("--backend", run_args.backend,
                  "override: redfield, lindblad or boltzmann-diagonal");
  CLI::App* compare = app.add_subcommand("compare", "run all backends from the same state");
  add_common(compare, compare_args);

  CLI11_PARSE(app, argc, argv);

  if (validate->parsed()) return dispatch(&qgas_validate, validate_args);
  if (table->parsed()) return dispatch(&qgas_table, table_args);
  if (run->parsed()) return dispatch(&qgas_run, run_args);
  return dispatch(&qgas_compare, compare_args);
}
