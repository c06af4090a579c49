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

#pragma once

#include <string>
#include <vector>

#include "config.hpp"

namespace qgas {

struct RunOptions {
  std::string out_dir = ".";
  std::string cache_dir;  // empty disables the rate-table cache
  bool quiet = false;
  std::string backend_override;  // empty keeps the configured backend
};

// Loads the rate table from the cache when a file with the matching build
// fingerprint exists, otherwise builds it (and saves it when caching is on).
RateTable prepare_table(const RunConfig& config, const RunOptions& options,
                        bool* cache_hit, std::string* cache_path);

// CLI verbs. Each returns a JSON summary/report string and throws
// ValidationError / NumericError / IoError on failure.
std::string cmd_validate(const RunConfig& config, const RunOptions& options);
std::string cmd_table(const RunConfig& config, const RunOptions& options);
std::string cmd_run(const RunConfig& config, const RunOptions& options);
std::string cmd_compare(const RunConfig& config, const RunOptions& options);

// Plot-data emission from recorded observables (exposed for tests; an empty
// record set produces header-only files).
struct TrajectoryRecord {
  ObservableRecord obs;
  Eigen::VectorXd populations;
};
void emit_plot_data(const std::string& out_dir, const std::string& prefix,
                    const Lattice& lattice, const std::vector<TrajectoryRecord>& records);

}  // namespace qgas
