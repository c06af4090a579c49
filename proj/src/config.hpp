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

#include <optional>
#include <string>

#include "bath.hpp"
#include "boltzmann.hpp"
#include "master.hpp"
#include "potential.hpp"
#include "rates.hpp"

namespace qgas {

struct OutputConfig {
  std::string prefix = "run";
  bool final_state = false;     // dump final rho as CSV
  bool wigner = false;          // dump the final Wigner field (d = 1)
  bool pv_correction = false;   // measure the principal-value prefactor C
};

struct RunConfig {
  LatticeSpec lattice;
  BathSpec bath;
  ParticleSpec particle;
  // Optional second plane wave for an initial equal superposition with k0.
  std::optional<IndexVec> superpose_with;
  PotentialModel potential;
  EvolutionConfig evolution;
  int q_cutoff = 0;  // 0 selects the default rule
  OutputConfig outputs;
  long seed = 0;     // reserved for future stochastic backends
};

// Parses and validates the JSON config document. Schema errors name the
// offending field; a k0 component off the lattice reports the nearest
// on-lattice suggestion.
RunConfig load_config(const std::string& path);
RunConfig parse_config_json(const std::string& text, const std::string& origin);

struct RegimeFlags {
  double weak_ratio = 0.0;          // k0 * mean free path
  bool weak_scattering = false;     // weak_ratio >= 10
  double lambda_over_dist = 0.0;    // lambda_th / mean interscatterer distance
  bool classical_gas = false;       // lambda_over_dist <= 0.1
  double range_over_dist = 0.0;     // R / mean interscatterer distance
  bool short_range = false;         // range_over_dist <= 0.1
  bool bath_coverage = false;       // n_max*dk >= 6*k_th/sqrt(2*pi)
};

struct ValidationReport {
  RegimeFlags flags;
  double max_total_rate = 0.0;
  double dt_bound = 0.0;            // 0.1 / max_total_rate
  double tail_fraction = 0.0;
  bool tail_warning = false;
  double edge_leak_fraction = 0.0;
  double mb_normalization = 0.0;
  std::string to_json() const;
};

// Cross-field checks that need the rate table (the dt stiffness bound) plus
// the recorded regime flags. Throws ValidationError when dt violates
// 0.1/max-rate; regime flags are reported, not enforced.
ValidationReport validate_config(const RunConfig& config, const RateTable& table);

}  // namespace qgas
