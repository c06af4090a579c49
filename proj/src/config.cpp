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

#include "config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "csvio.hpp"
#include "error.hpp"

namespace qgas {

namespace {

using nlohmann::json;

const json& require(const json& node, const char* section, const char* field) {
  if (!node.contains(field))
    throw ValidationError(std::string("config: missing field ") + section + "." + field);
  return node.at(field);
}

double require_number(const json& node, const char* section, const char* field) {
  const json& v = require(node, section, field);
  if (!v.is_number())
    throw ValidationError(std::string("config: field ") + section + "." + field +
                          " must be a number");
  return v.get<double>();
}

int require_int(const json& node, const char* section, const char* field) {
  const json& v = require(node, section, field);
  if (!v.is_number_integer())
    throw ValidationError(std::string("config: field ") + section + "." + field +
                          " must be an integer");
  return v.get<int>();
}

// Snap a physical wavevector to lattice indices; off-lattice components get
// a nearest-lattice suggestion in the error message.
IndexVec wavevector_to_index(const std::vector<double>& k, const Lattice& lattice,
                             const char* field) {
  if (static_cast<int>(k.size()) != lattice.dim())
    throw ValidationError(std::string("config: ") + field + " must have d = " +
                          std::to_string(lattice.dim()) + " components");
  IndexVec idx(lattice.dim());
  const double dk = lattice.spacing();
  for (int axis = 0; axis < lattice.dim(); ++axis) {
    const double ratio = k[axis] / dk;
    const double snapped = std::round(ratio);
    if (std::abs(ratio - snapped) > 1e-9) {
      std::ostringstream msg;
      msg << "config: " << field << "[" << axis << "] = " << k[axis]
          << " is off-lattice; nearest lattice value is " << snapped * dk
          << " (index " << static_cast<int>(snapped) << ", spacing " << dk << ")";
      throw ValidationError(msg.str());
    }
    idx[axis] = static_cast<int>(snapped);
    if (std::abs(idx[axis]) > lattice.n_max()) {
      std::ostringstream msg;
      msg << "config: " << field << "[" << axis << "] index " << idx[axis]
          << " exceeds the truncation n_max = " << lattice.n_max();
      throw ValidationError(msg.str());
    }
  }
  return idx;
}

RunConfig parse_config_checked(const json& doc) {
  RunConfig cfg;
  const json& lat = require(doc, "", "lattice");
  cfg.lattice.d = require_int(lat, "lattice", "d");
  cfg.lattice.L = require_number(lat, "lattice", "L");
  cfg.lattice.n_max = require_int(lat, "lattice", "n_max");
  Lattice lattice(cfg.lattice);

  const json& bath = require(doc, "", "bath");
  cfg.bath.T = require_number(bath, "bath", "T");
  cfg.bath.m_B = require_number(bath, "bath", "m_B");
  cfg.bath.n = require_number(bath, "bath", "n");
  validate(cfg.bath);

  const json& particle = require(doc, "", "particle");
  cfg.particle.m_S = require_number(particle, "particle", "m_S");
  const json& k0 = require(particle, "particle", "k0");
  if (!k0.is_array())
    throw ValidationError("config: field particle.k0 must be an array");
  cfg.particle.k0_index =
      wavevector_to_index(k0.get<std::vector<double>>(), lattice, "particle.k0");
  cfg.particle.sigma_k = particle.value("sigma_k", 0.0);
  validate(cfg.particle, lattice);
  if (particle.contains("superpose_with")) {
    if (cfg.particle.sigma_k != 0.0)
      throw ValidationError(
          "config: particle.superpose_with requires sigma_k = 0 (plane waves)");
    cfg.superpose_with = wavevector_to_index(
        particle.at("superpose_with").get<std::vector<double>>(), lattice,
        "particle.superpose_with");
  }

  const json& pot = require(doc, "", "potential");
  const std::string shape = pot.value("shape", "gaussian");
  if (shape != "gaussian")
    throw ValidationError("config: potential.shape '" + shape +
                          "' is not supported (only 'gaussian')");
  cfg.potential.shape = PotentialModel::Shape::gaussian;
  cfg.potential.u0 = require_number(pot, "potential", "u0");
  cfg.potential.R = require_number(pot, "potential", "R");
  validate(cfg.potential);

  const json& evo = require(doc, "", "evolution");
  cfg.evolution.backend = backend_from_string(evo.value("backend", "redfield"));
  cfg.evolution.dt = require_number(evo, "evolution", "dt");
  cfg.evolution.t_end = require_number(evo, "evolution", "t_end");
  cfg.evolution.record_every = evo.value("record_every", 10);
  validate(cfg.evolution);

  if (doc.contains("rates")) cfg.q_cutoff = doc.at("rates").value("q_cutoff", 0);

  if (doc.contains("outputs")) {
    const json& out = doc.at("outputs");
    cfg.outputs.prefix = out.value("prefix", "run");
    cfg.outputs.final_state = out.value("final_state", false);
    cfg.outputs.wigner = out.value("wigner", false);
    cfg.outputs.pv_correction = out.value("pv_correction", false);
  }
  cfg.seed = doc.value("seed", 0L);
  return cfg;
}

}  // namespace

RunConfig parse_config_json(const std::string& text, const std::string& origin) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError("config: " + origin + " is not valid JSON: " + e.what());
  }
  try {
    return parse_config_checked(doc);
  } catch (const json::exception& e) {
    throw ValidationError("config: " + origin + ": " + e.what());
  }
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("config: cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config_json(buffer.str(), "'" + path + "'");
}

std::string ValidationReport::to_json() const {
  nlohmann::json j;
  j["regime"] = {
      {"weak_ratio", flags.weak_ratio},
      {"weak_scattering", flags.weak_scattering},
      {"lambda_over_dist", flags.lambda_over_dist},
      {"classical_gas", flags.classical_gas},
      {"range_over_dist", flags.range_over_dist},
      {"short_range", flags.short_range},
      {"bath_coverage", flags.bath_coverage},
  };
  j["max_total_rate"] = max_total_rate;
  j["dt_bound"] = dt_bound;
  j["leakage"] = {{"q_tail_fraction", tail_fraction},
                  {"q_tail_warning", tail_warning},
                  {"edge_leak_fraction", edge_leak_fraction}};
  j["mb_normalization"] = mb_normalization;
  return j.dump(2);
}

ValidationReport validate_config(const RunConfig& config, const RateTable& table) {
  Lattice lattice(config.lattice);
  ValidationReport report;

  const double m_B = config.bath.m_B;
  const double m_S = config.particle.m_S;
  const double m_red = m_S * m_B / (m_S + m_B);
  const Eigen::VectorXd k0 = lattice.wavevector(config.particle.k0_index);
  const double k0n = k0.norm();
  const double dist = config.bath.mean_distance(config.lattice.d);

  // Weak scattering: particle wavelength vs mean free path at the fast-
  // particle relative momentum (m_B/M) k0.
  if (k0n > 0.0 && config.potential.u0 != 0.0) {
    const double k_rel = m_B / (m_S + m_B) * k0n;
    const MeanFreePath mfp =
        mean_free_path(config.bath, config.potential, config.lattice.d, m_red, k_rel);
    report.flags.weak_ratio = k0n * mfp.length;
    report.flags.weak_scattering = report.flags.weak_ratio >= 10.0;
  } else {
    report.flags.weak_ratio = std::numeric_limits<double>::infinity();
    report.flags.weak_scattering = true;
  }

  report.flags.lambda_over_dist = thermal_wavelength(config.bath) / dist;
  report.flags.classical_gas = report.flags.lambda_over_dist <= 0.1;
  report.flags.range_over_dist = config.potential.R / dist;
  report.flags.short_range = report.flags.range_over_dist <= 0.1;
  report.flags.bath_coverage = thermal_coverage_ok(config.bath, lattice);

  report.max_total_rate = table.max_total_rate();
  report.dt_bound = report.max_total_rate > 0.0
                        ? 0.1 / report.max_total_rate
                        : std::numeric_limits<double>::infinity();
  report.tail_fraction = table.tail_fraction();
  report.tail_warning = table.tail_warning();
  report.edge_leak_fraction = table.max_edge_leak_fraction();
  report.mb_normalization = mb_weight_normalization(config.bath, lattice);

  if (config.evolution.dt > report.dt_bound) {
    std::ostringstream msg;
    msg << "config: evolution.dt = " << config.evolution.dt
        << " violates the stiffness bound dt <= 0.1/max-rate = " << report.dt_bound
        << " (max total rate " << report.max_total_rate << ")";
    throw ValidationError(msg.str());
  }
  return report;
}

}  // namespace qgas
