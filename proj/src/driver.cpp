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

#include "driver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>

#include <json.hpp>

#include "csvio.hpp"
#include "error.hpp"

namespace qgas {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

void progress(const RunOptions& options, const std::string& line) {
  if (!options.quiet) std::fprintf(stderr, "%s\n", line.c_str());
}

std::string join(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory '" + dir + "': " + ec.message());
}

json regime_json(const ValidationReport& report) {
  return json::parse(report.to_json());
}

std::vector<std::string> observable_header(int d) {
  std::vector<std::string> h = {"t", "trace", "hermiticity_defect", "min_eigenvalue",
                                "mean_energy"};
  for (int axis = 0; axis < d; ++axis) h.push_back("mean_momentum_" + std::to_string(axis));
  h.push_back("purity");
  h.push_back("l1_coherence");
  return h;
}

std::vector<std::string> observable_row(const ObservableRecord& rec) {
  std::vector<std::string> row = {format_g17(rec.t), format_g17(rec.trace),
                                  format_g17(rec.hermiticity_defect),
                                  format_g17(rec.min_eigenvalue),
                                  format_g17(rec.mean_energy)};
  for (Eigen::Index axis = 0; axis < rec.mean_momentum.size(); ++axis)
    row.push_back(format_g17(rec.mean_momentum[axis]));
  row.push_back(format_g17(rec.purity));
  row.push_back(format_g17(rec.l1_coherence));
  return row;
}

ObservableRecord distribution_observables(const DistributionVector& f,
                                          const ParticleSpec& particle, double t) {
  ObservableRecord rec;
  rec.t = t;
  rec.trace = f.values.sum();
  rec.hermiticity_defect = 0.0;
  rec.min_eigenvalue = f.values.minCoeff();
  const Eigen::VectorXd E = basis_energies(f.lattice, particle.m_S);
  rec.mean_energy = E.dot(f.values);
  rec.mean_momentum = Eigen::VectorXd::Zero(f.lattice.dim());
  for (std::size_t i = 0; i < f.lattice.size(); ++i)
    rec.mean_momentum += f.values[static_cast<Eigen::Index>(i)] * f.lattice.wavevector_at(i);
  rec.purity = f.values.squaredNorm();
  rec.l1_coherence = 0.0;
  return rec;
}

DensityMatrix initial_state(const RunConfig& config, const Lattice& lattice) {
  if (config.superpose_with)
    return DensityMatrix::superposition(lattice, config.particle.k0_index,
                                        *config.superpose_with);
  return DensityMatrix::gaussian_packet(lattice, config.particle.k0_index,
                                        config.particle.sigma_k);
}

struct BackendRun {
  std::vector<TrajectoryRecord> records;
  StepStats stats;
  double min_eigenvalue_floor = 0.0;
  DensityMatrix final_rho;
};

BackendRun run_backend(const RunConfig& config, Backend backend, const RateTable& table,
                       const Lattice& lattice) {
  const long n_steps = std::lround(config.evolution.t_end / config.evolution.dt);
  BackendRun out{{}, {}, 0.0, DensityMatrix(lattice)};

  if (backend == Backend::boltzmann_diagonal) {
    DistributionVector f = DistributionVector::from_density(initial_state(config, lattice));
    HomogeneousStepper stepper(table, config.evolution.dt);
    auto record = [&](double t) {
      TrajectoryRecord rec;
      rec.obs = distribution_observables(f, config.particle, t);
      rec.populations = f.values;
      out.min_eigenvalue_floor = std::min(out.min_eigenvalue_floor, rec.obs.min_eigenvalue);
      out.records.push_back(std::move(rec));
    };
    record(0.0);
    for (long s = 1; s <= n_steps; ++s) {
      stepper.step(f);
      if (s % config.evolution.record_every == 0 || s == n_steps)
        record(s * config.evolution.dt);
    }
    out.final_rho.elements().diagonal() = f.values.cast<std::complex<double>>();
    return out;
  }

  DensityMatrix rho = initial_state(config, lattice);
  Stepper stepper(table, config.particle, backend, config.evolution.dt);
  auto record = [&](double t) {
    TrajectoryRecord rec;
    rec.obs = observables(rho, config.particle);
    rec.obs.t = t;
    rec.populations = rho.populations();
    out.min_eigenvalue_floor = std::min(out.min_eigenvalue_floor, rec.obs.min_eigenvalue);
    out.records.push_back(std::move(rec));
  };
  record(0.0);
  for (long s = 1; s <= n_steps; ++s) {
    stepper.step(rho);
    if (s % config.evolution.record_every == 0 || s == n_steps)
      record(s * config.evolution.dt);
  }
  out.stats = stepper.stats();
  out.final_rho = std::move(rho);
  return out;
}

void write_final_state(const std::string& path, const DensityMatrix& rho) {
  CsvWriter csv(path);
  csv.row({"k_offset", "kp_offset", "re", "im"});
  const auto& m = rho.elements();
  for (Eigen::Index b = 0; b < m.cols(); ++b)
    for (Eigen::Index a = 0; a < m.rows(); ++a)
      if (m(a, b) != std::complex<double>(0.0, 0.0))
        csv.row({std::to_string(a), std::to_string(b), format_g17(m(a, b).real()),
                 format_g17(m(a, b).imag())});
  csv.close();
}

void write_wigner(const std::string& path, const WignerField& field, double t) {
  CsvWriter csv(path);
  csv.row({"t", "r_index", "k_index", "f"});
  for (Eigen::Index k = 0; k < field.values.cols(); ++k) {
    const int k_index = field.lattice.index_of(static_cast<std::size_t>(k))[0];
    for (int m = 0; m < field.n_positions(); ++m)
      csv.row({format_g17(t), std::to_string(m), std::to_string(k_index),
               format_g17(field.values(m, k))});
  }
  csv.close();
}

}  // namespace

RateTable prepare_table(const RunConfig& config, const RunOptions& options,
                        bool* cache_hit, std::string* cache_path) {
  Lattice lattice(config.lattice);
  const std::string fp = table_fingerprint(config.bath, config.potential, lattice,
                                           config.particle.m_S, config.q_cutoff);
  if (cache_hit) *cache_hit = false;
  if (cache_path) cache_path->clear();
  if (options.cache_dir.empty())
    return RateTable::build(config.bath, config.potential, lattice, config.particle.m_S,
                            config.q_cutoff);

  ensure_dir(options.cache_dir);
  const std::string path = join(options.cache_dir, "table_" + fp + ".csv");
  if (cache_path) *cache_path = path;
  if (fs::exists(path)) {
    RateTable table = RateTable::load_csv(path);
    if (table.fingerprint() == fp) {
      if (cache_hit) *cache_hit = true;
      return table;
    }
  }
  RateTable table = RateTable::build(config.bath, config.potential, lattice,
                                     config.particle.m_S, config.q_cutoff);
  table.save_csv(path);
  return table;
}

void emit_plot_data(const std::string& out_dir, const std::string& prefix,
                    const Lattice& lattice, const std::vector<TrajectoryRecord>& records) {
  ensure_dir(out_dir);
  const int d = lattice.dim();

  CsvWriter obs(join(out_dir, prefix + "_observables.csv"));
  obs.row(observable_header(d));
  for (const auto& rec : records) obs.row(observable_row(rec.obs));
  obs.close();

  CsvWriter dist(join(out_dir, prefix + "_dist.csv"));
  {
    std::vector<std::string> h = {"t"};
    for (int axis = 0; axis < d; ++axis) h.push_back("k_" + std::to_string(axis));
    h.push_back("f");
    dist.row(h);
  }
  for (const auto& rec : records) {
    for (std::size_t i = 0; i < lattice.size(); ++i) {
      std::vector<std::string> row = {format_g17(rec.obs.t)};
      const IndexVec idx = lattice.index_of(i);
      for (int c : idx) row.push_back(std::to_string(c));
      row.push_back(format_g17(rec.populations[static_cast<Eigen::Index>(i)]));
      dist.row(row);
    }
  }
  dist.close();

  const struct {
    const char* name;
    double ObservableRecord::*field;
  } scalars[] = {{"energy", &ObservableRecord::mean_energy},
                 {"purity", &ObservableRecord::purity},
                 {"coherence", &ObservableRecord::l1_coherence},
                 {"min_eigenvalue", &ObservableRecord::min_eigenvalue}};
  for (const auto& s : scalars) {
    CsvWriter w(join(out_dir, prefix + "_" + s.name + ".csv"));
    w.row({"t", s.name});
    for (const auto& rec : records)
      w.row({format_g17(rec.obs.t), format_g17(rec.obs.*(s.field))});
    w.close();
  }
}

std::string cmd_validate(const RunConfig& config, const RunOptions& options) {
  RateTable table = prepare_table(config, options, nullptr, nullptr);
  const ValidationReport report = validate_config(config, table);
  progress(options, "validate: ok");
  return report.to_json();
}

std::string cmd_table(const RunConfig& config, const RunOptions& options) {
  if (options.cache_dir.empty())
    throw ValidationError("table: a --cache-dir is required to store the table");
  bool hit = false;
  std::string path;
  RateTable table = prepare_table(config, options, &hit, &path);
  json j;
  j["cache"] = {{"hit", hit}, {"path", path}};
  j["fingerprint"] = table.fingerprint();
  j["q_cutoff"] = table.q_cutoff();
  j["channels"] = table.channels().size();
  j["max_total_rate"] = table.max_total_rate();
  j["leakage"] = {{"q_tail_fraction", table.tail_fraction()},
                  {"q_tail_warning", table.tail_warning()},
                  {"edge_leak_fraction", table.max_edge_leak_fraction()}};
  progress(options, "table: " + path + (hit ? " (cache hit)" : " (built)"));
  return j.dump(2);
}

std::string cmd_run(const RunConfig& config, const RunOptions& options) {
  const auto t_start = std::chrono::steady_clock::now();
  Lattice lattice(config.lattice);
  RunConfig cfg = config;
  if (!options.backend_override.empty())
    cfg.evolution.backend = backend_from_string(options.backend_override);

  bool cache_hit = false;
  std::string cache_path;
  RateTable table = prepare_table(cfg, options, &cache_hit, &cache_path);
  const ValidationReport report = validate_config(cfg, table);

  progress(options, "run: backend " + to_string(cfg.evolution.backend) + ", " +
                        std::to_string(lattice.size()) + " basis states, " +
                        std::to_string(table.channels().size()) + " kick channels");
  BackendRun run = run_backend(cfg, cfg.evolution.backend, table, lattice);

  ensure_dir(options.out_dir);
  emit_plot_data(options.out_dir, cfg.outputs.prefix, lattice, run.records);
  if (cfg.outputs.final_state)
    write_final_state(join(options.out_dir, cfg.outputs.prefix + "_final_state.csv"),
                      run.final_rho);
  if (cfg.outputs.wigner) {
    if (lattice.dim() != 1)
      throw ValidationError("outputs.wigner requires a d = 1 lattice");
    write_wigner(join(options.out_dir, cfg.outputs.prefix + "_wigner.csv"),
                 wigner_transform(run.final_rho), cfg.evolution.t_end);
  }

  json j;
  j["backend"] = to_string(cfg.evolution.backend);
  j["report"] = regime_json(report);
  j["basis_size"] = lattice.size();
  j["steps"] = std::lround(cfg.evolution.t_end / cfg.evolution.dt);
  j["trace_drift_max"] = run.stats.max_trace_drift;
  j["hermiticity_defect_max"] = run.stats.max_hermiticity_defect;
  j["rehermitize_count"] = run.stats.rehermitize_count;
  j["renormalize_count"] = run.stats.renormalize_count;
  j["min_eigenvalue_floor"] = run.min_eigenvalue_floor;
  j["cache"] = {{"hit", cache_hit}, {"path", cache_path}};
  j["seed"] = cfg.seed;
  if (cfg.outputs.pv_correction) {
    const VelocityCorrection vc = pv_velocity_correction(cfg.bath, cfg.potential,
                                                         cfg.particle, lattice,
                                                         cfg.q_cutoff);
    j["pv_correction"] = {{"sigma0", vc.sigma0},
                          {"nsigma_over_k0", vc.nsigma_over_k0},
                          {"Pi", vc.Pi},
                          {"C", vc.C},
                          {"C_from_Pi", vc.C_from_Pi},
                          {"C_from_slope", vc.C_from_slope},
                          {"frac_shift", vc.frac_shift}};
  }
  const auto t_stop = std::chrono::steady_clock::now();
  j["wall_time_s"] = std::chrono::duration<double>(t_stop - t_start).count();

  std::ofstream summary(join(options.out_dir, cfg.outputs.prefix + "_summary.json"));
  if (!summary) throw IoError("run: cannot write the summary file");
  summary << j.dump(2) << "\n";
  return j.dump(2);
}

std::string cmd_compare(const RunConfig& config, const RunOptions& options) {
  const auto t_start = std::chrono::steady_clock::now();
  Lattice lattice(config.lattice);
  bool cache_hit = false;
  std::string cache_path;
  RateTable table = prepare_table(config, options, &cache_hit, &cache_path);
  const ValidationReport report = validate_config(config, table);

  const Backend backends[] = {Backend::redfield, Backend::lindblad,
                              Backend::boltzmann_diagonal};
  std::vector<BackendRun> runs;
  for (Backend b : backends) {
    progress(options, "compare: running " + to_string(b));
    runs.push_back(run_backend(config, b, table, lattice));
  }

  ensure_dir(options.out_dir);
  for (std::size_t i = 0; i < runs.size(); ++i)
    emit_plot_data(options.out_dir,
                   config.outputs.prefix + "_" + to_string(backends[i]), lattice,
                   runs[i].records);

  double worst = 0.0;
  CsvWriter disc(join(options.out_dir, config.outputs.prefix + "_discrepancy.csv"));
  disc.row({"t", "backend_a", "backend_b", "max_abs_pop_diff"});
  const std::size_t n_records = runs[0].records.size();
  for (std::size_t r = 0; r < n_records; ++r) {
    for (std::size_t i = 0; i < runs.size(); ++i) {
      for (std::size_t j2 = i + 1; j2 < runs.size(); ++j2) {
        const double diff = (runs[i].records[r].populations -
                             runs[j2].records[r].populations)
                                .cwiseAbs()
                                .maxCoeff();
        worst = std::max(worst, diff);
        disc.row({format_g17(runs[i].records[r].obs.t), to_string(backends[i]),
                  to_string(backends[j2]), format_g17(diff)});
      }
    }
  }
  disc.close();

  json j;
  j["report"] = regime_json(report);
  j["cache"] = {{"hit", cache_hit}, {"path", cache_path}};
  j["max_population_discrepancy"] = worst;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    j["backends"][to_string(backends[i])] = {
        {"trace_drift_max", runs[i].stats.max_trace_drift},
        {"hermiticity_defect_max", runs[i].stats.max_hermiticity_defect},
        {"min_eigenvalue_floor", runs[i].min_eigenvalue_floor}};
  }
  const auto t_stop = std::chrono::steady_clock::now();
  j["wall_time_s"] = std::chrono::duration<double>(t_stop - t_start).count();

  std::ofstream summary(join(options.out_dir, config.outputs.prefix + "_summary.json"));
  if (!summary) throw IoError("compare: cannot write the summary file");
  summary << j.dump(2) << "\n";
  return j.dump(2);
}

}  // namespace qgas
