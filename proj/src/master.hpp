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

#include <complex>
#include <functional>
#include <string>

#include <Eigen/Core>

#include "lattice.hpp"
#include "rates.hpp"

namespace qgas {

enum class Backend { redfield, lindblad, boltzmann_diagonal };

Backend backend_from_string(const std::string& name);
std::string to_string(Backend backend);

// Particle state over the truncated wavevector basis.
class DensityMatrix {
 public:
  explicit DensityMatrix(const Lattice& lattice);

  static DensityMatrix plane_wave(const Lattice& lattice, const IndexVec& k0);
  // Pure Gaussian wave packet of momentum width sigma_k centered on k0;
  // sigma_k == 0 degenerates to the plane wave.
  static DensityMatrix gaussian_packet(const Lattice& lattice, const IndexVec& k0,
                                       double sigma_k);
  static DensityMatrix superposition(const Lattice& lattice, const IndexVec& k1,
                                     const IndexVec& k2);
  // Diagonal state with populations ~ exp(-beta E_k), renormalized on the
  // truncated basis.
  static DensityMatrix thermal_diagonal(const Lattice& lattice, double beta, double mass);

  const Lattice& lattice() const { return lattice_; }
  const Eigen::MatrixXcd& elements() const { return elements_; }
  Eigen::MatrixXcd& elements() { return elements_; }

  double trace_real() const;
  double hermiticity_defect() const;  // max |rho - rho^dagger|
  Eigen::VectorXd populations() const;

 private:
  Lattice lattice_;
  Eigen::MatrixXcd elements_;
};

// Kinetic energies over the basis offsets.
Eigen::VectorXd basis_energies(const Lattice& lattice, double mass);

// Element form of the simplified Redfield right-hand side:
//   d/dt rho_{k,k'} = -i/hbar (E_k - E_k') rho_{k,k'}
//     + 1/2 sum_q [(W_q(k-q) + W_q(k'-q)) rho_{k-q,k'-q}
//                  - (W_q(k) + W_q(k')) rho_{k,k'}],
// with kicks that leave the truncated basis dropped from both gain and loss
// so the generator stays trace-preserving on the basis.
Eigen::MatrixXcd redfield_rhs(const DensityMatrix& rho, const RateTable& table,
                              const ParticleSpec& particle);

// Lindblad form with jump amplitudes sqrt(W_q) (zero-phase choice): the gain
// couples through the geometric mean sqrt(W_q(k-q) W_q(k'-q)); the loss
// anticommutator is identical to the Redfield one.
Eigen::MatrixXcd lindblad_rhs(const DensityMatrix& rho, const RateTable& table,
                              const ParticleSpec& particle);

struct CorrectionI {
  Eigen::MatrixXcd matrix;  // redfield_rhs - lindblad_rhs
  double max_norm = 0.0;    // positivity-risk diagnostic
  double gain_norm = 0.0;   // max element of the Redfield gain term
};

// The exact residual between the Redfield and Lindblad forms. Zero for
// diagonal states and for rate tables independent of k.
CorrectionI correction_I(const DensityMatrix& rho, const RateTable& table,
                         const ParticleSpec& particle);

struct GradientTensors {
  Eigen::MatrixXd S;  // symmetric, rank <= 1: outer product of grad sqrt(W_q)
  Eigen::MatrixXd A;  // antisymmetric; identically zero for real amplitudes
};

// Central-difference momentum gradients of the jump amplitude sqrt(W_q) at
// k0, one lattice spacing step. k0 must be interior.
GradientTensors gradient_tensors(const RateTable& table, const IndexVec& q_index,
                                 const IndexVec& k0_index);

// Finite-difference gradient of sqrt(W) with a caller-chosen evaluator and
// step, for convergence checks against analytic derivatives.
Eigen::VectorXd sqrtw_gradient(const std::function<double(const Eigen::VectorXd&)>& W_of_k,
                               const Eigen::VectorXd& k0, double step);

struct EvolutionConfig {
  Backend backend = Backend::redfield;
  double dt = 1e-2;
  double t_end = 1.0;
  int record_every = 10;
};

void validate(const EvolutionConfig& config);

struct ObservableRecord {
  double t = 0.0;
  double trace = 0.0;
  double hermiticity_defect = 0.0;
  double min_eigenvalue = 0.0;
  double mean_energy = 0.0;
  Eigen::VectorXd mean_momentum;
  double purity = 0.0;
  double l1_coherence = 0.0;
};

ObservableRecord observables(const DensityMatrix& rho, const ParticleSpec& particle);

struct StepStats {
  double max_trace_drift = 0.0;         // before renormalization
  double max_hermiticity_defect = 0.0;  // before re-Hermitization
  long rehermitize_count = 0;
  long renormalize_count = 0;
};

// Classical 4-stage Runge-Kutta with per-step symmetric projection and trace
// renormalization, both applied only above the 1e-12 drift threshold and
// always recorded in the stats.
class Stepper {
 public:
  Stepper(const RateTable& table, const ParticleSpec& particle, Backend backend,
          double dt);

  // Advances rho by dt. Throws NumericError on NaN/Inf, leaving rho at the
  // last good state.
  void step(DensityMatrix& rho);
  const StepStats& stats() const { return stats_; }

 private:
  const RateTable& table_;
  ParticleSpec particle_;
  Backend backend_;
  double dt_;
  Eigen::VectorXd energies_;
  StepStats stats_;
};

}  // namespace qgas
