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

#include <vector>

#include <Eigen/Core>

#include "master.hpp"

namespace qgas {

// Momentum distribution of a spatially homogeneous state.
struct DistributionVector {
  explicit DistributionVector(const Lattice& lattice);
  static DistributionVector plane_wave(const Lattice& lattice, const IndexVec& k0);
  static DistributionVector thermal(const Lattice& lattice, double beta, double mass);
  static DistributionVector from_density(const DensityMatrix& rho);

  Lattice lattice;
  Eigen::VectorXd values;
};

// Gain/loss collision term f'(k) = sum_q [W_q(k-q) f(k-q) - W_q(k) f(k)],
// with the same in-basis channel masking as the density-matrix backends.
Eigen::VectorXd collision_rhs(const DistributionVector& f, const RateTable& table);

// Phase-space distribution on the d = 1 lattice. Rows index the position
// grid r_m = m * L/(2n_max+1), columns index the momentum basis. Built from
// the density matrix over even-offset momentum separations so k +- s/2 stays
// on the lattice; values are real but may be locally negative.
struct WignerField {
  explicit WignerField(const Lattice& lattice);

  Lattice lattice;
  Eigen::MatrixXd values;  // (positions) x (momenta)
  double r_spacing = 0.0;

  int n_positions() const { return static_cast<int>(values.rows()); }
  double position(int m) const { return m * r_spacing; }
};

WignerField wigner_transform(const DensityMatrix& rho);

// Position marginal sum_r f(r,k) * dr; recovers diag(rho) for a transform.
Eigen::VectorXd momentum_marginal(const WignerField& field);

// Semi-Lagrangian free streaming: each momentum slice shifts by
// v dt = (hbar k / m_S) dt with periodic wraparound via exact spectral
// (Fourier-phase) interpolation. Conserves the mass of every slice.
WignerField advect(const WignerField& field, const ParticleSpec& particle, double dt);

// RK4 integrator for the homogeneous collision dynamics.
class HomogeneousStepper {
 public:
  HomogeneousStepper(const RateTable& table, double dt);
  void step(DistributionVector& f);

 private:
  const RateTable& table_;
  double dt_;
};

// Strang splitting advect(dt/2) . collide(dt) . advect(dt/2) for spatial
// fields; the collision substep is RK4 and acts pointwise in r.
class FieldStepper {
 public:
  FieldStepper(const RateTable& table, const ParticleSpec& particle, double dt);
  void step(WignerField& field);

 private:
  Eigen::MatrixXd collide_rhs(const Eigen::MatrixXd& F) const;
  void advect_half(WignerField& field) const;

  const RateTable& table_;
  ParticleSpec particle_;
  double dt_;
  Eigen::MatrixXcd dft_;      // r -> spectral
  Eigen::MatrixXcd idft_;     // spectral -> r
  Eigen::VectorXd kappa_;     // conjugate wavenumbers of the position grid
};

struct HomogeneousTrajectory {
  std::vector<double> times;
  std::vector<Eigen::VectorXd> populations;
  std::vector<double> mean_energy;
};

HomogeneousTrajectory evolve_homogeneous(DistributionVector& f, const RateTable& table,
                                         const ParticleSpec& particle,
                                         const EvolutionConfig& config);

struct FieldTrajectory {
  std::vector<double> times;
  std::vector<Eigen::VectorXd> marginals;
  std::vector<double> mean_energy;
};

FieldTrajectory evolve_field(WignerField& field, const RateTable& table,
                             const ParticleSpec& particle, const EvolutionConfig& config);

// Relative entropy sum f ln(f/pi) of f against a positive reference;
// non-positive entries of f contribute zero (0 ln 0 convention).
double relative_entropy(const Eigen::VectorXd& f, const Eigen::VectorXd& pi);

// Max-norm ratio of the neglected curvature term -- the momentum Hessian of
// W_q contracted with the position Hessian of the Wigner function -- to the
// retained zeroth-order gain, by finite differences at momentum k for kick q.
// Returns +inf when the retained term vanishes.
double curvature_correction_estimate(const DensityMatrix& rho, const RateTable& table,
                                     const IndexVec& q_index, const IndexVec& k_index);

}  // namespace qgas
