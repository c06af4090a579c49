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

#include <Eigen/Core>

#include "bath.hpp"
#include "lattice.hpp"

namespace qgas {

// Radial interaction bump with a closed-form Fourier transform. The only
// built-in shape is the Gaussian u(r) = u0 * exp(-r^2/(2R^2)); new shapes
// must provide u(r) radial, a closed-form u~(q), and a range R.
struct PotentialModel {
  enum class Shape { gaussian };
  Shape shape = Shape::gaussian;
  double u0 = 1.0;  // strength (energy); sign free
  double R = 1.0;   // range (length)
};

void validate(const PotentialModel& model);

// Real-space value u(r) at radius r >= 0.
double potential_value(const PotentialModel& model, double r);

// d-dimensional Fourier transform u~(q) = int u(r) exp(-i q.r) d^d r.
// Gaussian shape: u0 * (2*pi)^(d/2) * R^d * exp(-|q|^2 R^2 / 2). Real and
// even in q.
double fourier_u(const PotentialModel& model, int d, double q_norm);

// Reduced two-body kinematics of one particle-scatterer collision.
struct BinaryKinematics {
  double m_S = 0.0;
  double m_B = 0.0;
  double m_reduced = 0.0;     // m_S*m_B/(m_S+m_B)
  double M_total = 0.0;       // m_S + m_B
  Eigen::VectorXd k_rel;      // (m_B*k_S - m_S*k_B)/M
  Eigen::VectorXd K_total;    // k_S + k_B

  static BinaryKinematics from(const Eigen::VectorXd& k_S, const Eigen::VectorXd& k_B,
                               double m_S, double m_B);
  // Lab momenta reconstructed from (K, k*Omega); Omega must be unit length.
  Eigen::VectorXd final_particle(const Eigen::VectorXd& Omega) const;
  Eigen::VectorXd final_scatterer(const Eigen::VectorXd& Omega) const;
};

// Energy difference D_q = E_{kS+q} + E_{kB-q} - E_{kS} - E_{kB} of the
// collision (kS,kB) -> (kS+q,kB-q), evaluated in the lab frame.
double energy_difference(const Eigen::VectorXd& q, const Eigen::VectorXd& k_S,
                         const Eigen::VectorXd& k_B, double m_S, double m_B);

// Same quantity in the center-of-mass frame, (hbar^2/2m)[(k+q)^2 - k^2].
double energy_difference_com(const Eigen::VectorXd& q, const Eigen::VectorXd& k_rel,
                             double m_reduced);

// Golden-rule rate of the binary collision with momentum transfer q,
// (2*pi/hbar) (1/V^2) |u~(q)|^2 delta_eps(D_q), with the energy delta
// regularized as a normalized Gaussian of width eps. Used by brute-force
// oracles only; production rates integrate the delta in closed form.
double binary_rate(const PotentialModel& model, const Lattice& lattice,
                   const Eigen::VectorXd& q, const Eigen::VectorXd& k_S,
                   const Eigen::VectorXd& k_B, double m_S, double m_B, double eps);

// Default broadening, one lattice spacing of energy at wavenumber k.
double default_energy_broadening(const Lattice& lattice, double k, double m_reduced);

// Born differential cross section for relative momentum k_rel and outgoing
// direction Omega (unit vector):
// (pi/2) k^(d-3) / (2*pi)^d * |(2m/hbar^2) u~(k*Omega - k_rel)|^2.
double diff_cross_section(const PotentialModel& model, int d, double m_reduced,
                          const Eigen::VectorXd& Omega, const Eigen::VectorXd& k_rel);

// Total cross section: solid-angle integral of diff_cross_section by
// adaptive quadrature (d = 1 sums the two directions).
double total_cross_section(const PotentialModel& model, int d, double m_reduced, double k);

struct MeanFreePath {
  double length = 0.0;      // 1/(n*sigma); +inf when sigma == 0
  double weak_ratio = 0.0;  // k * length
  bool weak_scattering = false;  // weak_ratio >= 10
};

// Mean free path at relative wavenumber k and the weak-scattering ratio.
MeanFreePath mean_free_path(const BathSpec& bath, const PotentialModel& model, int d,
                            double m_reduced, double k);

}  // namespace qgas
