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

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "bath.hpp"
#include "lattice.hpp"
#include "potential.hpp"

namespace qgas {

// On-shell bath momentum component along q for the kick k_S -> k_S + q:
// u* = m_B*omega/(hbar*|q|) + |q|/2 with hbar*omega = E_{k_S+q} - E_{k_S}.
// Energy conservation selects bath particles whose momentum along q equals
// u*; the Maxwell-Boltzmann weight of that shell drives every rate below.
double onshell_bath_momentum(const BathSpec& bath, double m_S, const Eigen::VectorXd& q,
                             const Eigen::VectorXd& k_S);

// Bath-averaged golden-rule rate W_q(k_S) for the momentum kick q, with the
// energy delta integrated over the Maxwell-Boltzmann bath in closed form:
//   W = (2*pi/hbar) (n/V) |u~(q)|^2 G,
//   G = (m_B/(hbar^2 q)) sqrt(beta hbar^2/(2 pi m_B)) exp(-beta hbar^2 u*^2/(2 m_B)).
// Throws std::domain_error at q = 0 (the trivial kick carries no rate).
double rate_W_analytic(const BathSpec& bath, const PotentialModel& model,
                       const Lattice& lattice, double m_S, const Eigen::VectorXd& q,
                       const Eigen::VectorXd& k_S);

// Brute-force counterpart: N * sum_kB binary_rate(q, k_S, k_B, eps) * mb_weight(k_B)
// over the lattice, with Gaussian energy broadening eps. Converges to
// rate_W_analytic as eps -> 0 with the lattice refined.
double rate_W_lattice_oracle(const BathSpec& bath, const PotentialModel& model,
                             const Lattice& lattice, double m_S,
                             const Eigen::VectorXd& q, const Eigen::VectorXd& k_S,
                             double eps);

// Independent route through the center-of-mass differential cross section:
// the bath integral of n*v*dsigma/dOmega restricted to the kick q, with the
// energy shell resolved analytically along q and Gauss-Hermite quadrature
// over the transverse bath momentum.
double rate_W_from_cross_section(const BathSpec& bath, const PotentialModel& model,
                                 const Lattice& lattice, double m_S,
                                 const Eigen::VectorXd& q, const Eigen::VectorXd& k_S,
                                 int gh_order = 40);

// Principal-value companion of W_q: Y_q(k_S) = (n/(hbar*V)) |u~(q)|^2 P with
// P the Cauchy principal value of the bath integral, reduced to one dimension
// along q and evaluated on a pole-symmetric grid. May take either sign.
double pv_Y(const BathSpec& bath, const PotentialModel& model, const Lattice& lattice,
            double m_S, const Eigen::VectorXd& q, const Eigen::VectorXd& k_S);

// One stored kick channel of a rate table.
struct QChannel {
  IndexVec q_index;
  Eigen::VectorXd q;
  std::int64_t flat_shift = 0;        // offset(k+q) - offset(k) where defined
  std::vector<double> rate;           // W_q(k) for every basis offset k
  std::vector<double> sqrt_rate;      // jump-operator amplitudes sqrt(W_q(k))
  std::vector<std::int32_t> sources;  // offsets k with k+q inside the basis
};

// Precomputed map (q, k) -> W_q(k) for all kicks inside the per-axis cutoff,
// shared by the three evolution backends. Kicks that leave the truncated
// basis are dropped from the collision sums; their weight is accumulated in
// the edge-leak diagnostic rather than wrapped around.
class RateTable {
 public:
  // q_cutoff <= 0 selects the default rule: the smallest integer with
  // q_cutoff * dk * R >= 4, capped at 2*n_max beyond which no two basis
  // states are connected.
  static RateTable build(const BathSpec& bath, const PotentialModel& model,
                         const Lattice& lattice, double m_S, int q_cutoff = 0);

  // Synthetic table with one constant rate everywhere (test support).
  static RateTable uniform(const Lattice& lattice, int q_cutoff, double rate);

  const Lattice& lattice() const { return lattice_; }
  int q_cutoff() const { return q_cutoff_; }
  const std::vector<QChannel>& channels() const { return channels_; }

  double rate(const IndexVec& q_index, const IndexVec& k_index) const;
  bool has_channel(const IndexVec& q_index) const;

  // In-basis total escape rate Gamma(k) = sum over channels keeping k+q
  // inside the basis.
  const std::vector<double>& total_rate() const { return total_rate_; }
  double max_total_rate() const { return max_total_rate_; }

  // Rate dropped at the truncation boundary, per k.
  const std::vector<double>& edge_leak_rate() const { return edge_leak_; }
  double max_edge_leak_fraction() const;

  // Upper bound on the rate neglected beyond the q cutoff, relative to the
  // maximum total rate, estimated from the |u~(q)|^2 tail.
  double tail_fraction() const { return tail_fraction_; }
  bool tail_warning() const { return tail_fraction_ > 1e-3; }

  // Build-parameter fingerprint used for cache validation (empty for
  // synthetic tables).
  const std::string& fingerprint() const { return fingerprint_; }

  void save_csv(const std::string& path) const;
  static RateTable load_csv(const std::string& path);

 private:
  RateTable(const Lattice& lattice, int q_cutoff);
  void finalize();
  int channel_slot(const IndexVec& q_index) const;  // -1 when outside cutoff

  Lattice lattice_;
  int q_cutoff_ = 0;
  std::vector<QChannel> channels_;
  std::vector<int> slot_of_q_;  // dense map over the cutoff box
  std::vector<double> total_rate_;
  std::vector<double> edge_leak_;
  double max_total_rate_ = 0.0;
  double tail_fraction_ = 0.0;
  std::string fingerprint_;
  std::string header_meta_;  // round-tripped build parameters
};

int default_q_cutoff(const Lattice& lattice, const PotentialModel& model);

// Build-parameter fingerprint of the table that RateTable::build would
// produce, computable without building (cache lookups). q_cutoff <= 0 means
// the default rule.
std::string table_fingerprint(const BathSpec& bath, const PotentialModel& model,
                              const Lattice& lattice, double m_S, int q_cutoff = 0);

struct VelocityCorrection {
  double sigma0 = 0.0;           // bath-averaged total cross section
  double nsigma_over_k0 = 0.0;   // weak-scattering parameter n*sigma0/k0
  double Pi = 0.0;               // -2 sum_q Y_q(k0) on the plane-wave state
  // Prefactor from the magnitude of Pi at k0: -Pi m_S / (n hbar sigma0 k0).
  double C_from_Pi = 0.0;
  // Prefactor from the momentum slope of Pi, which is what shifts the
  // propagation velocity: (dPi/dk) m_S / (hbar n sigma0).
  double C_from_slope = 0.0;
  // Reported prefactor: whichever route gives the larger magnitude (the two
  // agree only to the order of magnitude the estimate claims).
  double C = 0.0;
  double frac_shift = 0.0;       // measured fractional velocity shift
};

// Directly summed principal-value contribution at the particle's central
// momentum, together with the weak-scattering estimate it is compared to.
// The prefactor C is measured, never assumed.
VelocityCorrection pv_velocity_correction(const BathSpec& bath, const PotentialModel& model,
                                          const ParticleSpec& particle,
                                          const Lattice& lattice, int q_cutoff = 0);

}  // namespace qgas
