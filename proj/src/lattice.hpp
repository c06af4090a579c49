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
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "units.hpp"

namespace qgas {

using IndexVec = std::vector<int>;

// Cubic quantization region of side L in d dimensions with periodic boundary
// conditions. Wavevectors live on the lattice (2*pi/L) * (n_1, ..., n_d) with
// every index truncated to [-n_max, n_max].
struct LatticeSpec {
  int d = 1;
  double L = 2.0 * M_PI;
  int n_max = 1;
};

// Truncated momentum basis. Basis offsets are row-major over the index tuple
// (first axis slowest): offset = sum_i (idx_i + n_max) * (2*n_max+1)^(d-1-i).
// The zero wavevector is always at the center of the enumeration.
class Lattice {
 public:
  explicit Lattice(const LatticeSpec& spec);

  const LatticeSpec& spec() const { return spec_; }
  int dim() const { return spec_.d; }
  int n_max() const { return spec_.n_max; }
  double box_side() const { return spec_.L; }
  double spacing() const { return dk_; }             // 2*pi/L
  double volume() const { return volume_; }          // L^d
  int per_axis() const { return per_axis_; }         // 2*n_max + 1
  std::size_t size() const { return size_; }         // (2*n_max+1)^d

  // Per-mode phase-space weight V/(2*pi)^d replacing a lattice sum by an
  // integral in the continuum limit.
  double continuum_weight() const;

  bool contains(const IndexVec& idx) const;
  std::size_t offset(const IndexVec& idx) const;     // throws on out-of-range
  IndexVec index_of(std::size_t offset) const;

  Eigen::VectorXd wavevector(const IndexVec& idx) const;
  Eigen::VectorXd wavevector_at(std::size_t offset) const;

  // idx + q, or nullopt when the kick leaves the truncated basis. Kicks are
  // never wrapped around the boundary.
  std::optional<IndexVec> kick(const IndexVec& idx, const IndexVec& q) const;

  // Flat-offset variant: -1 marks an out-of-basis kick.
  std::int64_t kick_offset(std::size_t from, const IndexVec& q) const;

 private:
  LatticeSpec spec_;
  double dk_ = 0.0;
  double volume_ = 0.0;
  int per_axis_ = 0;
  std::size_t size_ = 0;
  std::vector<std::size_t> strides_;
};

// hbar^2 |k|^2 / (2 m). Throws std::domain_error for non-positive mass.
double kinetic_energy(const Eigen::VectorXd& k, double mass);

// Incident particle: mass, central wavevector (as a lattice index tuple) and
// Gaussian momentum width. sigma_k == 0 means a plane wave.
struct ParticleSpec {
  double m_S = 1.0;
  IndexVec k0_index;
  double sigma_k = 0.0;
};

void validate(const ParticleSpec& particle, const Lattice& lattice);

}  // namespace qgas
