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

#include "lattice.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "error.hpp"

namespace qgas {

Lattice::Lattice(const LatticeSpec& spec) : spec_(spec) {
  if (spec_.d < 1) throw ValidationError("lattice: dimension d must be >= 1");
  if (!(spec_.L > 0.0)) throw ValidationError("lattice: box side L must be > 0");
  if (spec_.n_max < 1) throw ValidationError("lattice: n_max must be >= 1");

  dk_ = 2.0 * M_PI / spec_.L;
  volume_ = std::pow(spec_.L, spec_.d);
  per_axis_ = 2 * spec_.n_max + 1;

  const double size_estimate = std::pow(static_cast<double>(per_axis_), spec_.d);
  if (size_estimate > 5e7) {
    throw ValidationError("lattice: basis size (2*n_max+1)^d = " +
                          std::to_string(size_estimate) + " exceeds the desk-scale limit");
  }
  size_ = 1;
  strides_.assign(spec_.d, 1);
  for (int axis = spec_.d - 1; axis >= 0; --axis) {
    strides_[axis] = size_;
    size_ *= static_cast<std::size_t>(per_axis_);
  }
}

double Lattice::continuum_weight() const {
  return volume_ / std::pow(2.0 * M_PI, spec_.d);
}

bool Lattice::contains(const IndexVec& idx) const {
  if (static_cast<int>(idx.size()) != spec_.d) return false;
  for (int c : idx)
    if (c < -spec_.n_max || c > spec_.n_max) return false;
  return true;
}

std::size_t Lattice::offset(const IndexVec& idx) const {
  if (!contains(idx)) throw std::out_of_range("lattice: index outside the truncated basis");
  std::size_t off = 0;
  for (int axis = 0; axis < spec_.d; ++axis)
    off += static_cast<std::size_t>(idx[axis] + spec_.n_max) * strides_[axis];
  return off;
}

IndexVec Lattice::index_of(std::size_t offset) const {
  if (offset >= size_) throw std::out_of_range("lattice: offset outside the basis");
  IndexVec idx(spec_.d);
  for (int axis = 0; axis < spec_.d; ++axis) {
    idx[axis] = static_cast<int>(offset / strides_[axis]) - spec_.n_max;
    offset %= strides_[axis];
  }
  return idx;
}

Eigen::VectorXd Lattice::wavevector(const IndexVec& idx) const {
  if (!contains(idx)) throw std::out_of_range("lattice: index outside the truncated basis");
  Eigen::VectorXd k(spec_.d);
  for (int axis = 0; axis < spec_.d; ++axis) k[axis] = dk_ * idx[axis];
  return k;
}

Eigen::VectorXd Lattice::wavevector_at(std::size_t offset) const {
  return wavevector(index_of(offset));
}

std::optional<IndexVec> Lattice::kick(const IndexVec& idx, const IndexVec& q) const {
  if (!contains(idx)) throw std::out_of_range("lattice: index outside the truncated basis");
  if (static_cast<int>(q.size()) != spec_.d)
    throw std::invalid_argument("lattice: kick dimension mismatch");
  IndexVec out(spec_.d);
  for (int axis = 0; axis < spec_.d; ++axis) {
    out[axis] = idx[axis] + q[axis];
    if (out[axis] < -spec_.n_max || out[axis] > spec_.n_max) return std::nullopt;
  }
  return out;
}

std::int64_t Lattice::kick_offset(std::size_t from, const IndexVec& q) const {
  auto shifted = kick(index_of(from), q);
  if (!shifted) return -1;
  return static_cast<std::int64_t>(offset(*shifted));
}

double kinetic_energy(const Eigen::VectorXd& k, double mass) {
  if (!(mass > 0.0)) throw std::domain_error("kinetic_energy: mass must be > 0");
  return hbar * hbar * k.squaredNorm() / (2.0 * mass);
}

void validate(const ParticleSpec& particle, const Lattice& lattice) {
  if (!(particle.m_S > 0.0)) throw ValidationError("particle: mass m_S must be > 0");
  if (particle.sigma_k < 0.0) throw ValidationError("particle: sigma_k must be >= 0");
  if (!lattice.contains(particle.k0_index))
    throw ValidationError("particle: k0 outside the truncated basis");
}

}  // namespace qgas
