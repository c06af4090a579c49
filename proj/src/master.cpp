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

#include "master.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "error.hpp"

namespace qgas {

Backend backend_from_string(const std::string& name) {
  if (name == "redfield") return Backend::redfield;
  if (name == "lindblad") return Backend::lindblad;
  if (name == "boltzmann-diagonal") return Backend::boltzmann_diagonal;
  throw ValidationError("unknown backend '" + name +
                        "' (expected redfield, lindblad or boltzmann-diagonal)");
}

std::string to_string(Backend backend) {
  switch (backend) {
    case Backend::redfield: return "redfield";
    case Backend::lindblad: return "lindblad";
    case Backend::boltzmann_diagonal: return "boltzmann-diagonal";
  }
  return "?";
}

DensityMatrix::DensityMatrix(const Lattice& lattice)
    : lattice_(lattice),
      elements_(Eigen::MatrixXcd::Zero(lattice.size(), lattice.size())) {}

DensityMatrix DensityMatrix::plane_wave(const Lattice& lattice, const IndexVec& k0) {
  DensityMatrix rho(lattice);
  const auto i = static_cast<Eigen::Index>(lattice.offset(k0));
  rho.elements_(i, i) = 1.0;
  return rho;
}

DensityMatrix DensityMatrix::gaussian_packet(const Lattice& lattice, const IndexVec& k0,
                                             double sigma_k) {
  if (sigma_k < 0.0) throw std::domain_error("gaussian_packet: sigma_k must be >= 0");
  if (sigma_k == 0.0) return plane_wave(lattice, k0);
  const Eigen::VectorXd center = lattice.wavevector(k0);
  Eigen::VectorXcd psi(lattice.size());
  for (std::size_t i = 0; i < lattice.size(); ++i) {
    const double dk2 = (lattice.wavevector_at(i) - center).squaredNorm();
    psi[static_cast<Eigen::Index>(i)] = std::exp(-dk2 / (4.0 * sigma_k * sigma_k));
  }
  psi /= psi.norm();
  DensityMatrix rho(lattice);
  rho.elements_ = psi * psi.adjoint();
  return rho;
}

DensityMatrix DensityMatrix::superposition(const Lattice& lattice, const IndexVec& k1,
                                           const IndexVec& k2) {
  const auto a = static_cast<Eigen::Index>(lattice.offset(k1));
  const auto b = static_cast<Eigen::Index>(lattice.offset(k2));
  if (a == b) return plane_wave(lattice, k1);
  DensityMatrix rho(lattice);
  rho.elements_(a, a) = 0.5;
  rho.elements_(b, b) = 0.5;
  rho.elements_(a, b) = 0.5;
  rho.elements_(b, a) = 0.5;
  return rho;
}

DensityMatrix DensityMatrix::thermal_diagonal(const Lattice& lattice, double beta,
                                              double mass) {
  const Eigen::VectorXd E = basis_energies(lattice, mass);
  Eigen::VectorXd p = (-beta * E.array()).exp();
  p /= p.sum();
  DensityMatrix rho(lattice);
  rho.elements_.diagonal() = p.cast<std::complex<double>>();
  return rho;
}

double DensityMatrix::trace_real() const { return elements_.trace().real(); }

double DensityMatrix::hermiticity_defect() const {
  return (elements_ - elements_.adjoint()).cwiseAbs().maxCoeff();
}

Eigen::VectorXd DensityMatrix::populations() const {
  return elements_.diagonal().real();
}

Eigen::VectorXd basis_energies(const Lattice& lattice, double mass) {
  Eigen::VectorXd E(lattice.size());
  for (std::size_t i = 0; i < lattice.size(); ++i)
    E[static_cast<Eigen::Index>(i)] = kinetic_energy(lattice.wavevector_at(i), mass);
  return E;
}

namespace {

void check_same_lattice(const DensityMatrix& rho, const RateTable& table) {
  const auto& a = rho.lattice().spec();
  const auto& b = table.lattice().spec();
  if (a.d != b.d || a.n_max != b.n_max || a.L != b.L)
    throw ValidationError("master: density matrix and rate table lattices differ");
}

// Shared drift + loss + gain assembly. `geometric_gain` selects the Lindblad
// jump coupling sqrt(W W') instead of the Redfield mean (W + W')/2.
Eigen::MatrixXcd assemble_rhs(const Eigen::MatrixXcd& r, const Eigen::VectorXd& E,
                              const RateTable& table, bool geometric_gain) {
  const auto n = r.rows();
  const std::vector<double>& gamma = table.total_rate();

  Eigen::MatrixXcd out(n, n);
  const std::complex<double> minus_i(0.0, -1.0);
  for (Eigen::Index b = 0; b < n; ++b) {
    for (Eigen::Index a = 0; a < n; ++a) {
      const std::complex<double> c =
          std::complex<double>(-0.5 * (gamma[a] + gamma[b]), 0.0) +
          minus_i * ((E[a] - E[b]) / hbar);
      out(a, b) = c * r(a, b);
    }
  }

  for (const auto& ch : table.channels()) {
    const auto delta = static_cast<Eigen::Index>(ch.flat_shift);
    const double* w = geometric_gain ? ch.sqrt_rate.data() : ch.rate.data();
    for (std::int32_t sb : ch.sources) {
      const Eigen::Index db = sb + delta;
      const double wb = w[sb];
      for (std::int32_t sa : ch.sources) {
        const double coupling =
            geometric_gain ? w[sa] * wb : 0.5 * (w[sa] + wb);
        out(sa + delta, db) += coupling * r(sa, sb);
      }
    }
  }
  return out;
}

}  // namespace

Eigen::MatrixXcd redfield_rhs(const DensityMatrix& rho, const RateTable& table,
                              const ParticleSpec& particle) {
  check_same_lattice(rho, table);
  return assemble_rhs(rho.elements(), basis_energies(rho.lattice(), particle.m_S),
                      table, false);
}

Eigen::MatrixXcd lindblad_rhs(const DensityMatrix& rho, const RateTable& table,
                              const ParticleSpec& particle) {
  check_same_lattice(rho, table);
  return assemble_rhs(rho.elements(), basis_energies(rho.lattice(), particle.m_S),
                      table, true);
}

CorrectionI correction_I(const DensityMatrix& rho, const RateTable& table,
                         const ParticleSpec& /*particle*/) {
  check_same_lattice(rho, table);
  const Eigen::MatrixXcd& r = rho.elements();
  const auto n = r.rows();
  CorrectionI out;
  out.matrix = Eigen::MatrixXcd::Zero(n, n);
  Eigen::MatrixXcd gain = Eigen::MatrixXcd::Zero(n, n);

  // The loss anticommutators coincide, so the residual is carried entirely
  // by the gain couplings: (arithmetic - geometric) mean of the paired rates.
  for (const auto& ch : table.channels()) {
    const auto delta = static_cast<Eigen::Index>(ch.flat_shift);
    for (std::int32_t sb : ch.sources) {
      const Eigen::Index db = sb + delta;
      for (std::int32_t sa : ch.sources) {
        const double arith = 0.5 * (ch.rate[sa] + ch.rate[sb]);
        const double geo = ch.sqrt_rate[sa] * ch.sqrt_rate[sb];
        out.matrix(sa + delta, db) += (arith - geo) * r(sa, sb);
        gain(sa + delta, db) += arith * r(sa, sb);
      }
    }
  }
  out.max_norm = out.matrix.cwiseAbs().maxCoeff();
  out.gain_norm = gain.cwiseAbs().maxCoeff();
  return out;
}

GradientTensors gradient_tensors(const RateTable& table, const IndexVec& q_index,
                                 const IndexVec& k0_index) {
  const Lattice& lattice = table.lattice();
  const int d = lattice.dim();
  for (int axis = 0; axis < d; ++axis) {
    if (std::abs(k0_index[axis]) + 1 > lattice.n_max())
      throw std::domain_error("gradient_tensors: k0 must be interior to the basis");
  }
  Eigen::VectorXd grad(d);
  const double h = lattice.spacing();
  for (int axis = 0; axis < d; ++axis) {
    IndexVec up = k0_index, down = k0_index;
    ++up[axis];
    --down[axis];
    grad[axis] = (std::sqrt(table.rate(q_index, up)) -
                  std::sqrt(table.rate(q_index, down))) /
                 (2.0 * h);
  }
  GradientTensors out;
  out.S = grad * grad.transpose();
  out.A = Eigen::MatrixXd::Zero(d, d);
  return out;
}

Eigen::VectorXd sqrtw_gradient(const std::function<double(const Eigen::VectorXd&)>& W_of_k,
                               const Eigen::VectorXd& k0, double step) {
  Eigen::VectorXd grad(k0.size());
  for (Eigen::Index axis = 0; axis < k0.size(); ++axis) {
    Eigen::VectorXd up = k0, down = k0;
    up[axis] += step;
    down[axis] -= step;
    grad[axis] = (std::sqrt(W_of_k(up)) - std::sqrt(W_of_k(down))) / (2.0 * step);
  }
  return grad;
}

void validate(const EvolutionConfig& config) {
  if (!(config.dt > 0.0)) throw ValidationError("evolution: dt must be > 0");
  if (!(config.t_end >= config.dt))
    throw ValidationError("evolution: t_end must be >= dt");
  if (config.record_every < 1)
    throw ValidationError("evolution: record_every must be >= 1");
}

ObservableRecord observables(const DensityMatrix& rho, const ParticleSpec& particle) {
  const Eigen::MatrixXcd& r = rho.elements();
  const Lattice& lattice = rho.lattice();
  ObservableRecord rec;
  rec.trace = rho.trace_real();
  rec.hermiticity_defect = rho.hermiticity_defect();

  Eigen::MatrixXcd herm = 0.5 * (r + r.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(herm,
                                                         Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw NumericError("observables: eigensolve failed");
  rec.min_eigenvalue = solver.eigenvalues().minCoeff();

  const Eigen::VectorXd E = basis_energies(lattice, particle.m_S);
  const Eigen::VectorXd p = rho.populations();
  rec.mean_energy = E.dot(p);
  rec.mean_momentum = Eigen::VectorXd::Zero(lattice.dim());
  for (std::size_t i = 0; i < lattice.size(); ++i)
    rec.mean_momentum += p[static_cast<Eigen::Index>(i)] * lattice.wavevector_at(i);

  rec.purity = r.squaredNorm();  // Tr rho^2 for Hermitian rho
  rec.l1_coherence = r.cwiseAbs().sum() - r.diagonal().cwiseAbs().sum();
  return rec;
}

Stepper::Stepper(const RateTable& table, const ParticleSpec& particle, Backend backend,
                 double dt)
    : table_(table),
      particle_(particle),
      backend_(backend),
      dt_(dt),
      energies_(basis_energies(table.lattice(), particle.m_S)) {
  if (!(dt > 0.0)) throw ValidationError("stepper: dt must be > 0");
  if (backend == Backend::boltzmann_diagonal)
    throw ValidationError("stepper: the homogeneous Boltzmann backend evolves "
                          "distribution vectors, not density matrices");
}

void Stepper::step(DensityMatrix& rho) {
  check_same_lattice(rho, table_);
  const bool geometric = backend_ == Backend::lindblad;
  auto rhs = [&](const Eigen::MatrixXcd& m) {
    return assemble_rhs(m, energies_, table_, geometric);
  };

  const Eigen::MatrixXcd& r = rho.elements();
  const Eigen::MatrixXcd k1 = rhs(r);
  const Eigen::MatrixXcd k2 = rhs(r + (0.5 * dt_) * k1);
  const Eigen::MatrixXcd k3 = rhs(r + (0.5 * dt_) * k2);
  const Eigen::MatrixXcd k4 = rhs(r + dt_ * k3);
  Eigen::MatrixXcd next = r + (dt_ / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

  if (!next.allFinite())
    throw NumericError("stepper: NaN/Inf during integration; state left at last good step");

  const double defect = (next - next.adjoint()).cwiseAbs().maxCoeff();
  stats_.max_hermiticity_defect = std::max(stats_.max_hermiticity_defect, defect);
  if (defect > 1e-12) {
    next = 0.5 * (next + next.adjoint()).eval();
    ++stats_.rehermitize_count;
  }
  const double tr = next.trace().real();
  const double drift = std::abs(tr - 1.0);
  stats_.max_trace_drift = std::max(stats_.max_trace_drift, drift);
  if (drift > 1e-12) {
    next /= tr;
    ++stats_.renormalize_count;
  }
  rho.elements() = std::move(next);
}

}  // namespace qgas
