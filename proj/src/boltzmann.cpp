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

#include "boltzmann.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "error.hpp"

namespace qgas {

DistributionVector::DistributionVector(const Lattice& lat)
    : lattice(lat), values(Eigen::VectorXd::Zero(lat.size())) {}

DistributionVector DistributionVector::plane_wave(const Lattice& lattice,
                                                  const IndexVec& k0) {
  DistributionVector f(lattice);
  f.values[static_cast<Eigen::Index>(lattice.offset(k0))] = 1.0;
  return f;
}

DistributionVector DistributionVector::thermal(const Lattice& lattice, double beta,
                                               double mass) {
  DistributionVector f(lattice);
  const Eigen::VectorXd E = basis_energies(lattice, mass);
  f.values = (-beta * E.array()).exp();
  f.values /= f.values.sum();
  return f;
}

DistributionVector DistributionVector::from_density(const DensityMatrix& rho) {
  DistributionVector f(rho.lattice());
  f.values = rho.populations();
  return f;
}

Eigen::VectorXd collision_rhs(const DistributionVector& f, const RateTable& table) {
  const auto& a = f.lattice.spec();
  const auto& b = table.lattice().spec();
  if (a.d != b.d || a.n_max != b.n_max || a.L != b.L)
    throw ValidationError("collision_rhs: distribution and rate table lattices differ");

  const std::vector<double>& gamma = table.total_rate();
  Eigen::VectorXd out(f.values.size());
  for (Eigen::Index k = 0; k < out.size(); ++k) out[k] = -gamma[k] * f.values[k];
  for (const auto& ch : table.channels()) {
    const auto delta = static_cast<Eigen::Index>(ch.flat_shift);
    for (std::int32_t s : ch.sources) out[s + delta] += ch.rate[s] * f.values[s];
  }
  return out;
}

WignerField::WignerField(const Lattice& lat)
    : lattice(lat),
      values(Eigen::MatrixXd::Zero(lat.per_axis(), lat.per_axis())),
      r_spacing(lat.box_side() / lat.per_axis()) {
  if (lat.dim() != 1)
    throw ValidationError("wigner: spatial fields are implemented in d = 1 only");
}

WignerField wigner_transform(const DensityMatrix& rho) {
  WignerField field(rho.lattice());
  const Lattice& lattice = rho.lattice();
  const int n_max = lattice.n_max();
  const int N = lattice.per_axis();
  const double dk = lattice.spacing();
  const double V = lattice.volume();

  // Hermitize first so the conjugate-paired sum below is exactly real.
  const Eigen::MatrixXcd r = 0.5 * (rho.elements() + rho.elements().adjoint());

  for (int n = -n_max; n <= n_max; ++n) {
    const auto col = static_cast<Eigen::Index>(lattice.offset({n}));
    const int j_max = n_max - std::abs(n);
    for (int m = 0; m < N; ++m) {
      const double pos = field.position(m);
      double sum = r(col, col).real();
      for (int j = 1; j <= j_max; ++j) {
        const auto up = static_cast<Eigen::Index>(lattice.offset({n + j}));
        const auto dn = static_cast<Eigen::Index>(lattice.offset({n - j}));
        const double s = 2.0 * j * dk;  // even separation keeps k +- s/2 on-lattice
        sum += 2.0 * (r(up, dn) * std::polar(1.0, s * pos)).real();
      }
      field.values(m, col) = sum / V;
    }
  }
  return field;
}

Eigen::VectorXd momentum_marginal(const WignerField& field) {
  return field.values.colwise().sum() * field.r_spacing;
}

namespace {

struct Spectral {
  Eigen::MatrixXcd dft, idft;
  Eigen::VectorXd kappa;

  explicit Spectral(const Lattice& lattice) {
    const int N = lattice.per_axis();
    const double dr = lattice.box_side() / N;
    dft.resize(N, N);
    idft.resize(N, N);
    kappa.resize(N);
    for (int l = 0; l < N; ++l) kappa[l] = (l - lattice.n_max()) * lattice.spacing();
    for (int l = 0; l < N; ++l) {
      for (int m = 0; m < N; ++m) {
        dft(l, m) = std::polar(1.0 / N, -kappa[l] * (m * dr));
        idft(m, l) = std::polar(1.0, kappa[l] * (m * dr));
      }
    }
  }

  void shift_column(Eigen::Ref<Eigen::VectorXd> column, double distance) const {
    Eigen::VectorXcd coeff = dft * column;
    for (Eigen::Index l = 0; l < coeff.size(); ++l)
      coeff[l] *= std::polar(1.0, -kappa[l] * distance);
    column = (idft * coeff).real();
  }
};

}  // namespace

WignerField advect(const WignerField& field, const ParticleSpec& particle, double dt) {
  if (!(dt > 0.0)) throw std::domain_error("advect: dt must be > 0");
  const Spectral spectral(field.lattice);
  WignerField out = field;
  for (Eigen::Index col = 0; col < out.values.cols(); ++col) {
    const double k = field.lattice.wavevector_at(static_cast<std::size_t>(col))[0];
    const double v = hbar * k / particle.m_S;
    if (v != 0.0) spectral.shift_column(out.values.col(col), v * dt);
  }
  return out;
}

HomogeneousStepper::HomogeneousStepper(const RateTable& table, double dt)
    : table_(table), dt_(dt) {
  if (!(dt > 0.0)) throw ValidationError("stepper: dt must be > 0");
}

void HomogeneousStepper::step(DistributionVector& f) {
  auto rhs = [&](const Eigen::VectorXd& v) {
    DistributionVector tmp(f.lattice);
    tmp.values = v;
    return collision_rhs(tmp, table_);
  };
  const Eigen::VectorXd k1 = rhs(f.values);
  const Eigen::VectorXd k2 = rhs(f.values + (0.5 * dt_) * k1);
  const Eigen::VectorXd k3 = rhs(f.values + (0.5 * dt_) * k2);
  const Eigen::VectorXd k4 = rhs(f.values + dt_ * k3);
  Eigen::VectorXd next = f.values + (dt_ / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  if (!next.allFinite())
    throw NumericError("homogeneous stepper: NaN/Inf during integration");
  f.values = std::move(next);
}

FieldStepper::FieldStepper(const RateTable& table, const ParticleSpec& particle,
                           double dt)
    : table_(table), particle_(particle), dt_(dt) {
  if (!(dt > 0.0)) throw ValidationError("stepper: dt must be > 0");
  const Spectral spectral(table.lattice());
  dft_ = spectral.dft;
  idft_ = spectral.idft;
  kappa_ = spectral.kappa;
}

Eigen::MatrixXd FieldStepper::collide_rhs(const Eigen::MatrixXd& F) const {
  const std::vector<double>& gamma = table_.total_rate();
  Eigen::MatrixXd out(F.rows(), F.cols());
  for (Eigen::Index k = 0; k < F.cols(); ++k) out.col(k) = -gamma[k] * F.col(k);
  for (const auto& ch : table_.channels()) {
    const auto delta = static_cast<Eigen::Index>(ch.flat_shift);
    for (std::int32_t s : ch.sources) out.col(s + delta) += ch.rate[s] * F.col(s);
  }
  return out;
}

void FieldStepper::advect_half(WignerField& field) const {
  for (Eigen::Index col = 0; col < field.values.cols(); ++col) {
    const double k = field.lattice.wavevector_at(static_cast<std::size_t>(col))[0];
    const double v = hbar * k / particle_.m_S;
    if (v == 0.0) continue;
    Eigen::VectorXcd coeff = dft_ * field.values.col(col);
    for (Eigen::Index l = 0; l < coeff.size(); ++l)
      coeff[l] *= std::polar(1.0, -kappa_[l] * v * 0.5 * dt_);
    field.values.col(col) = (idft_ * coeff).real();
  }
}

void FieldStepper::step(WignerField& field) {
  advect_half(field);
  const Eigen::MatrixXd& F = field.values;
  const Eigen::MatrixXd k1 = collide_rhs(F);
  const Eigen::MatrixXd k2 = collide_rhs(F + (0.5 * dt_) * k1);
  const Eigen::MatrixXd k3 = collide_rhs(F + (0.5 * dt_) * k2);
  const Eigen::MatrixXd k4 = collide_rhs(F + dt_ * k3);
  Eigen::MatrixXd next = F + (dt_ / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  if (!next.allFinite())
    throw NumericError("field stepper: NaN/Inf during integration");
  field.values = std::move(next);
  advect_half(field);
}

HomogeneousTrajectory evolve_homogeneous(DistributionVector& f, const RateTable& table,
                                         const ParticleSpec& particle,
                                         const EvolutionConfig& config) {
  validate(config);
  const Eigen::VectorXd E = basis_energies(f.lattice, particle.m_S);
  HomogeneousStepper stepper(table, config.dt);
  HomogeneousTrajectory traj;
  auto record = [&](double t) {
    traj.times.push_back(t);
    traj.populations.push_back(f.values);
    traj.mean_energy.push_back(E.dot(f.values));
  };
  record(0.0);
  const long n_steps = std::lround(config.t_end / config.dt);
  for (long s = 1; s <= n_steps; ++s) {
    stepper.step(f);
    if (s % config.record_every == 0 || s == n_steps) record(s * config.dt);
  }
  return traj;
}

FieldTrajectory evolve_field(WignerField& field, const RateTable& table,
                             const ParticleSpec& particle,
                             const EvolutionConfig& config) {
  validate(config);
  const Eigen::VectorXd E = basis_energies(field.lattice, particle.m_S);
  FieldStepper stepper(table, particle, config.dt);
  FieldTrajectory traj;
  auto record = [&](double t) {
    traj.times.push_back(t);
    Eigen::VectorXd marginal = momentum_marginal(field);
    traj.mean_energy.push_back(E.dot(marginal));
    traj.marginals.push_back(std::move(marginal));
  };
  record(0.0);
  const long n_steps = std::lround(config.t_end / config.dt);
  for (long s = 1; s <= n_steps; ++s) {
    stepper.step(field);
    if (s % config.record_every == 0 || s == n_steps) record(s * config.dt);
  }
  return traj;
}

double relative_entropy(const Eigen::VectorXd& f, const Eigen::VectorXd& pi) {
  if (f.size() != pi.size())
    throw std::invalid_argument("relative_entropy: size mismatch");
  double sum = 0.0;
  for (Eigen::Index i = 0; i < f.size(); ++i) {
    if (f[i] <= 0.0) continue;
    if (!(pi[i] > 0.0))
      throw std::domain_error("relative_entropy: reference must be positive");
    sum += f[i] * std::log(f[i] / pi[i]);
  }
  return sum;
}

double curvature_correction_estimate(const DensityMatrix& rho, const RateTable& table,
                                     const IndexVec& q_index, const IndexVec& k_index) {
  const Lattice& lattice = rho.lattice();
  if (lattice.dim() != 1)
    throw ValidationError("curvature_correction_estimate: implemented in d = 1 only");
  const WignerField field = wigner_transform(rho);

  const auto source = lattice.kick(k_index, IndexVec{-q_index[0]});
  if (!source)
    throw std::domain_error("curvature_correction_estimate: gain source k-q leaves the basis");
  const int s = (*source)[0];
  if (std::abs(s) + 1 > lattice.n_max())
    throw std::domain_error("curvature_correction_estimate: k-q must be interior for the W Hessian");

  const double dk = lattice.spacing();
  const double w0 = table.rate(q_index, *source);
  const double w_hess = (table.rate(q_index, {s + 1}) - 2.0 * w0 +
                         table.rate(q_index, {s - 1})) /
                        (dk * dk);

  const auto col = static_cast<Eigen::Index>(lattice.offset(*source));
  const int N = field.n_positions();
  const double dr = field.r_spacing;
  double max_zeroth = 0.0, max_second = 0.0;
  for (int m = 0; m < N; ++m) {
    const double f = field.values(m, col);
    const double f_up = field.values((m + 1) % N, col);
    const double f_dn = field.values((m + N - 1) % N, col);
    const double f_rr = (f_up - 2.0 * f + f_dn) / (dr * dr);
    max_zeroth = std::max(max_zeroth, std::abs(w0 * f));
    max_second = std::max(max_second, std::abs(0.125 * w_hess * f_rr));
  }
  if (max_zeroth == 0.0) {
    if (max_second == 0.0) return 0.0;
    return std::numeric_limits<double>::infinity();
  }
  return max_second / max_zeroth;
}

}  // namespace qgas
