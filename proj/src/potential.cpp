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

#include "potential.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "error.hpp"
#include "quadrature.hpp"

namespace qgas {

void validate(const PotentialModel& model) {
  if (!(model.R > 0.0)) throw ValidationError("potential: range R must be > 0");
  if (!std::isfinite(model.u0)) throw ValidationError("potential: strength u0 must be finite");
}

double potential_value(const PotentialModel& model, double r) {
  return model.u0 * std::exp(-r * r / (2.0 * model.R * model.R));
}

double fourier_u(const PotentialModel& model, int d, double q_norm) {
  const double R2 = model.R * model.R;
  return model.u0 * std::pow(2.0 * M_PI, 0.5 * d) * std::pow(model.R, d) *
         std::exp(-0.5 * q_norm * q_norm * R2);
}

BinaryKinematics BinaryKinematics::from(const Eigen::VectorXd& k_S,
                                        const Eigen::VectorXd& k_B, double m_S,
                                        double m_B) {
  if (!(m_S > 0.0) || !(m_B > 0.0))
    throw std::domain_error("BinaryKinematics: masses must be > 0");
  BinaryKinematics kin;
  kin.m_S = m_S;
  kin.m_B = m_B;
  kin.M_total = m_S + m_B;
  kin.m_reduced = m_S * m_B / kin.M_total;
  kin.k_rel = (m_B * k_S - m_S * k_B) / kin.M_total;
  kin.K_total = k_S + k_B;
  return kin;
}

Eigen::VectorXd BinaryKinematics::final_particle(const Eigen::VectorXd& Omega) const {
  return (m_S / M_total) * K_total + k_rel.norm() * Omega;
}

Eigen::VectorXd BinaryKinematics::final_scatterer(const Eigen::VectorXd& Omega) const {
  return (m_B / M_total) * K_total - k_rel.norm() * Omega;
}

double energy_difference(const Eigen::VectorXd& q, const Eigen::VectorXd& k_S,
                         const Eigen::VectorXd& k_B, double m_S, double m_B) {
  return (kinetic_energy(k_S + q, m_S) + kinetic_energy(k_B - q, m_B)) -
         (kinetic_energy(k_S, m_S) + kinetic_energy(k_B, m_B));
}

double energy_difference_com(const Eigen::VectorXd& q, const Eigen::VectorXd& k_rel,
                             double m_reduced) {
  return hbar * hbar / (2.0 * m_reduced) *
         ((k_rel + q).squaredNorm() - k_rel.squaredNorm());
}

double binary_rate(const PotentialModel& model, const Lattice& lattice,
                   const Eigen::VectorXd& q, const Eigen::VectorXd& k_S,
                   const Eigen::VectorXd& k_B, double m_S, double m_B, double eps) {
  if (!(eps > 0.0)) throw std::domain_error("binary_rate: broadening eps must be > 0");
  const double D = energy_difference(q, k_S, k_B, m_S, m_B);
  const double u = fourier_u(model, lattice.dim(), q.norm());
  const double delta = std::exp(-0.5 * (D / eps) * (D / eps)) /
                       (eps * std::sqrt(2.0 * M_PI));
  const double V = lattice.volume();
  return 2.0 * M_PI / hbar * (u * u) / (V * V) * delta;
}

double default_energy_broadening(const Lattice& lattice, double k, double m_reduced) {
  return hbar * hbar * k * lattice.spacing() / m_reduced;
}

double diff_cross_section(const PotentialModel& model, int d, double m_reduced,
                          const Eigen::VectorXd& Omega, const Eigen::VectorXd& k_rel) {
  if (std::abs(Omega.norm() - 1.0) > 1e-12)
    throw std::invalid_argument("diff_cross_section: Omega must be a unit vector");
  const double k = k_rel.norm();
  if (k == 0.0 && d < 3)
    throw std::domain_error("diff_cross_section: singular at k = 0 for d < 3");
  const double q = (k * Omega - k_rel).norm();
  const double amp = 2.0 * m_reduced / (hbar * hbar) * fourier_u(model, d, q);
  return 0.5 * M_PI * std::pow(k, d - 3) / std::pow(2.0 * M_PI, d) * amp * amp;
}

namespace {

// Area of the unit sphere embedded in R^m.
double unit_sphere_area(int m) {
  return 2.0 * std::pow(M_PI, 0.5 * m) / std::tgamma(0.5 * m);
}

}  // namespace

double total_cross_section(const PotentialModel& model, int d, double m_reduced,
                           double k) {
  if (!(k > 0.0)) throw std::domain_error("total_cross_section: k must be > 0");
  Eigen::VectorXd k_rel = Eigen::VectorXd::Zero(d);
  k_rel[0] = k;

  if (d == 1) {
    Eigen::VectorXd fwd(1), bwd(1);
    fwd << 1.0;
    bwd << -1.0;
    return diff_cross_section(model, d, m_reduced, fwd, k_rel) +
           diff_cross_section(model, d, m_reduced, bwd, k_rel);
  }

  // Radial form factor depends only on the polar angle from k_rel; the
  // remaining d-2 angles integrate to the area of the unit (d-1)-sphere
  // cross section, sin(theta)^(d-2) * S_{d-1}.
  const double ring = (d == 2) ? 2.0 : unit_sphere_area(d - 1);
  auto integrand = [&](double theta) {
    Eigen::VectorXd Omega = Eigen::VectorXd::Zero(d);
    Omega[0] = std::cos(theta);
    Omega[1] = std::sin(theta);
    const double ds = diff_cross_section(model, d, m_reduced, Omega, k_rel);
    return ds * std::pow(std::sin(theta), d - 2);
  };
  return ring * integrate_adaptive(integrand, 0.0, M_PI, 1e-12);
}

MeanFreePath mean_free_path(const BathSpec& bath, const PotentialModel& model, int d,
                            double m_reduced, double k) {
  if (!(k > 0.0)) throw std::domain_error("mean_free_path: k must be > 0");
  const double sigma = total_cross_section(model, d, m_reduced, k);
  MeanFreePath out;
  if (sigma == 0.0) {
    out.length = std::numeric_limits<double>::infinity();
    out.weak_ratio = std::numeric_limits<double>::infinity();
    out.weak_scattering = true;
    return out;
  }
  out.length = 1.0 / (bath.n * sigma);
  out.weak_ratio = k * out.length;
  out.weak_scattering = out.weak_ratio >= 10.0;
  return out;
}

}  // namespace qgas
