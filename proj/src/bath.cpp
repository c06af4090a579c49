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

#include "bath.hpp"

#include <cmath>
#include <stdexcept>

#include "error.hpp"

namespace qgas {

double BathSpec::mean_distance(int d) const {
  return std::pow(n, -1.0 / d);
}

void validate(const BathSpec& bath) {
  if (!(bath.T > 0.0)) throw ValidationError("bath: temperature T must be > 0");
  if (!(bath.m_B > 0.0)) throw ValidationError("bath: scatterer mass m_B must be > 0");
  if (!(bath.n > 0.0)) throw ValidationError("bath: number density n must be > 0");
}

double thermal_wavenumber(const BathSpec& bath) {
  return std::sqrt(2.0 * M_PI * bath.m_B * k_boltzmann * bath.T) / hbar;
}

double thermal_wavelength(const BathSpec& bath) {
  return 2.0 * M_PI / thermal_wavenumber(bath);
}

double mb_weight(const BathSpec& bath, const Lattice& lattice, const Eigen::VectorXd& k_B) {
  const double k_th = thermal_wavenumber(bath);
  const double lambda_d = std::pow(thermal_wavelength(bath), lattice.dim());
  return lambda_d / lattice.volume() * std::exp(-M_PI * k_B.squaredNorm() / (k_th * k_th));
}

double mb_weight_normalization(const BathSpec& bath, const Lattice& lattice) {
  double sum = 0.0;
  for (std::size_t i = 0; i < lattice.size(); ++i)
    sum += mb_weight(bath, lattice, lattice.wavevector_at(i));
  return sum;
}

bool thermal_coverage_ok(const BathSpec& bath, const Lattice& lattice) {
  const double k_th = thermal_wavenumber(bath);
  return lattice.n_max() * lattice.spacing() >= 6.0 * k_th / std::sqrt(2.0 * M_PI);
}

double position_density(const BathSpec& bath, const Lattice& lattice,
                        const Eigen::VectorXd& x, const Eigen::VectorXd& x_prime) {
  const double k_th = thermal_wavenumber(bath);
  const double r2 = (x - x_prime).squaredNorm();
  return std::exp(-k_th * k_th * r2 / (4.0 * M_PI)) / lattice.volume();
}

double coherence_length(const BathSpec& bath, int d) {
  if (d < 1) throw std::domain_error("coherence_length: dimension must be >= 1");
  return thermal_wavelength(bath) * std::sqrt(d / (4.0 * M_PI));
}

std::complex<double> bath_correlation(const BathSpec& bath, const Eigen::VectorXd& q,
                                      double tau) {
  if (tau < 0.0) throw std::domain_error("bath_correlation: tau must be >= 0");
  const double q2 = q.squaredNorm();
  const double phase = -hbar * q2 * tau / (2.0 * bath.m_B);
  const double decay = -q2 * tau * tau / (2.0 * bath.beta() * bath.m_B);
  return std::polar(std::exp(decay), phase);
}

std::complex<double> bath_correlation_lattice_oracle(const BathSpec& bath,
                                                     const Lattice& lattice,
                                                     const Eigen::VectorXd& q, double tau) {
  if (tau < 0.0) throw std::domain_error("bath_correlation_lattice_oracle: tau must be >= 0");
  std::complex<double> sum = 0.0;
  for (std::size_t i = 0; i < lattice.size(); ++i) {
    const Eigen::VectorXd k_B = lattice.wavevector_at(i);
    const double dE = kinetic_energy(k_B - q, bath.m_B) - kinetic_energy(k_B, bath.m_B);
    sum += std::polar(mb_weight(bath, lattice, k_B), -dE * tau / hbar);
  }
  return sum;
}

double bath_correlation_time(const BathSpec& bath, const Eigen::VectorXd& q) {
  const double qn = q.norm();
  if (!(qn > 0.0))
    throw std::domain_error("bath_correlation_time: undefined at q = 0 (no decay)");
  return std::sqrt(bath.beta() * bath.m_B) / qn;
}

}  // namespace qgas
