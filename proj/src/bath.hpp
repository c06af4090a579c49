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

#include <Eigen/Core>

#include "lattice.hpp"

namespace qgas {

// Ideal gas of scatterers at thermal equilibrium, described by the classical
// Maxwell-Boltzmann distribution over the momentum lattice.
struct BathSpec {
  double T = 1.0;    // temperature
  double m_B = 1.0;  // scatterer mass
  double n = 1.0;    // number density

  double beta() const { return 1.0 / (k_boltzmann * T); }
  // Mean distance between nearest neighboring scatterers, n^(-1/d).
  double mean_distance(int d) const;
};

void validate(const BathSpec& bath);

// Thermal wavenumber k_th = sqrt(2*pi*m_B*k_B*T)/hbar.
double thermal_wavenumber(const BathSpec& bath);
// Thermal de Broglie wavelength, 2*pi/k_th.
double thermal_wavelength(const BathSpec& bath);

// Maxwell-Boltzmann weight (lambda_th^d/V) exp(-pi |k|^2 / k_th^2) of a
// single bath mode. Sums to 1 over the basis up to truncation coverage.
double mb_weight(const BathSpec& bath, const Lattice& lattice, const Eigen::VectorXd& k_B);

// Summed mb_weight over the whole truncated basis; the deviation from 1 is
// the coverage error and is reported, never hidden.
double mb_weight_normalization(const BathSpec& bath, const Lattice& lattice);

// Coverage heuristic for trusting the thermal normalization on the basis:
// n_max * dk >= 6 * k_th / sqrt(2*pi) per axis.
bool thermal_coverage_ok(const BathSpec& bath, const Lattice& lattice);

// Single-scatterer thermal density matrix in position representation,
// (1/V) exp(-k_th^2 |x - x'|^2 / (4*pi)). Real, symmetric, 1/V on the diagonal.
double position_density(const BathSpec& bath, const Lattice& lattice,
                        const Eigen::VectorXd& x, const Eigen::VectorXd& x_prime);

// Coherence length of a gas particle, lambda_th * sqrt(d/(4*pi)).
double coherence_length(const BathSpec& bath, int d);

// Bath correlation function at momentum transfer q in the continuum limit:
// exp(-i*hbar*q^2*tau/(2*m_B)) * exp(-q^2*tau^2/(2*beta*m_B)).
std::complex<double> bath_correlation(const BathSpec& bath, const Eigen::VectorXd& q,
                                      double tau);

// Brute-force lattice sum of the same correlation function,
// sum_kB exp(-i*(E_{kB-q}-E_{kB})*tau/hbar) * mb_weight(kB).
// Converges to bath_correlation as the basis coverage grows.
std::complex<double> bath_correlation_lattice_oracle(const BathSpec& bath,
                                                     const Lattice& lattice,
                                                     const Eigen::VectorXd& q, double tau);

// Decay time sqrt(beta*m_B)/|q| of the correlation modulus. Throws
// std::domain_error at q = 0 (no decay).
double bath_correlation_time(const BathSpec& bath, const Eigen::VectorXd& q);

}  // namespace qgas
