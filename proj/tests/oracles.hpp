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

// Test-side oracles, independent of the production code paths they check.

#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include <gsl/gsl_sf_dawson.h>

#include "potential.hpp"
#include "quadrature.hpp"

namespace qgas::oracles {

// Radial Fourier transform of the real-space bump by direct quadrature:
//   d=1: 2 int u(r) cos(qr) dr
//   d=2: 2*pi int u(r) J0(qr) r dr
//   d=3: (4*pi/q) int u(r) sin(qr) r dr
inline double radial_fourier(const PotentialModel& model, int d, double q) {
  const double r_max = 14.0 * model.R;
  auto u = [&](double r) { return potential_value(model, r); };
  switch (d) {
    case 1:
      return 2.0 * integrate_adaptive([&](double r) { return u(r) * std::cos(q * r); },
                                      0.0, r_max, 1e-12);
    case 2:
      return 2.0 * M_PI *
             integrate_adaptive(
                 [&](double r) { return u(r) * std::cyl_bessel_j(0, q * r) * r; }, 0.0,
                 r_max, 1e-12);
    case 3:
      if (q == 0.0)
        return 4.0 * M_PI *
               integrate_adaptive([&](double r) { return u(r) * r * r; }, 0.0, r_max,
                                  1e-12);
      return 4.0 * M_PI / q *
             integrate_adaptive([&](double r) { return u(r) * std::sin(q * r) * r; },
                                0.0, r_max, 1e-12);
    default:
      throw std::invalid_argument("radial_fourier: d must be 1, 2 or 3");
  }
}

// Richardson extrapolation of values f(eps_0), f(eps_0/2), ... assuming an
// even error series in eps (leading term eps^2).
inline double richardson_eps2(std::vector<double> values) {
  const std::size_t n = values.size();
  if (n < 2) throw std::invalid_argument("richardson_eps2: need at least two values");
  for (std::size_t level = 1; level < n; ++level) {
    const double factor = std::pow(4.0, static_cast<double>(level));
    for (std::size_t i = 0; i + level < n; ++i)
      values[i] = (factor * values[i + 1] - values[i]) / (factor - 1.0);
  }
  return values[0];
}

// Closed form of the principal-value pole integral through the Dawson
// function: Pv int exp(-t^2)/(t-x) dt = -2 sqrt(pi) D(x).
inline double pv_pole_dawson(double x) {
  return -2.0 * std::sqrt(M_PI) * gsl_sf_dawson(x);
}

// d=3 closed form of the Gaussian-model total cross section,
// 2 pi^2 (m u0 R^3 / hbar^2)^2 (1 - exp(-4 k^2 R^2)) / (k^2 R^2).
inline double total_cross_section_closed_d3(const PotentialModel& model, double m,
                                            double k) {
  const double a = m * model.u0 * std::pow(model.R, 3) / (hbar * hbar);
  const double x = k * k * model.R * model.R;
  return 2.0 * M_PI * M_PI * a * a * (1.0 - std::exp(-4.0 * x)) / x;
}

}  // namespace qgas::oracles
