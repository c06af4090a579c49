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

#include <functional>
#include <vector>

namespace qgas {

// Adaptive quadrature of f over [a, b]. Throws NumericError with the residual
// estimate when the requested relative tolerance cannot be reached.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double rel_tol = 1e-10);

// Gauss-Hermite nodes and weights for integrals of the form
// int exp(-t^2) g(t) dt ~= sum_i w_i g(t_i).
struct GaussHermite {
  explicit GaussHermite(int order);
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Cauchy principal value  Pv int_{-inf}^{inf} exp(-t^2)/(t - x) dt,
// evaluated on a pole-symmetric grid: the substitution t = x -+ h pairs the
// abscissae around the pole so the 1/(t-x) singularity cancels exactly,
// leaving the smooth integrand -2*exp(-(x^2+h^2))*sinh(2xh)/h on h >= 0.
// Absolute tolerance 1e-8; throws NumericError when refinement stalls.
double pv_gaussian_pole(double x);

}  // namespace qgas
