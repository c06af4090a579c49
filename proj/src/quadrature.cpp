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

#include "quadrature.hpp"

#include <cmath>
#include <memory>
#include <string>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include "error.hpp"

namespace qgas {

namespace {

// GSL's default error handler aborts the process; disable it once and rely on
// return codes instead.
const int disable_gsl_abort = [] {
  gsl_set_error_handler_off();
  return 0;
}();

double callback_trampoline(double x, void* params) {
  auto* f = static_cast<const std::function<double(double)>*>(params);
  return (*f)(x);
}

}  // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double rel_tol) {
  (void)disable_gsl_abort;
  constexpr std::size_t limit = 512;
  std::unique_ptr<gsl_integration_workspace, decltype(&gsl_integration_workspace_free)>
      ws(gsl_integration_workspace_alloc(limit), gsl_integration_workspace_free);
  if (!ws) throw NumericError("integrate_adaptive: workspace allocation failed");

  gsl_function gf;
  gf.function = &callback_trampoline;
  gf.params = const_cast<std::function<double(double)>*>(&f);

  double result = 0.0, abserr = 0.0;
  const int status = gsl_integration_qag(&gf, a, b, 0.0, rel_tol, limit,
                                         GSL_INTEG_GAUSS61, ws.get(), &result, &abserr);
  if (status != GSL_SUCCESS) {
    throw NumericError("integrate_adaptive: quadrature did not converge (status " +
                       std::string(gsl_strerror(status)) + ", residual estimate " +
                       std::to_string(abserr) + ")");
  }
  return result;
}

GaussHermite::GaussHermite(int order) {
  if (order < 1) throw std::invalid_argument("GaussHermite: order must be >= 1");
  const gsl_integration_fixed_type* type = gsl_integration_fixed_hermite;
  std::unique_ptr<gsl_integration_fixed_workspace,
                  decltype(&gsl_integration_fixed_free)>
      ws(gsl_integration_fixed_alloc(type, static_cast<std::size_t>(order),
                                     0.0, 1.0, 0.0, 0.0),
         gsl_integration_fixed_free);
  if (!ws) throw NumericError("GaussHermite: node computation failed");
  const double* x = gsl_integration_fixed_nodes(ws.get());
  const double* w = gsl_integration_fixed_weights(ws.get());
  nodes.assign(x, x + order);
  weights.assign(w, w + order);
}

namespace {

// Paired-abscissae integrand of the principal value around the pole at x.
// The sinh form is exact where the two exponentials nearly cancel; the
// explicit difference avoids sinh overflow far from the pole.
double pv_paired_integrand(double x, double h) {
  const double y = 2.0 * x * h;
  if (std::abs(y) <= 1.0) {
    if (h == 0.0) return -4.0 * x * std::exp(-x * x);
    return -2.0 * std::exp(-(x * x + h * h)) * std::sinh(y) / h;
  }
  const double up = -(x + h) * (x + h);
  const double dn = -(x - h) * (x - h);
  return (std::exp(up) - std::exp(dn)) / h;
}

double pv_composite(double x, int panels_per_unit) {
  // Beyond h = |x| + 9 both exponentials are below exp(-81); the discarded
  // tail is smaller than 1e-30 in absolute value.
  const double H = std::abs(x) + 9.0;

  constexpr int gl_order = 15;
  std::unique_ptr<gsl_integration_glfixed_table,
                  decltype(&gsl_integration_glfixed_table_free)>
      table(gsl_integration_glfixed_table_alloc(gl_order),
            gsl_integration_glfixed_table_free);
  if (!table) throw NumericError("pv_gaussian_pole: table allocation failed");

  const int n_panels = std::max(4, static_cast<int>(std::ceil(H * panels_per_unit)));
  const double w = H / n_panels;
  double total = 0.0;
  for (int p = 0; p < n_panels; ++p) {
    const double a = p * w, b = a + w;
    for (int i = 0; i < gl_order; ++i) {
      double hi = 0.0, wi = 0.0;
      gsl_integration_glfixed_point(a, b, static_cast<std::size_t>(i), &hi, &wi,
                                    table.get());
      total += wi * pv_paired_integrand(x, hi);
    }
  }
  return total;
}

}  // namespace

double pv_gaussian_pole(double x) {
  const double coarse = pv_composite(x, 2);
  const double fine = pv_composite(x, 4);
  const double residual = std::abs(fine - coarse);
  if (residual > 1e-8 * std::max(1.0, std::abs(fine))) {
    throw NumericError("pv_gaussian_pole: refinement stalled, residual " +
                       std::to_string(residual));
  }
  return fine;
}

}  // namespace qgas
