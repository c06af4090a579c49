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

// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Desk scale: d = 1 lattices, minutes end to end.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "boltzmann.hpp"
#include "oracles.hpp"
#include "rates.hpp"

using namespace qgas;

namespace {

int g_failures = 0;

void criterion(const char* id, bool pass, const std::string& detail) {
  std::printf("[%s] %s: %s\n", pass ? "PASS" : "FAIL", id, detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

void run_criterion(const char* id, const std::function<std::pair<bool, std::string>()>& fn) {
  const auto start = std::chrono::steady_clock::now();
  bool pass = false;
  std::string detail;
  try {
    auto [ok, text] = fn();
    pass = ok;
    detail = text;
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::ostringstream line;
  line << detail << " (" << std::fixed << secs << "s)";
  criterion(id, pass, line.str());
}

std::string fmt(double v) {
  std::ostringstream ss;
  ss.precision(3);
  ss << std::scientific << v;
  return ss.str();
}

Eigen::VectorXd vec1(double x) {
  Eigen::VectorXd v(1);
  v << x;
  return v;
}

// Shared d=1 desk-scale configuration.
struct BaseSetup {
  BathSpec bath{0.5, 1.0, 0.02};
  PotentialModel model{PotentialModel::Shape::gaussian, 1.0, 0.3};
  Lattice lattice{LatticeSpec{1, 2.0 * M_PI / 0.25, 24}};
  ParticleSpec particle{1.0, {20}, 0.0};  // E0 = 12.5 = 25 k_B T
};

double relative_gap(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  if (scale < 1e-300) return 0.0;
  return std::abs(a - b) / scale;
}

// --- A1 + the Lindblad eigenvalue floor used by A7 -------------------------

double g_lindblad_eig_ratio_floor = 0.0;  // min over runs of min_eig/max_eig

std::pair<bool, std::string> a1_trace_hermiticity() {
  // Smaller basis keeps 2 x 10^4 full-matrix RK4 steps fast; a packet with
  // genuine coherences exercises both the drift and the collision terms.
  BathSpec bath{0.5, 1.0, 0.02};
  PotentialModel model{PotentialModel::Shape::gaussian, 1.0, 0.3};
  Lattice lattice(LatticeSpec{1, 2.0 * M_PI / 0.25, 18});
  ParticleSpec particle{1.0, {12}, 0.0};
  RateTable table = RateTable::build(bath, model, lattice, particle.m_S);

  // Position-shifted Gaussian packet: complex coherences stress the drift
  // and both collision structures.
  auto shifted_packet = [&]() {
    DensityMatrix rho(lattice);
    Eigen::VectorXcd psi(lattice.size());
    const double k_center = lattice.wavevector({12})[0];
    const double sigma_k2 = 0.25 * 0.25;
    const double r0 = 0.37 * lattice.box_side();
    for (std::size_t i = 0; i < lattice.size(); ++i) {
      const double k = lattice.wavevector_at(i)[0];
      psi[static_cast<Eigen::Index>(i)] =
          std::polar(std::exp(-(k - k_center) * (k - k_center) / (4.0 * sigma_k2)),
                     -k * r0);
    }
    psi /= psi.norm();
    rho.elements() = psi * psi.adjoint();
    return rho;
  };

  std::ostringstream detail;
  bool pass = true;
  for (Backend backend : {Backend::redfield, Backend::lindblad}) {
    DensityMatrix rho = shifted_packet();
    Stepper stepper(table, particle, backend, 0.005);
    double eig_ratio_floor = 0.0;
    for (int s = 1; s <= 10000; ++s) {
      stepper.step(rho);
      if (backend == Backend::lindblad && s % 100 == 0) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(
            0.5 * (rho.elements() + rho.elements().adjoint()), Eigen::EigenvaluesOnly);
        const double lo = solver.eigenvalues().minCoeff();
        const double hi = solver.eigenvalues().maxCoeff();
        eig_ratio_floor = std::min(eig_ratio_floor, lo / std::max(hi, 1e-300));
      }
    }
    const StepStats& st = stepper.stats();
    pass = pass && st.max_trace_drift <= 1e-8 && st.max_hermiticity_defect <= 1e-10;
    detail << to_string(backend) << " drift " << fmt(st.max_trace_drift) << ", defect "
           << fmt(st.max_hermiticity_defect) << "; ";
    if (backend == Backend::lindblad)
      g_lindblad_eig_ratio_floor = std::min(g_lindblad_eig_ratio_floor, eig_ratio_floor);
  }
  return {pass, detail.str() + "10^4 RK4 steps each"};
}

// --- A2 kernel oracles ------------------------------------------------------

std::pair<bool, std::string> a2_kernel_oracles() {
  BathSpec bath{1.0, 1.0, 0.05};
  PotentialModel model{PotentialModel::Shape::gaussian, 0.8, 0.6};
  const double m_S = 1.0;

  double worst_lattice = 0.0, worst_xsec = 0.0;
  int points = 0;

  // The broadened sum carries an even error series in eps, so three
  // Richardson eliminations leave ~(eps_max/sigma_D)^8. The finest eps must
  // stay at or above one lattice spacing of energy or the sampled delta
  // aliases: each panel gets a ladder matched to its lattice.

  // d = 1 panel: 16 points on a fine bath lattice.
  Lattice fine(LatticeSpec{1, 2.0 * M_PI / 0.025, 640});
  for (double q : {0.3, 0.7, 1.2, 2.0}) {
    for (double k : {-2.5, -0.5, 1.0, 2.2}) {
      const Eigen::VectorXd qv = vec1(q), kv = vec1(k);
      const double analytic = rate_W_analytic(bath, model, fine, m_S, qv, kv);
      const double sigma_D = hbar * hbar * q * thermal_wavenumber(bath) /
                             (std::sqrt(2.0 * M_PI) * bath.m_B);
      std::vector<double> levels;
      for (double frac : {0.2, 0.1, 0.05, 0.025})
        levels.push_back(
            rate_W_lattice_oracle(bath, model, fine, m_S, qv, kv, frac * sigma_D));
      worst_lattice = std::max(
          worst_lattice, relative_gap(oracles::richardson_eps2(levels), analytic));
      worst_xsec = std::max(
          worst_xsec,
          relative_gap(rate_W_from_cross_section(bath, model, fine, m_S, qv, kv),
                       analytic));
      ++points;
    }
  }

  // d = 2 panel: 4 points on a coarser lattice, hence a coarser ladder.
  Lattice plane(LatticeSpec{2, 2.0 * M_PI / 0.05, 320});
  for (double q : {0.6, 1.4}) {
    for (double k : {0.8, -1.6}) {
      Eigen::VectorXd qv(2), kv(2);
      qv << q, 0.5 * q;
      kv << k, -0.25;
      const double analytic = rate_W_analytic(bath, model, plane, m_S, qv, kv);
      const double sigma_D = hbar * hbar * qv.norm() * thermal_wavenumber(bath) /
                             (std::sqrt(2.0 * M_PI) * bath.m_B);
      std::vector<double> levels;
      for (double frac : {0.4, 0.2, 0.1, 0.05})
        levels.push_back(
            rate_W_lattice_oracle(bath, model, plane, m_S, qv, kv, frac * sigma_D));
      worst_lattice = std::max(
          worst_lattice, relative_gap(oracles::richardson_eps2(levels), analytic));
      worst_xsec = std::max(
          worst_xsec,
          relative_gap(rate_W_from_cross_section(bath, model, plane, m_S, qv, kv),
                       analytic));
      ++points;
    }
  }

  const bool pass = worst_lattice <= 1e-3 && worst_xsec <= 1e-4;
  return {pass, "lattice-oracle err " + fmt(worst_lattice) + " (tol 1e-3), xsec route " +
                    fmt(worst_xsec) + " (tol 1e-4), " + std::to_string(points) +
                    "-point panel"};
}

// --- A3 three-way equivalence -----------------------------------------------

std::pair<bool, std::string> a3_three_way() {
  BaseSetup s;
  RateTable table = RateTable::build(s.bath, s.model, s.lattice, s.particle.m_S);
  const double dt = 0.05 / table.max_total_rate();
  const int blocks = 10, steps_per_block = 200;

  DensityMatrix red = DensityMatrix::plane_wave(s.lattice, s.particle.k0_index);
  DensityMatrix lin = DensityMatrix::plane_wave(s.lattice, s.particle.k0_index);
  DistributionVector f = DistributionVector::plane_wave(s.lattice, s.particle.k0_index);
  Stepper red_stepper(table, s.particle, Backend::redfield, dt);
  Stepper lin_stepper(table, s.particle, Backend::lindblad, dt);
  HomogeneousStepper vec_stepper(table, dt);

  double worst = 0.0;
  for (int b = 0; b < blocks; ++b) {
    for (int i = 0; i < steps_per_block; ++i) {
      red_stepper.step(red);
      lin_stepper.step(lin);
      vec_stepper.step(f);
    }
    const Eigen::VectorXd pr = red.populations();
    const Eigen::VectorXd pl = lin.populations();
    for (Eigen::Index k = 0; k < pr.size(); ++k) {
      worst = std::max(worst, relative_gap(pr[k], pl[k]));
      worst = std::max(worst, relative_gap(pr[k], f.values[k]));
      worst = std::max(worst, relative_gap(pl[k], f.values[k]));
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(
        0.5 * (lin.elements() + lin.elements().adjoint()), Eigen::EigenvaluesOnly);
    g_lindblad_eig_ratio_floor =
        std::min(g_lindblad_eig_ratio_floor,
                 solver.eigenvalues().minCoeff() /
                     std::max(solver.eigenvalues().maxCoeff(), 1e-300));
  }
  return {worst <= 1e-9,
          "max elementwise relative gap " + fmt(worst) + " over 10 recorded times (tol 1e-9)"};
}

// --- A4 thermalization & detailed balance -----------------------------------

std::pair<bool, std::string> a4_thermalization() {
  BaseSetup s;
  RateTable table = RateTable::build(s.bath, s.model, s.lattice, s.particle.m_S);

  // Detailed balance on every stored in-basis pair.
  const double beta = s.bath.beta();
  double worst_db = 0.0;
  for (const auto& ch : table.channels()) {
    for (std::int32_t src : ch.sources) {
      const IndexVec k = s.lattice.index_of(static_cast<std::size_t>(src));
      const IndexVec kq = *s.lattice.kick(k, ch.q_index);
      IndexVec minus_q = ch.q_index;
      for (int& c : minus_q) c = -c;
      const double lhs = table.rate(ch.q_index, k) *
                         std::exp(-beta * kinetic_energy(s.lattice.wavevector(k), 1.0));
      const double rhs = table.rate(minus_q, kq) *
                         std::exp(-beta * kinetic_energy(s.lattice.wavevector(kq), 1.0));
      if (std::max(lhs, rhs) < 1e-280) continue;
      worst_db = std::max(worst_db, relative_gap(lhs, rhs));
    }
  }

  // Relax a fast plane wave (E0 = 25 k_B T) to t = 10 / Gamma(k0).
  const double gamma_k0 = table.total_rate()[s.lattice.offset(s.particle.k0_index)];
  EvolutionConfig config;
  config.backend = Backend::boltzmann_diagonal;
  config.t_end = 10.0 / gamma_k0;
  config.dt = std::min(config.t_end / 8000.0, 0.1 / table.max_total_rate());
  config.record_every = 80;

  DistributionVector f = DistributionVector::plane_wave(s.lattice, s.particle.k0_index);
  const DistributionVector pi =
      DistributionVector::thermal(s.lattice, beta, s.particle.m_S);
  HomogeneousTrajectory traj = evolve_homogeneous(f, table, s.particle, config);

  bool entropy_monotone = true;
  double previous = relative_entropy(traj.populations.front(), pi.values);
  for (std::size_t i = 1; i < traj.populations.size(); ++i) {
    const double current = relative_entropy(traj.populations[i], pi.values);
    if (current > previous + 1e-12) entropy_monotone = false;
    previous = current;
  }
  const double deviation = (traj.populations.back() - pi.values).cwiseAbs().maxCoeff();

  const bool pass = worst_db <= 1e-10 && deviation <= 1e-3 && entropy_monotone;
  return {pass, "detailed balance " + fmt(worst_db) + " (tol 1e-10), MB deviation " +
                    fmt(deviation) + " (tol 1e-3), relative entropy " +
                    (entropy_monotone ? "monotone" : "NOT monotone")};
}

// --- A5 bath correlation ------------------------------------------------------

std::pair<bool, std::string> a5_bath_correlation() {
  BathSpec bath{1.0, 1.0, 1.0};
  Lattice fine(LatticeSpec{1, 2.0 * M_PI / 0.05, 160});
  const double coverage = fine.box_side() * thermal_wavenumber(bath);

  const Eigen::VectorXd q = vec1(0.75);
  const double tau_B = bath_correlation_time(bath, q);
  double worst = 0.0;
  for (double tau : {0.0, 0.25 * tau_B, 0.5 * tau_B, tau_B, 1.5 * tau_B, 2.0 * tau_B}) {
    const std::complex<double> oracle = bath_correlation_lattice_oracle(bath, fine, q, tau);
    const std::complex<double> closed = bath_correlation(bath, q, tau);
    worst = std::max(worst, std::abs(oracle - closed) / std::max(1.0, std::abs(closed)));
  }
  const double mod_gap =
      std::abs(std::abs(bath_correlation(bath, q, tau_B)) - std::exp(-0.5));

  const bool pass = coverage >= 50.0 && worst <= 1e-6 && mod_gap <= 1e-10;
  return {pass, "oracle vs closed form " + fmt(worst) + " (tol 1e-6) at L*k_th = " +
                    fmt(coverage) + ", |kappa(tau_B)| gap " + fmt(mod_gap) +
                    " (tol 1e-10)"};
}

// --- A6 cross sections --------------------------------------------------------

std::pair<bool, std::string> a6_cross_sections() {
  PotentialModel model{PotentialModel::Shape::gaussian, 0.9, 0.8};
  const double m = 1.2;

  double worst_total = 0.0;
  for (int i = 0; i < 9; ++i) {
    const double k = std::pow(10.0, -2.0 + 0.375 * i);  // log-spaced 1e-2 .. 1e1
    worst_total = std::max(
        worst_total, relative_gap(total_cross_section(model, 3, m, k),
                                  oracles::total_cross_section_closed_d3(model, m, k)));
  }

  std::mt19937 rng(17);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  double worst_diff = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::VectorXd k_rel(3), Omega(3);
    k_rel << u(rng), u(rng), u(rng);
    Omega << u(rng), u(rng), u(rng);
    if (k_rel.norm() < 0.05 || Omega.norm() < 0.05) continue;
    Omega /= Omega.norm();
    const double q = (k_rel.norm() * Omega - k_rel).norm();
    const double born =
        std::pow(m * fourier_u(model, 3, q) / (2.0 * M_PI * hbar * hbar), 2);
    worst_diff = std::max(
        worst_diff, relative_gap(diff_cross_section(model, 3, m, Omega, k_rel), born));
  }

  const bool pass = worst_total <= 1e-8 && worst_diff <= 1e-12;
  return {pass, "total sigma quadrature vs closed form " + fmt(worst_total) +
                    " (tol 1e-8), differential vs Born " + fmt(worst_diff) +
                    " (tol 1e-12)"};
}

// --- A7 positivity structure ---------------------------------------------------

std::pair<bool, std::string> a7_positivity() {
  BaseSetup s;
  RateTable table = RateTable::build(s.bath, s.model, s.lattice, s.particle.m_S);

  DensityMatrix diag = DensityMatrix::thermal_diagonal(s.lattice, 2.0, 1.0);
  const double diag_norm = correction_I(diag, table, s.particle).max_norm;

  RateTable flat = RateTable::uniform(s.lattice, 6, 0.37);
  DensityMatrix packet = DensityMatrix::gaussian_packet(s.lattice, {10}, 0.5);
  const double flat_norm = correction_I(packet, flat, s.particle).max_norm;

  // Narrow packet, sigma_k = k0/100, on a lattice fine enough to resolve it.
  BathSpec bath{2.0, 0.5, 0.02};
  PotentialModel model{PotentialModel::Shape::gaussian, 1.0, 0.3};
  Lattice fine(LatticeSpec{1, 2.0 * M_PI / 0.02, 240});
  ParticleSpec particle{1.0, {200}, 0.0};
  const double k0 = fine.wavevector({200}).norm();
  RateTable fine_table = RateTable::build(bath, model, fine, particle.m_S, 480);
  DensityMatrix narrow = DensityMatrix::gaussian_packet(fine, {200}, k0 / 100.0);
  const CorrectionI I = correction_I(narrow, fine_table, particle);
  const double ratio = I.max_norm / I.gain_norm;

  const bool pass = g_lindblad_eig_ratio_floor >= -1e-10 && diag_norm <= 1e-14 &&
                    flat_norm <= 1e-14 && ratio <= 1e-3;
  return {pass, "lindblad min/max eigenvalue floor " + fmt(g_lindblad_eig_ratio_floor) +
                    " (tol -1e-10), I(diagonal) " + fmt(diag_norm) + ", I(flat) " +
                    fmt(flat_norm) + " (tol 1e-14), packet |I|/|gain| " + fmt(ratio) +
                    " (tol 1e-3)"};
}

// --- A8 appendix estimate -------------------------------------------------------

std::pair<bool, std::string> a8_appendix() {
  BathSpec bath{0.5, 1.0, 1.0};
  PotentialModel model{PotentialModel::Shape::gaussian, 1.0, 0.3};
  Lattice lattice(LatticeSpec{1, 2.0 * M_PI / 0.25, 24});
  ParticleSpec particle{1.0, {20}, 0.0};

  const VelocityCorrection probe = pv_velocity_correction(bath, model, particle, lattice);
  const double k0 = lattice.wavevector(particle.k0_index).norm();
  bath.n = 1e-3 * k0 / probe.sigma0;
  const VelocityCorrection vc = pv_velocity_correction(bath, model, particle, lattice);

  // Quadrature vs the Dawson closed form across a u* panel.
  double worst_pv = 0.0;
  for (double x : {0.05, 0.5, 1.3, 2.9, 6.0}) {
    worst_pv = std::max(worst_pv,
                        relative_gap(pv_gaussian_pole(x), oracles::pv_pole_dawson(x)));
  }

  const bool pass = std::abs(vc.C) >= 0.01 && std::abs(vc.C) <= 100.0 &&
                    std::abs(vc.nsigma_over_k0 - 1e-3) <= 1e-12 && worst_pv <= 1e-6;
  return {pass, "measured C = " + fmt(vc.C) + " at n*sigma0/k0 = " +
                    fmt(vc.nsigma_over_k0) + " (band 0.01..100), pv quadrature vs Dawson " +
                    fmt(worst_pv) + " (tol 1e-6)"};
}

// --- A9 integrator orders ---------------------------------------------------------

std::pair<bool, std::string> a9_integrator_orders() {
  BathSpec bath{2.0, 1.0, 1.0};
  PotentialModel model{PotentialModel::Shape::gaussian, 1.0, 0.5};
  Lattice lattice(LatticeSpec{1, 2.0 * M_PI / 0.5, 6});
  ParticleSpec particle{1.0, {2}, 0.0};
  RateTable table = RateTable::build(bath, model, lattice, particle.m_S);

  // RK4: global error at fixed horizon against a dt/8 reference.
  const double T = 0.8, dt0 = 0.05;
  auto run_rk4 = [&](double dt) {
    DensityMatrix rho = DensityMatrix::gaussian_packet(lattice, {2}, 1.0);
    Stepper stepper(table, particle, Backend::redfield, dt);
    const long n = std::lround(T / dt);
    for (long i = 0; i < n; ++i) stepper.step(rho);
    return rho;
  };
  const DensityMatrix ref = run_rk4(dt0 / 8.0);
  const double err1 = (run_rk4(dt0).elements() - ref.elements()).cwiseAbs().maxCoeff();
  const double err2 =
      (run_rk4(dt0 / 2.0).elements() - ref.elements()).cwiseAbs().maxCoeff();
  const double rk4_ratio = err1 / err2;

  // Strang splitting on the spatial field against a dt/32 reference.
  const double Ts = 3.2, dts = 0.4;
  auto run_strang = [&](double dt) {
    DensityMatrix rho = DensityMatrix::gaussian_packet(lattice, {2}, 1.0);
    WignerField field = wigner_transform(rho);
    FieldStepper stepper(table, particle, dt);
    const long n = std::lround(Ts / dt);
    for (long i = 0; i < n; ++i) stepper.step(field);
    return field;
  };
  const WignerField sref = run_strang(dts / 32.0);
  const double serr1 = (run_strang(dts).values - sref.values).cwiseAbs().maxCoeff();
  const double serr2 =
      (run_strang(dts / 2.0).values - sref.values).cwiseAbs().maxCoeff();
  const double strang_ratio = serr1 / serr2;

  const bool pass = rk4_ratio >= 16.0 * 0.8 && rk4_ratio <= 16.0 * 1.2 &&
                    strang_ratio >= 4.0 * 0.8 && strang_ratio <= 4.0 * 1.2;
  return {pass, "RK4 halving ratio " + fmt(rk4_ratio) + " (16 +- 20%), Strang ratio " +
                    fmt(strang_ratio) + " (4 +- 20%)"};
}

// --- A10 Wigner consistency ---------------------------------------------------------

std::pair<bool, std::string> a10_wigner() {
  BaseSetup s;
  DensityMatrix packet = DensityMatrix::gaussian_packet(s.lattice, {8}, 0.6);
  const Eigen::VectorXd marginal = momentum_marginal(wigner_transform(packet));
  const double marginal_gap = (marginal - packet.populations()).cwiseAbs().maxCoeff();

  DensityMatrix sup = DensityMatrix::superposition(s.lattice, {6}, {2});
  const WignerField field = wigner_transform(sup);
  const double most_negative = field.values.minCoeff();

  const bool pass = marginal_gap <= 1e-10 && most_negative < 0.0;
  return {pass, "marginal vs diag(rho) " + fmt(marginal_gap) +
                    " (tol 1e-10), min Wigner value " + fmt(most_negative) +
                    " (must be negative)"};
}

}  // namespace

int main() {
  std::printf("qgas acceptance suite\n");
  run_criterion("A1 trace-hermiticity", a1_trace_hermiticity);
  run_criterion("A2 kernel-oracles", a2_kernel_oracles);
  run_criterion("A3 three-way-equivalence", a3_three_way);
  run_criterion("A4 thermalization-detailed-balance", a4_thermalization);
  run_criterion("A5 bath-correlation", a5_bath_correlation);
  run_criterion("A6 cross-sections", a6_cross_sections);
  run_criterion("A7 positivity-structure", a7_positivity);
  run_criterion("A8 appendix-estimate", a8_appendix);
  run_criterion("A9 integrator-orders", a9_integrator_orders);
  run_criterion("A10 wigner-consistency", a10_wigner);

  if (g_failures == 0) {
    std::printf("all criteria passed\n");
    return 0;
  }
  std::printf("%d criterion(s) failed\n", g_failures);
  return 1;
}
