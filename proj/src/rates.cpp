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

#include "rates.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>

#include <Eigen/QR>

#include "csvio.hpp"
#include "error.hpp"
#include "quadrature.hpp"

namespace qgas {

double onshell_bath_momentum(const BathSpec& bath, double m_S, const Eigen::VectorXd& q,
                             const Eigen::VectorXd& k_S) {
  const double qn = q.norm();
  if (!(qn > 0.0)) throw std::domain_error("onshell_bath_momentum: q must be nonzero");
  const double omega =
      (kinetic_energy(k_S + q, m_S) - kinetic_energy(k_S, m_S)) / hbar;
  return bath.m_B * omega / (hbar * qn) + 0.5 * qn;
}

double rate_W_analytic(const BathSpec& bath, const PotentialModel& model,
                       const Lattice& lattice, double m_S, const Eigen::VectorXd& q,
                       const Eigen::VectorXd& k_S) {
  const double qn = q.norm();
  if (!(qn > 0.0)) throw std::domain_error("rate_W_analytic: trivial kick q = 0");
  const double u_star = onshell_bath_momentum(bath, m_S, q, k_S);
  const double beta = bath.beta();
  const double G = bath.m_B / (hbar * hbar * qn) *
                   std::sqrt(beta * hbar * hbar / (2.0 * M_PI * bath.m_B)) *
                   std::exp(-beta * hbar * hbar * u_star * u_star / (2.0 * bath.m_B));
  const double u = fourier_u(model, lattice.dim(), qn);
  return 2.0 * M_PI / hbar * bath.n / lattice.volume() * u * u * G;
}

double rate_W_lattice_oracle(const BathSpec& bath, const PotentialModel& model,
                             const Lattice& lattice, double m_S,
                             const Eigen::VectorXd& q, const Eigen::VectorXd& k_S,
                             double eps) {
  const double qn = q.norm();
  if (!(qn > 0.0)) throw std::domain_error("rate_W_lattice_oracle: trivial kick q = 0");
  const double N_scatterers = bath.n * lattice.volume();
  double sum = 0.0;
  for (std::size_t i = 0; i < lattice.size(); ++i) {
    const Eigen::VectorXd k_B = lattice.wavevector_at(i);
    sum += binary_rate(model, lattice, q, k_S, k_B, m_S, bath.m_B, eps) *
           mb_weight(bath, lattice, k_B);
  }
  return N_scatterers * sum;
}

double rate_W_from_cross_section(const BathSpec& bath, const PotentialModel& model,
                                 const Lattice& lattice, double m_S,
                                 const Eigen::VectorXd& q, const Eigen::VectorXd& k_S,
                                 int gh_order) {
  const int d = lattice.dim();
  const double qn = q.norm();
  if (!(qn > 0.0))
    throw std::domain_error("rate_W_from_cross_section: trivial kick q = 0");
  const double m_B = bath.m_B;
  const double M = m_S + m_B;
  const double m = m_S * m_B / M;
  const double k_th = thermal_wavenumber(bath);
  const Eigen::VectorXd q_hat = q / qn;

  // Energy conservation fixes the bath momentum along q; the delta resolves
  // with Jacobian M*k/(m_S*q) on the shell.
  const double k_par = (m_B / m_S) * k_S.dot(q_hat) + (M / m_S) * 0.5 * qn;

  auto shell_integrand = [&](const Eigen::VectorXd& k_B) {
    const auto kin = BinaryKinematics::from(k_S, k_B, m_S, m_B);
    const double k = kin.k_rel.norm();
    if (!(k > 0.0)) return 0.0;
    const Eigen::VectorXd out = kin.k_rel + q;  // same norm as k_rel on the shell
    const Eigen::VectorXd Omega = out / out.norm();
    const double v_rel = hbar * k / m;
    const double dsdo = diff_cross_section(model, d, m, Omega, kin.k_rel);
    return v_rel * dsdo * (M * k) / (m_S * qn) / std::pow(k, d - 1);
  };

  const double prefactor = bath.n * std::pow(2.0 * M_PI, d) / lattice.volume() *
                           std::pow(k_th, -d) *
                           std::exp(-M_PI * k_par * k_par / (k_th * k_th));
  if (d == 1) return prefactor * shell_integrand(k_par * q_hat);

  // Transverse bath directions from the Householder complement of q_hat.
  Eigen::MatrixXd Q = Eigen::HouseholderQR<Eigen::MatrixXd>(q_hat).householderQ();
  if (Q.col(0).dot(q_hat) < 0.0) Q = -Q;

  const GaussHermite gh(gh_order);
  const double scale = k_th / std::sqrt(M_PI);
  double integral = 0.0;
  if (d == 2) {
    for (int i = 0; i < gh_order; ++i) {
      const Eigen::VectorXd k_B = k_par * q_hat + scale * gh.nodes[i] * Q.col(1);
      integral += gh.weights[i] * shell_integrand(k_B);
    }
    integral *= scale;
  } else if (d == 3) {
    for (int i = 0; i < gh_order; ++i) {
      for (int j = 0; j < gh_order; ++j) {
        const Eigen::VectorXd k_B = k_par * q_hat + scale * gh.nodes[i] * Q.col(1) +
                                    scale * gh.nodes[j] * Q.col(2);
        integral += gh.weights[i] * gh.weights[j] * shell_integrand(k_B);
      }
    }
    integral *= scale * scale;
  } else {
    throw std::invalid_argument("rate_W_from_cross_section: implemented for d <= 3");
  }
  return prefactor * integral;
}

double pv_Y(const BathSpec& bath, const PotentialModel& model, const Lattice& lattice,
            double m_S, const Eigen::VectorXd& q, const Eigen::VectorXd& k_S) {
  const double qn = q.norm();
  if (!(qn > 0.0)) throw std::domain_error("pv_Y: trivial kick q = 0");
  const double u_star = onshell_bath_momentum(bath, m_S, q, k_S);
  const double beta = bath.beta();
  const double k_th = thermal_wavenumber(bath);
  const double x = std::sqrt(beta * hbar * hbar / (2.0 * bath.m_B)) * u_star;
  // Pv over the bath reduces to the q-axis component; transverse Gaussians
  // integrate to one against the normalized distribution.
  const double pole_integral = pv_gaussian_pole(x);
  const double P = -(bath.m_B / (hbar * hbar * qn)) / k_th * pole_integral;
  const double u = fourier_u(model, lattice.dim(), qn);
  return bath.n / (hbar * lattice.volume()) * u * u * P;
}

// ---------------------------------------------------------------------------
// RateTable
// ---------------------------------------------------------------------------

int default_q_cutoff(const Lattice& lattice, const PotentialModel& model) {
  const double raw = 4.0 / (lattice.spacing() * model.R);
  int cutoff = static_cast<int>(std::ceil(raw));
  cutoff = std::max(cutoff, 1);
  return std::min(cutoff, 2 * lattice.n_max());
}

RateTable::RateTable(const Lattice& lattice, int q_cutoff)
    : lattice_(lattice), q_cutoff_(q_cutoff) {
  if (q_cutoff_ < 1) throw ValidationError("rate table: q_cutoff must be >= 1");
}

int RateTable::channel_slot(const IndexVec& q_index) const {
  if (static_cast<int>(q_index.size()) != lattice_.dim()) return -1;
  const int per_axis = 2 * q_cutoff_ + 1;
  std::size_t slot = 0;
  for (int c : q_index) {
    if (c < -q_cutoff_ || c > q_cutoff_) return -1;
    slot = slot * per_axis + static_cast<std::size_t>(c + q_cutoff_);
  }
  return slot_of_q_[slot];
}

bool RateTable::has_channel(const IndexVec& q_index) const {
  return channel_slot(q_index) >= 0;
}

double RateTable::rate(const IndexVec& q_index, const IndexVec& k_index) const {
  const int slot = channel_slot(q_index);
  if (slot < 0) throw std::out_of_range("rate table: kick outside the stored cutoff");
  return channels_[slot].rate[lattice_.offset(k_index)];
}

void RateTable::finalize() {
  const std::size_t n = lattice_.size();
  total_rate_.assign(n, 0.0);
  edge_leak_.assign(n, 0.0);
  for (auto& ch : channels_) {
    ch.sqrt_rate.resize(ch.rate.size());
    std::transform(ch.rate.begin(), ch.rate.end(), ch.sqrt_rate.begin(),
                   [](double w) { return std::sqrt(w); });
    ch.sources.clear();
    for (std::size_t k = 0; k < n; ++k) {
      if (lattice_.kick_offset(k, ch.q_index) >= 0) {
        ch.sources.push_back(static_cast<std::int32_t>(k));
        total_rate_[k] += ch.rate[k];
      } else {
        edge_leak_[k] += ch.rate[k];
      }
    }
  }
  max_total_rate_ = 0.0;
  for (double g : total_rate_) max_total_rate_ = std::max(max_total_rate_, g);
}

double RateTable::max_edge_leak_fraction() const {
  double worst = 0.0;
  for (std::size_t k = 0; k < edge_leak_.size(); ++k) {
    const double denom = edge_leak_[k] + total_rate_[k];
    if (denom > 0.0) worst = std::max(worst, edge_leak_[k] / denom);
  }
  return worst;
}

namespace {

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

void enumerate_q_box(int d, int cutoff, const std::function<void(const IndexVec&)>& fn) {
  IndexVec q(d, -cutoff);
  while (true) {
    bool all_zero = true;
    for (int c : q)
      if (c != 0) { all_zero = false; break; }
    if (!all_zero) fn(q);
    int axis = d - 1;
    while (axis >= 0) {
      if (++q[axis] <= cutoff) break;
      q[axis] = -cutoff;
      --axis;
    }
    if (axis < 0) break;
  }
}

// Dense slot of a kick inside the cutoff box.
std::size_t q_box_slot(const IndexVec& q_index, int q_cutoff) {
  const int per_axis = 2 * q_cutoff + 1;
  std::size_t slot = 0;
  for (int c : q_index) slot = slot * per_axis + static_cast<std::size_t>(c + q_cutoff);
  return slot;
}

QChannel bare_channel(const Lattice& lattice, const IndexVec& q_index) {
  QChannel ch;
  ch.q_index = q_index;
  ch.q = Eigen::VectorXd(lattice.dim());
  for (int axis = 0; axis < lattice.dim(); ++axis)
    ch.q[axis] = lattice.spacing() * q_index[axis];
  std::int64_t shift = 0;
  std::size_t stride = 1;
  for (int axis = lattice.dim() - 1; axis >= 0; --axis) {
    shift += static_cast<std::int64_t>(q_index[axis]) * static_cast<std::int64_t>(stride);
    stride *= static_cast<std::size_t>(lattice.per_axis());
  }
  ch.flat_shift = shift;
  return ch;
}

std::string table_meta(const BathSpec& bath, const PotentialModel& model, double m_S) {
  std::ostringstream meta;
  meta << "shape=gaussian u0=" << format_g17(model.u0) << " R=" << format_g17(model.R)
       << " T=" << format_g17(bath.T) << " m_B=" << format_g17(bath.m_B)
       << " n=" << format_g17(bath.n) << " m_S=" << format_g17(m_S);
  return meta.str();
}

}  // namespace

std::string table_fingerprint(const BathSpec& bath, const PotentialModel& model,
                              const Lattice& lattice, double m_S, int q_cutoff) {
  if (q_cutoff <= 0) q_cutoff = default_q_cutoff(lattice, model);
  q_cutoff = std::min(q_cutoff, 2 * lattice.n_max());
  std::ostringstream fp;
  fp << std::hex
     << fnv1a(table_meta(bath, model, m_S) + " d=" + std::to_string(lattice.dim()) +
              " L=" + format_g17(lattice.box_side()) +
              " n_max=" + std::to_string(lattice.n_max()) +
              " q_cutoff=" + std::to_string(q_cutoff));
  return fp.str();
}

RateTable RateTable::build(const BathSpec& bath, const PotentialModel& model,
                           const Lattice& lattice, double m_S, int q_cutoff) {
  validate(bath);
  validate(model);
  if (!(m_S > 0.0)) throw ValidationError("rate table: m_S must be > 0");
  if (q_cutoff <= 0) q_cutoff = default_q_cutoff(lattice, model);
  q_cutoff = std::min(q_cutoff, 2 * lattice.n_max());

  RateTable table(lattice, q_cutoff);
  const int d = lattice.dim();
  table.slot_of_q_.assign(
      static_cast<std::size_t>(std::pow(2 * q_cutoff + 1, d)), -1);

  enumerate_q_box(d, q_cutoff, [&](const IndexVec& q_index) {
    QChannel ch = bare_channel(lattice, q_index);
    ch.rate.resize(lattice.size());
    for (std::size_t k = 0; k < lattice.size(); ++k)
      ch.rate[k] = rate_W_analytic(bath, model, lattice, m_S, ch.q,
                                   lattice.wavevector_at(k));
    table.slot_of_q_[q_box_slot(q_index, q_cutoff)] =
        static_cast<int>(table.channels_.size());
    table.channels_.push_back(std::move(ch));
  });
  table.finalize();

  // Tail neglected beyond the cutoff, bounded with exp(-beta u*^2 ...) <= 1:
  // (2 pi/hbar) n u0^2 R^(2d) (m_B/(hbar^2 Q k_th)) d (sqrt(pi)/R)^d erfc(Q R).
  const double Q = q_cutoff * lattice.spacing();
  const double k_th = thermal_wavenumber(bath);
  const double tail = 2.0 * M_PI / hbar * bath.n * model.u0 * model.u0 *
                      std::pow(model.R, 2 * d) * bath.m_B /
                      (hbar * hbar * Q * k_th) * d *
                      std::pow(std::sqrt(M_PI) / model.R, d) * std::erfc(Q * model.R);
  table.tail_fraction_ =
      table.max_total_rate_ > 0.0 ? tail / table.max_total_rate_ : 0.0;

  table.header_meta_ = table_meta(bath, model, m_S);
  table.fingerprint_ = table_fingerprint(bath, model, lattice, m_S, q_cutoff);
  return table;
}

RateTable RateTable::uniform(const Lattice& lattice, int q_cutoff, double rate) {
  if (q_cutoff <= 0) throw ValidationError("rate table: q_cutoff must be >= 1");
  q_cutoff = std::min(q_cutoff, 2 * lattice.n_max());
  RateTable table(lattice, q_cutoff);
  const int d = lattice.dim();
  table.slot_of_q_.assign(
      static_cast<std::size_t>(std::pow(2 * q_cutoff + 1, d)), -1);
  enumerate_q_box(d, q_cutoff, [&](const IndexVec& q_index) {
    QChannel ch = bare_channel(lattice, q_index);
    ch.rate.assign(lattice.size(), rate);
    table.slot_of_q_[q_box_slot(q_index, q_cutoff)] =
        static_cast<int>(table.channels_.size());
    table.channels_.push_back(std::move(ch));
  });
  table.finalize();
  return table;
}

void RateTable::save_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw IoError("rate table: cannot open '" + path + "' for writing");
  out << "# qgas rate table v1\n";
  out << "# fingerprint " << fingerprint_ << "\n";
  out << "# params " << header_meta_ << "\n";
  out << "d,L,n_max,q_cutoff\n";
  out << lattice_.dim() << ',' << format_g17(lattice_.box_side()) << ','
      << lattice_.n_max() << ',' << q_cutoff_ << "\n";
  const int d = lattice_.dim();
  for (int axis = 0; axis < d; ++axis) out << "q_" << axis << ',';
  for (int axis = 0; axis < d; ++axis) out << "k_" << axis << ',';
  out << "rate\n";
  for (const auto& ch : channels_) {
    for (std::size_t k = 0; k < ch.rate.size(); ++k) {
      const IndexVec k_index = lattice_.index_of(k);
      for (int c : ch.q_index) out << c << ',';
      for (int c : k_index) out << c << ',';
      out << format_g17(ch.rate[k]) << "\n";
    }
  }
  if (!out) throw IoError("rate table: write to '" + path + "' failed");
}

RateTable RateTable::load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("rate table: cannot open '" + path + "'");
  std::string line, fingerprint, meta;
  // Comment preamble.
  while (std::getline(in, line)) {
    if (line.rfind("# fingerprint ", 0) == 0) fingerprint = line.substr(14);
    else if (line.rfind("# params ", 0) == 0) meta = line.substr(9);
    else if (!line.empty() && line[0] != '#') break;
  }
  if (line != "d,L,n_max,q_cutoff")
    throw IoError("rate table: malformed header in '" + path + "'");
  if (!std::getline(in, line)) throw IoError("rate table: truncated file '" + path + "'");
  LatticeSpec spec;
  int q_cutoff = 0;
  {
    std::istringstream ss(line);
    char comma;
    if (!(ss >> spec.d >> comma >> spec.L >> comma >> spec.n_max >> comma >> q_cutoff))
      throw IoError("rate table: malformed dimensions in '" + path + "'");
  }
  Lattice lattice(spec);
  RateTable table(lattice, q_cutoff);
  const int per_axis = 2 * q_cutoff + 1;
  table.slot_of_q_.assign(
      static_cast<std::size_t>(std::pow(per_axis, spec.d)), -1);
  table.fingerprint_ = fingerprint;
  table.header_meta_ = meta;

  if (!std::getline(in, line))
    throw IoError("rate table: missing column header in '" + path + "'");
  IndexVec q_index(spec.d), k_index(spec.d);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    char comma;
    for (int axis = 0; axis < spec.d; ++axis) ss >> q_index[axis] >> comma;
    for (int axis = 0; axis < spec.d; ++axis) ss >> k_index[axis] >> comma;
    double w = 0.0;
    if (!(ss >> w)) throw IoError("rate table: malformed row in '" + path + "'");
    for (int c : q_index)
      if (c < -q_cutoff || c > q_cutoff)
        throw IoError("rate table: kick outside declared cutoff in '" + path + "'");
    int slot = table.channel_slot(q_index);
    if (slot < 0) {
      QChannel ch = bare_channel(lattice, q_index);
      ch.rate.assign(lattice.size(), 0.0);
      slot = static_cast<int>(table.channels_.size());
      table.slot_of_q_[q_box_slot(q_index, q_cutoff)] = slot;
      table.channels_.push_back(std::move(ch));
    }
    table.channels_[slot].rate[lattice.offset(k_index)] = w;
  }
  table.finalize();
  return table;
}

VelocityCorrection pv_velocity_correction(const BathSpec& bath, const PotentialModel& model,
                                          const ParticleSpec& particle,
                                          const Lattice& lattice, int q_cutoff) {
  validate(particle, lattice);
  const Eigen::VectorXd k0 = lattice.wavevector(particle.k0_index);
  const double k0n = k0.norm();
  if (!(k0n > 0.0))
    throw std::domain_error("pv_velocity_correction: k0 must be nonzero");
  if (q_cutoff <= 0) q_cutoff = default_q_cutoff(lattice, model);
  q_cutoff = std::min(q_cutoff, 2 * lattice.n_max());

  VelocityCorrection out;
  const int d = lattice.dim();
  const double m_B = bath.m_B;
  const double m = particle.m_S * m_B / (particle.m_S + m_B);

  if (model.u0 == 0.0) return out;  // free theory: every term vanishes

  // Bath-averaged total cross section at the relative momentum.
  double sigma0 = 0.0;
  for (std::size_t i = 0; i < lattice.size(); ++i) {
    const Eigen::VectorXd k_B = lattice.wavevector_at(i);
    const double w = mb_weight(bath, lattice, k_B);
    const Eigen::VectorXd k_rel =
        (m_B * k0 - particle.m_S * k_B) / (particle.m_S + m_B);
    const double k = k_rel.norm();
    if (k > 0.0 && w > 1e-300) sigma0 += w * total_cross_section(model, d, m, k);
  }
  out.sigma0 = sigma0;
  out.nsigma_over_k0 = bath.n * sigma0 / k0n;

  auto Pi_at = [&](const Eigen::VectorXd& k) {
    double sum = 0.0;
    enumerate_q_box(d, q_cutoff, [&](const IndexVec& q_index) {
      Eigen::VectorXd q(d);
      for (int axis = 0; axis < d; ++axis) q[axis] = lattice.spacing() * q_index[axis];
      sum += pv_Y(bath, model, lattice, particle.m_S, q, k);
    });
    return -2.0 * sum;
  };

  out.Pi = Pi_at(k0);
  out.C_from_Pi = -out.Pi * particle.m_S / (bath.n * hbar * sigma0 * k0n);

  // Velocity shift from the momentum derivative of Pi along k0.
  const Eigen::VectorXd e_par = k0 / k0n;
  const double h = lattice.spacing();
  const double dPi = (Pi_at(k0 + h * e_par) - Pi_at(k0 - h * e_par)) / (2.0 * h);
  out.frac_shift = std::abs(dPi) * particle.m_S / (hbar * k0n);
  out.C_from_slope = -dPi * particle.m_S / (hbar * bath.n * sigma0);
  out.C = std::abs(out.C_from_Pi) >= std::abs(out.C_from_slope) ? out.C_from_Pi
                                                                : out.C_from_slope;
  return out;
}

}  // namespace qgas
