#include "sshgl/model.hpp"

#include <cmath>
#include <complex>
#include <string>

#include "sshgl/errors.hpp"

namespace sshgl {

using std::complex;

void ModelParams::validate() const {
  if (n_sites < 2 || n_sites % 2 != 0) {
    throw InvalidParameter("n_sites", "must be an even integer >= 2, got " +
                                          std::to_string(n_sites));
  }
  if (!(hopping > 0.0) || !std::isfinite(hopping)) {
    throw InvalidParameter("hopping", "must be a finite real > 0, got " +
                                          std::to_string(hopping));
  }
  if (!(dimerization >= 0.0 && dimerization < 1.0)) {
    throw InvalidParameter("dimerization", "must lie in [0, 1), got " +
                                               std::to_string(dimerization));
  }
  if (!(theta >= 0.0 && theta <= std::acos(-1.0)) || !std::isfinite(theta)) {
    throw InvalidParameter("theta", "must lie in [0, pi] radians, got " +
                                        std::to_string(theta));
  }
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
    throw InvalidParameter("gamma", "must be a finite real >= 0, got " +
                                        std::to_string(gamma));
  }
}

HoppingPair hopping_amplitudes(const ModelParams& params) {
  params.validate();
  const double d = params.dimerization * std::cos(params.theta);
  return {params.hopping * (1.0 - d), params.hopping * (1.0 + d)};
}

std::vector<double> bond_amplitudes(const ModelParams& params) {
  const HoppingPair hp = hopping_amplitudes(params);
  std::vector<double> bonds(static_cast<std::size_t>(params.n_sites - 1));
  for (int b = 1; b < params.n_sites; ++b) {
    // bond b couples sites b and b+1; odd bonds are intracell (t-)
    bonds[static_cast<std::size_t>(b - 1)] = (b % 2 == 1) ? hp.t_minus : hp.t_plus;
  }
  return bonds;
}

Eigen::MatrixXd HamiltonianMatrix::real_entries() const {
  if (flavor != HamiltonianFlavor::hermitian_ssh) {
    throw std::logic_error("real_entries() requires the hermitian_ssh flavor");
  }
  return entries.real();
}

HamiltonianMatrix build_ssh_hamiltonian(const ModelParams& params) {
  const auto bonds = bond_amplitudes(params);
  const int n = params.n_sites;
  HamiltonianMatrix h{Eigen::MatrixXcd::Zero(n, n), HamiltonianFlavor::hermitian_ssh};
  for (int b = 0; b + 1 < n; ++b) {
    h.entries(b, b + 1) = bonds[static_cast<std::size_t>(b)];
    h.entries(b + 1, b) = bonds[static_cast<std::size_t>(b)];
  }
  return h;
}

HamiltonianMatrix build_pt_hamiltonian(const ModelParams& params) {
  HamiltonianMatrix h = build_ssh_hamiltonian(params);
  h.flavor = HamiltonianFlavor::pt_complex_potential;
  const complex<double> iota(0.0, 1.0);
  h.entries(0, 0) -= iota * params.gamma;
  h.entries(params.n_sites - 1, params.n_sites - 1) += iota * params.gamma;
  return h;
}

namespace {

TruncatedLindbladModel build_truncated(const ModelParams& params, int loss_site, int gain_site,
                                       double gamma_loss, double gamma_gain) {
  params.validate();
  const int n = params.n_sites;
  if (loss_site < 1 || loss_site > n) {
    throw InvalidParameter("loss_site", "must lie in [1, n_sites]");
  }
  if (gain_site < 1 || gain_site > n) {
    throw InvalidParameter("gain_site", "must lie in [1, n_sites]");
  }

  TruncatedLindbladModel m;
  m.params = params;
  m.loss_site = loss_site;
  m.gain_site = gain_site;
  m.gamma_loss = gamma_loss;
  m.gamma_gain = gamma_gain;
  m.bonds = bond_amplitudes(params);

  const int dim = n + 1;
  m.h_fock = Eigen::MatrixXd::Zero(dim, dim);
  for (int b = 0; b + 1 < n; ++b) {
    // Fock index j holds site j; row/column 0 (vacuum) stays zero
    m.h_fock(b + 1, b + 2) = m.bonds[static_cast<std::size_t>(b)];
    m.h_fock(b + 2, b + 1) = m.bonds[static_cast<std::size_t>(b)];
  }

  m.jump_loss = Eigen::MatrixXd::Zero(dim, dim);
  m.jump_gain = Eigen::MatrixXd::Zero(dim, dim);
  if (gamma_loss > 0.0) m.jump_loss(0, loss_site) = std::sqrt(gamma_loss);
  if (gamma_gain > 0.0) m.jump_gain(gain_site, 0) = std::sqrt(gamma_gain);

  // L-^dag L- = gamma_loss |loss><loss|, L+^dag L+ = gamma_gain |vac><vac|
  m.h_eff = m.h_fock.cast<complex<double>>();
  const complex<double> half_i(0.0, 0.5);
  m.h_eff(loss_site, loss_site) -= half_i * gamma_loss;
  m.h_eff(0, 0) -= half_i * gamma_gain;
  return m;
}

}  // namespace

TruncatedLindbladModel build_truncated_lindblad(const ModelParams& params) {
  return build_truncated(params, 1, params.n_sites, params.gamma, params.gamma);
}

TruncatedLindbladModel build_truncated_lindblad(const ModelParams& params, int loss_site,
                                                int gain_site) {
  return build_truncated(params, loss_site, gain_site, params.gamma, params.gamma);
}

TruncatedLindbladModel TruncatedLindbladModel::without_gain() const {
  return build_truncated(params, loss_site, gain_site, gamma_loss, 0.0);
}

}  // namespace sshgl
