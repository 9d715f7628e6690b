#pragma once

#include <Eigen/Dense>
#include <vector>

namespace sshgl {

// Physical parameters of one simulation instance. Site indices are 1-based;
// hbar = 1 and time is measured in units of 1/hopping.
struct ModelParams {
  int n_sites = 200;          // N, even
  double hopping = 1.0;       // t > 0
  double dimerization = 0.3;  // Delta in [0, 1)
  double theta = 0.0;         // Theta in [0, pi]
  double gamma = 0.0;         // gain/loss rate >= 0

  // Throws InvalidParameter naming the offending field.
  void validate() const;

  bool operator==(const ModelParams&) const = default;
};

// Alternating hopping amplitudes t_- (intracell, bond 2n-1 <-> 2n) and
// t_+ (intercell, bond 2n <-> 2n+1).
struct HoppingPair {
  double t_minus;
  double t_plus;
};

enum class HamiltonianFlavor { hermitian_ssh, pt_complex_potential };

struct HamiltonianMatrix {
  Eigen::MatrixXcd entries;
  HamiltonianFlavor flavor;

  // Real view of the Hermitian SSH matrix; logic error on the PT flavor.
  Eigen::MatrixXd real_entries() const;
};

// Single-particle problem truncated to {vacuum} + {one particle}:
// an (N+1)-dimensional Fock space with index 0 = vacuum, index j = site j.
// The gain jump refills from the vacuum only (|gain_site><vac|), which keeps
// the generator completely positive and trace preserving on this space.
struct TruncatedLindbladModel {
  ModelParams params;
  int loss_site = 1;  // 1-based lattice site drained to vacuum
  int gain_site = 0;  // 1-based lattice site refilled from vacuum
  double gamma_loss = 0.0;
  double gamma_gain = 0.0;

  std::vector<double> bonds;  // N-1 hopping amplitudes t-, t+, t-, ...
  Eigen::MatrixXd h_fock;     // (N+1)x(N+1) real symmetric
  Eigen::MatrixXcd h_eff;     // h_fock - (i/2) sum_mu L_mu^dag L_mu
  Eigen::MatrixXd jump_loss;  // sqrt(gamma_loss) |vac><loss_site|
  Eigen::MatrixXd jump_gain;  // sqrt(gamma_gain) |gain_site><vac|

  int dim() const { return params.n_sites + 1; }

  // Same model with the gain channel removed (used by the covariance oracle
  // comparison, where truncation is exact when no refill occurs).
  TruncatedLindbladModel without_gain() const;
};

HoppingPair hopping_amplitudes(const ModelParams& params);

// Bond amplitudes a_1..a_{N-1}, where a_b couples sites b and b+1.
std::vector<double> bond_amplitudes(const ModelParams& params);

// Open-boundary N x N SSH chain, Eq.-of-motion convention: real symmetric
// tridiagonal with zero diagonal and off-diagonals t-, t+, t-, ...
HamiltonianMatrix build_ssh_hamiltonian(const ModelParams& params);

// SSH chain plus the complex PT-symmetric potential: -i*gamma at site 1,
// +i*gamma at site N.
HamiltonianMatrix build_pt_hamiltonian(const ModelParams& params);

TruncatedLindbladModel build_truncated_lindblad(const ModelParams& params);

// Variant with explicit channel placement (loss_site drained, gain_site
// refilled); used for the reflection-covariance checks.
TruncatedLindbladModel build_truncated_lindblad(const ModelParams& params, int loss_site,
                                                int gain_site);

}  // namespace sshgl
