#pragma once

#include <Eigen/Dense>
#include <vector>

namespace sshgl {

// Pure state on the truncated Fock space: index 0 = vacuum, index j = one
// particle at site j (1-based sites).
struct FockState {
  Eigen::VectorXcd amplitudes;

  int n_sites() const { return static_cast<int>(amplitudes.size()) - 1; }

  static FockState vacuum(int n_sites);
  static FockState site(int n_sites, int site_index);
  // Embeds an N-component single-particle vector with zero vacuum amplitude.
  static FockState from_single_particle(const Eigen::VectorXcd& site_amplitudes);
};

struct DensityMatrix {
  Eigen::MatrixXcd entries;  // (N+1)x(N+1) Hermitian, trace 1

  int n_sites() const { return static_cast<int>(entries.rows()) - 1; }

  static DensityMatrix pure(const FockState& psi);
};

// Uniform observation grid: sample times t_j = j * t_end / sample_count.
// The integrator step is the largest value <= dt that divides the sample
// interval, so every sample time is hit exactly.
struct TimeGrid {
  double t_end = 25000.0;
  double dt = 0.05;
  int sample_count = 1000;  // s; the series carries s+1 samples incl. t = 0

  void validate() const;
  std::vector<double> sample_times() const;
  int steps_per_sample() const;
  double effective_dt() const;

  bool operator==(const TimeGrid&) const = default;
};

// Two-point correlators C_ij = <c_i^dag c_j> on the full Fock space (N x N,
// 1-based sites mapped to 0-based rows).
struct CovarianceMatrix {
  Eigen::MatrixXcd entries;

  static CovarianceMatrix from_state(const FockState& psi);
};

}  // namespace sshgl
