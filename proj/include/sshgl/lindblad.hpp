#pragma once

#include <cstdint>
#include <functional>

#include "sshgl/model.hpp"
#include "sshgl/observables.hpp"
#include "sshgl/state.hpp"

namespace sshgl {

// Invoked at every sample time with the current integrator state (the
// density matrix, or the covariance matrix for the covariance engine).
using SampleObserver = std::function<void(double t, const Eigen::MatrixXcd& state)>;

// Closed-system evolution (gamma = 0) by expansion in the SSH eigenbasis:
// one dense diagonalization, then O(N^2) per sample. psi0 must carry zero
// vacuum amplitude.
OccupationSeries evolve_closed_spectral(const FockState& psi0, const ModelParams& params,
                                        const TimeGrid& grid);

// Right-hand side of the truncated master equation,
//   -i[H, rho] + sum_mu (L_mu rho L_mu^dag - 1/2 {L_mu^dag L_mu, rho}),
// exploiting the tridiagonal Hamiltonian and rank-one jumps. Output is
// traceless and Hermitian.
DensityMatrix lindblad_rhs(const DensityMatrix& rho, const TruncatedLindbladModel& model);

// Deterministic fixed-step RK4 integration of the master equation. Aborts
// with a step-size diagnostic if the trace drifts beyond 1e-6 or a diagonal
// entry turns negative beyond 1e-6.
OccupationSeries evolve_master_rk4(const DensityMatrix& rho0, const TruncatedLindbladModel& model,
                                   const TimeGrid& grid, const SampleObserver& observer = {});

struct TrajectoryOptions {
  int n_traj = 1;
  std::uint64_t seed = 42;
  int n_threads = 0;    // 0 -> default_thread_count()
  int block_size = 32;  // trajectories per reduction block (fixed, so the
                        // summation order never depends on the worker count)
};

struct TrajectoryRun {
  OccupationSeries series;          // ensemble means with standard errors
  TimeAveragedProfile time_average; // stderr from per-trajectory time averages
  std::int64_t total_jumps = 0;
  // Pre-normalization |psi|^2 at the final sample, min/max over the
  // ensemble. With gamma = 0 the distance from 1 is the integrator's norm
  // drift.
  double min_final_norm2 = 1.0;
  double max_final_norm2 = 1.0;
};

// Monte-Carlo wave-function sampling (waiting-time formulation): propagate
// d psi/dt = -i H_eff psi until |psi|^2 crosses a uniform threshold, locate
// the crossing by bisection, apply the jump channel drawn proportionally to
// |L_mu psi|^2, and repeat. Identical (seed, n_traj, grid) inputs give
// bit-identical results for any worker count.
TrajectoryRun sample_trajectories(const FockState& psi0, const TruncatedLindbladModel& model,
                                  const TimeGrid& grid, const TrajectoryOptions& options);

struct CovarianceOptions {
  bool include_loss = true;
  bool include_gain = true;  // false drops both gamma*P_N and its anticommutator
};

// Full-Fock-space oracle for the quadratic Lindbladian: integrates
//   dC/dt = i(hC - Ch) - (g_l/2){P_loss, C} - (g_g/2){P_gain, C} + g_g P_gain
// with fixed-step RK4 and reports diag(C) as the occupation series. The
// vacuum_prob column is zero: this engine is not a truncated-model engine.
OccupationSeries covariance_evolve(const CovarianceMatrix& c0, const ModelParams& params,
                                   const TimeGrid& grid, const CovarianceOptions& options = {},
                                   const SampleObserver& observer = {});

// Raw variant with an explicit single-particle Hamiltonian and channel
// placement (1-based sites; a rate of zero disables the channel). Supports
// the single-site closed forms the oracle is checked against.
OccupationSeries covariance_evolve_raw(const Eigen::MatrixXd& h_single_particle,
                                       const CovarianceMatrix& c0, const TimeGrid& grid,
                                       int loss_site, double gamma_loss, int gain_site,
                                       double gamma_gain, const SampleObserver& observer = {});

}  // namespace sshgl
