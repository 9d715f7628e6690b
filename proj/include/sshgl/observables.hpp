#pragma once

#include <Eigen/Dense>
#include <vector>

#include "sshgl/state.hpp"

namespace sshgl {

// Time-sampled per-site occupation means. Deterministic engines leave the
// stderr matrix zero; the trajectory sampler fills it with
// sample-stddev / sqrt(n_traj).
struct OccupationSeries {
  TimeGrid grid;
  std::vector<double> sample_times;   // s+1 entries
  Eigen::MatrixXd per_site_mean;      // (s+1) x N
  Eigen::MatrixXd per_site_stderr;    // same shape
  std::vector<double> vacuum_prob;    // s+1 entries

  int n_samples() const { return static_cast<int>(sample_times.size()); }
  int n_sites() const { return static_cast<int>(per_site_mean.cols()); }
};

// Temporal mean over all s+1 samples of a series (normalized mean).
struct TimeAveragedProfile {
  Eigen::VectorXd per_site;
  Eigen::VectorXd per_site_stderr;  // zero unless trajectory-sampled
  TimeGrid window;
};

enum class EdgeSide { left, right };

// <n_i> = rho_ii over the lattice sites (real within 1e-10).
Eigen::VectorXd site_occupations(const DensityMatrix& rho);

TimeAveragedProfile time_average(const OccupationSeries& series);

// Summed occupation of the first (left) or last (right) a sites; a <= N/2.
double edge_occupation(const TimeAveragedProfile& profile, int a, EdgeSide side);

}  // namespace sshgl
