#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "sshgl/lindblad.hpp"
#include "sshgl/model.hpp"
#include "sshgl/observables.hpp"
#include "sshgl/state.hpp"

namespace sshgl {

enum class InitialStateKind { edge_right, edge_left, bulk, site, vacuum };

// Initial states are eigenstates of the Hermitian chain at theta_ref (the
// topologically nontrivial reference), a single-site basis state, or the
// vacuum. bulk_index/site_index: 0-based position in the ascending spectrum /
// 1-based lattice site.
struct InitialStateSpec {
  InitialStateKind kind = InitialStateKind::edge_right;
  std::optional<int> bulk_index;
  std::optional<int> site_index;
  double theta_ref = 0.31415926535897932;  // 0.1*pi
};

enum class Engine { spectral, trajectories, master };

struct SnapshotOptions {
  Engine engine = Engine::trajectories;
  int n_traj = 1000;
  std::uint64_t seed = 42;
  int n_threads = 0;
};

struct SnapshotResult {
  Eigen::VectorXd initial_profile;  // |psi0_i|^2 per site
  OccupationSeries series;
  TimeAveragedProfile profile;  // stderr filled by the trajectory engine
};

struct SweepOptions {
  Engine engine = Engine::spectral;
  std::vector<int> windows = {1, 3, 5, 20};
  int n_traj = 1000;
  std::uint64_t seed = 42;
  int n_threads = 0;
};

struct SweepResult {
  std::vector<double> thetas;
  std::vector<int> windows;            // ascending
  Eigen::MatrixXd edge_occ;            // thetas x windows, right-edge sums
  std::vector<double> runtime_s;       // per theta point
  std::optional<double> kink_estimate; // theta of maximal second difference
};

// Edge states are the sum/difference of the two midgap eigenvectors at
// theta_ref, sign-oriented to localize right/left. The bulk state without an
// explicit index is a seed-42 uniform draw over the non-midgap indices.
FockState prepare_initial_state(const InitialStateSpec& spec, const ModelParams& params);

SnapshotResult run_snapshot_experiment(const InitialStateSpec& spec, const ModelParams& params,
                                       const TimeGrid& grid, const SnapshotOptions& options);

// Evolves one initial state (prepared once at theta_ref) for every theta in
// the grid and records the right-edge occupation for each window. The kink
// estimate comes from the largest window's curve.
SweepResult run_theta_sweep(const ModelParams& params_template,
                            const std::vector<double>& theta_grid, const InitialStateSpec& spec,
                            const TimeGrid& grid, const SweepOptions& options);

// 41 uniform points on [0.05*pi, 0.95*pi].
std::vector<double> default_theta_grid();

// Theta of the maximal (signed) second difference, i.e. the convex corner
// where a collapsing curve meets its plateau; nullopt below 3 points.
std::optional<double> kink_from_second_difference(std::span<const double> thetas,
                                                  std::span<const double> values);

}  // namespace sshgl
