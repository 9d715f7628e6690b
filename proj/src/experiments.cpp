#include "sshgl/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "sshgl/errors.hpp"
#include "sshgl/parallel.hpp"
#include "sshgl/rng.hpp"
#include "sshgl/spectral.hpp"

namespace sshgl {

namespace {

constexpr std::uint64_t kBulkDrawSeed = 42;

// Fix the overall sign so repeated diagonalizations combine identically.
void canonicalize_sign(Eigen::VectorXd& v) {
  int imax = 0;
  v.cwiseAbs().maxCoeff(&imax);
  if (v(imax) < 0.0) v = -v;
}

}  // namespace

FockState prepare_initial_state(const InitialStateSpec& spec, const ModelParams& params) {
  params.validate();
  const int n = params.n_sites;

  if (spec.kind == InitialStateKind::vacuum) return FockState::vacuum(n);
  if (spec.kind == InitialStateKind::site) {
    if (!spec.site_index) {
      throw InvalidParameter("initial", "kind 'site' requires an index (site:<i>)");
    }
    return FockState::site(n, *spec.site_index);
  }

  if (!(spec.theta_ref >= 0.0 && spec.theta_ref <= std::numbers::pi)) {
    throw InvalidParameter("theta_ref", "must lie in [0, pi] radians, got " +
                                            std::to_string(spec.theta_ref));
  }
  ModelParams ref = params;
  ref.theta = spec.theta_ref;
  ref.gamma = 0.0;

  SpectrumReport report = classify_edge_states(
      eigendecompose_hermitian(build_ssh_hamiltonian(ref).real_entries()), ref);
  if (report.labels_indeterminate) {
    throw DegenerateBulk("reference spectrum at theta_ref = " + std::to_string(spec.theta_ref) +
                         " has a closed gap; edge/bulk classification is indeterminate");
  }

  std::vector<int> midgap, bulk;
  for (int k = 0; k < n; ++k) {
    (report.labels[static_cast<std::size_t>(k)].is_midgap ? midgap : bulk).push_back(k);
  }

  if (spec.kind == InitialStateKind::bulk) {
    int index;
    if (spec.bulk_index) {
      index = *spec.bulk_index;
      if (index < 0 || index >= n) {
        throw InvalidParameter("initial", "bulk index must lie in [0, " + std::to_string(n - 1) +
                                              "], got " + std::to_string(index));
      }
      if (report.labels[static_cast<std::size_t>(index)].is_midgap) {
        throw InvalidParameter("initial", "bulk index " + std::to_string(index) +
                                              " names a midgap state");
      }
    } else {
      CounterRng rng(kBulkDrawSeed, 0);
      index = bulk[static_cast<std::size_t>(rng.next_u64() % bulk.size())];
    }
    Eigen::VectorXd v = report.eigenvectors.col(index).real();
    canonicalize_sign(v);
    return FockState::from_single_particle(v.cast<std::complex<double>>());
  }

  // edge_left / edge_right
  if (midgap.size() != 2) {
    throw InvalidParameter(
        "initial", "reference spectrum at theta_ref = " + std::to_string(spec.theta_ref) +
                       " has " + std::to_string(midgap.size()) +
                       " midgap states; edge initial states need exactly 2 (choose a "
                       "topologically nontrivial theta_ref)");
  }
  // The midgap pair is (near-)degenerate, so the solver returns an arbitrary
  // rotation of the 2D subspace. Pick the combination maximizing the
  // right-half weight from the 2x2 Gram matrix of the half-chain projector;
  // the orthogonal combination localizes left.
  const Eigen::VectorXd v1 = report.eigenvectors.col(midgap[0]).real();
  const Eigen::VectorXd v2 = report.eigenvectors.col(midgap[1]).real();
  const int half = n / 2;
  Eigen::Matrix2d gram;
  gram(0, 0) = v1.tail(half).squaredNorm();
  gram(1, 1) = v2.tail(half).squaredNorm();
  gram(0, 1) = v1.tail(half).dot(v2.tail(half));
  gram(1, 0) = gram(0, 1);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> gram_solver(gram);
  const Eigen::Vector2d c_right = gram_solver.eigenvectors().col(1);  // max right weight
  const Eigen::Vector2d c_left = gram_solver.eigenvectors().col(0);

  const Eigen::Vector2d& c = (spec.kind == InitialStateKind::edge_right) ? c_right : c_left;
  Eigen::VectorXd chosen = (c(0) * v1 + c(1) * v2).normalized();
  canonicalize_sign(chosen);
  return FockState::from_single_particle(chosen.cast<std::complex<double>>());
}

namespace {

TimeAveragedProfile evolve_prepared(const FockState& psi0, const ModelParams& params,
                                    const TimeGrid& grid, const SnapshotOptions& options,
                                    OccupationSeries* series_out) {
  switch (options.engine) {
    case Engine::spectral: {
      OccupationSeries series = evolve_closed_spectral(psi0, params, grid);
      TimeAveragedProfile profile = time_average(series);
      if (series_out) *series_out = std::move(series);
      return profile;
    }
    case Engine::master: {
      const TruncatedLindbladModel model = build_truncated_lindblad(params);
      OccupationSeries series = evolve_master_rk4(DensityMatrix::pure(psi0), model, grid);
      TimeAveragedProfile profile = time_average(series);
      if (series_out) *series_out = std::move(series);
      return profile;
    }
    case Engine::trajectories: {
      const TruncatedLindbladModel model = build_truncated_lindblad(params);
      TrajectoryRun run = sample_trajectories(
          psi0, model, grid, {options.n_traj, options.seed, options.n_threads});
      if (series_out) *series_out = std::move(run.series);
      return run.time_average;
    }
  }
  throw std::logic_error("unreachable engine");
}

}  // namespace

SnapshotResult run_snapshot_experiment(const InitialStateSpec& spec, const ModelParams& params,
                                       const TimeGrid& grid, const SnapshotOptions& options) {
  params.validate();
  grid.validate();
  const FockState psi0 = prepare_initial_state(spec, params);

  SnapshotResult result;
  result.initial_profile = psi0.amplitudes.tail(params.n_sites).cwiseAbs2();
  result.profile = evolve_prepared(psi0, params, grid, options, &result.series);
  return result;
}

SweepResult run_theta_sweep(const ModelParams& params_template,
                            const std::vector<double>& theta_grid, const InitialStateSpec& spec,
                            const TimeGrid& grid, const SweepOptions& options) {
  grid.validate();
  if (theta_grid.empty()) {
    throw InvalidParameter("theta_grid", "must contain at least one theta");
  }
  for (std::size_t i = 1; i < theta_grid.size(); ++i) {
    if (!(theta_grid[i] > theta_grid[i - 1])) {
      throw InvalidParameter("theta_grid", "thetas must be strictly increasing");
    }
  }
  if (options.windows.empty()) {
    throw InvalidParameter("windows", "must contain at least one window");
  }
  SweepResult result;
  result.windows = options.windows;
  std::sort(result.windows.begin(), result.windows.end());
  result.windows.erase(std::unique(result.windows.begin(), result.windows.end()),
                       result.windows.end());
  for (int a : result.windows) {
    if (a < 1 || 2 * a > params_template.n_sites) {
      throw InvalidParameter("windows", "window " + std::to_string(a) +
                                            " must satisfy 1 <= a <= N/2");
    }
  }

  // One fixed initial state for every theta, prepared at theta_ref.
  const FockState psi0 = prepare_initial_state(spec, params_template);

  const int n_theta = static_cast<int>(theta_grid.size());
  const int n_windows = static_cast<int>(result.windows.size());
  result.thetas = theta_grid;
  result.edge_occ = Eigen::MatrixXd::Zero(n_theta, n_windows);
  result.runtime_s.assign(static_cast<std::size_t>(n_theta), 0.0);

  SnapshotOptions point_options;
  point_options.engine = options.engine;
  point_options.n_traj = options.n_traj;
  point_options.seed = options.seed;  // shared across thetas: common random numbers
  point_options.n_threads = options.engine == Engine::trajectories ? options.n_threads : 1;

  auto job = [&](int i) {
    const auto start = std::chrono::steady_clock::now();
    ModelParams params = params_template;
    params.theta = theta_grid[static_cast<std::size_t>(i)];
    params.validate();
    const TimeAveragedProfile profile =
        evolve_prepared(psi0, params, grid, point_options, nullptr);
    for (int w = 0; w < n_windows; ++w) {
      result.edge_occ(i, w) = edge_occupation(profile, result.windows[static_cast<std::size_t>(w)],
                                              EdgeSide::right);
    }
    result.runtime_s[static_cast<std::size_t>(i)] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };

  if (options.engine == Engine::trajectories) {
    for (int i = 0; i < n_theta; ++i) job(i);  // parallelism lives in the sampler
  } else {
    parallel_for(n_theta, options.n_threads, job);
  }

  const Eigen::VectorXd widest = result.edge_occ.col(n_windows - 1);
  result.kink_estimate = kink_from_second_difference(
      result.thetas, std::span<const double>(widest.data(), static_cast<std::size_t>(n_theta)));
  return result;
}

std::vector<double> default_theta_grid() {
  constexpr double pi = std::numbers::pi;
  std::vector<double> grid(41);
  for (int i = 0; i < 41; ++i) grid[static_cast<std::size_t>(i)] = (0.05 + 0.9 * i / 40.0) * pi;
  return grid;
}

std::optional<double> kink_from_second_difference(std::span<const double> thetas,
                                                  std::span<const double> values) {
  if (thetas.size() != values.size() || thetas.size() < 3) return std::nullopt;
  // signed maximum: the kink is the convex corner where the collapsing edge
  // occupation meets the trivial plateau
  double best = std::numeric_limits<double>::lowest();
  std::size_t best_i = 1;
  for (std::size_t i = 1; i + 1 < values.size(); ++i) {
    const double d2 = values[i + 1] - 2.0 * values[i] + values[i - 1];
    if (d2 > best) {
      best = d2;
      best_i = i;
    }
  }
  return thetas[best_i];
}

}  // namespace sshgl
