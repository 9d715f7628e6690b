#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "sshgl/errors.hpp"
#include "sshgl/experiments.hpp"
#include "sshgl/lindblad.hpp"
#include "sshgl/observables.hpp"

using namespace sshgl;
using std::numbers::pi;

namespace {

ModelParams params(int n, double theta, double gamma = 0.0) {
  return ModelParams{n, 1.0, 0.3, theta, gamma};
}

}  // namespace

TEST_CASE("initial state preparation") {
  const ModelParams p = params(200, 0.1 * pi);

  SUBCASE("edge_right concentrates in the last quarter") {
    const FockState psi = prepare_initial_state({InitialStateKind::edge_right}, p);
    CHECK(std::abs(psi.amplitudes.norm() - 1.0) < 1e-12);
    CHECK(std::abs(psi.amplitudes(0)) == 0.0);
    const Eigen::VectorXd occ = psi.amplitudes.tail(200).cwiseAbs2();
    CHECK(occ.tail(50).sum() > 0.95);
  }

  SUBCASE("site reversal maps edge_left onto edge_right") {
    const FockState right = prepare_initial_state({InitialStateKind::edge_right}, p);
    const FockState left = prepare_initial_state({InitialStateKind::edge_left}, p);
    const Eigen::VectorXd r = right.amplitudes.tail(200).real();
    const Eigen::VectorXd l_rev = left.amplitudes.tail(200).reverse().real();
    CHECK(std::min((r - l_rev).norm(), (r + l_rev).norm()) < 1e-8);
  }

  SUBCASE("default bulk draw is deterministic and delocalized") {
    InitialStateSpec spec{InitialStateKind::bulk};
    const FockState a = prepare_initial_state(spec, p);
    const FockState b = prepare_initial_state(spec, p);
    CHECK((a.amplitudes - b.amplitudes).cwiseAbs().maxCoeff() == 0.0);
    CHECK(a.amplitudes.cwiseAbs2().maxCoeff() < 0.1);
  }

  SUBCASE("explicit bulk index must not name a midgap state") {
    InitialStateSpec spec{InitialStateKind::bulk};
    spec.bulk_index = 99;  // midgap pair sits at the spectrum center (99, 100)
    CHECK_THROWS_AS(prepare_initial_state(spec, p), InvalidParameter);
    spec.bulk_index = 5;
    CHECK_NOTHROW(prepare_initial_state(spec, p));
    spec.bulk_index = 200;
    CHECK_THROWS_AS(prepare_initial_state(spec, p), InvalidParameter);
  }

  SUBCASE("edge kinds require a topologically nontrivial reference") {
    InitialStateSpec spec{InitialStateKind::edge_right};
    spec.theta_ref = 0.9 * pi;
    CHECK_THROWS_AS(prepare_initial_state(spec, p), InvalidParameter);
    spec.theta_ref = 0.5 * pi;
    CHECK_THROWS_AS(prepare_initial_state(spec, p), DegenerateBulk);
  }

  SUBCASE("site and vacuum kinds") {
    InitialStateSpec spec{InitialStateKind::site};
    CHECK_THROWS_AS(prepare_initial_state(spec, p), InvalidParameter);
    spec.site_index = 7;
    const FockState site = prepare_initial_state(spec, p);
    CHECK(std::abs(site.amplitudes(7)) == 1.0);
    const FockState vac = prepare_initial_state({InitialStateKind::vacuum}, p);
    CHECK(std::abs(vac.amplitudes(0)) == 1.0);
  }
}

TEST_CASE("snapshot experiments") {
  SUBCASE("spectral engine refuses open systems") {
    SnapshotOptions options;
    options.engine = Engine::spectral;
    CHECK_THROWS_AS(run_snapshot_experiment({InitialStateKind::edge_right},
                                            params(50, 0.1 * pi, 0.1), TimeGrid{10.0, 0.05, 20},
                                            options),
                    EngineMismatch);
  }

  SUBCASE("closed snapshot conserves total weight") {
    SnapshotOptions options;
    options.engine = Engine::spectral;
    const auto result = run_snapshot_experiment(
        {InitialStateKind::edge_right}, params(50, 0.1 * pi), TimeGrid{100.0, 0.05, 100}, options);
    CHECK(std::abs(result.initial_profile.sum() - 1.0) < 1e-12);
    CHECK(std::abs(result.profile.per_site.sum() - 1.0) < 1e-8);
  }

  SUBCASE("trajectory snapshot carries time-average standard errors") {
    SnapshotOptions options;
    options.engine = Engine::trajectories;
    options.n_traj = 16;
    options.seed = 11;
    const auto result = run_snapshot_experiment(
        {InitialStateKind::edge_right}, params(20, 0.1 * pi, 0.1), TimeGrid{20.0, 0.05, 40},
        options);
    CHECK(result.profile.per_site_stderr.maxCoeff() > 0.0);
  }
}

TEST_CASE("closed snapshots: trivial phase spreads, nontrivial phase keeps the edge") {
  SnapshotOptions options;
  options.engine = Engine::spectral;
  const TimeGrid grid{25000.0, 0.05, 1000};

  SUBCASE("TTP evolution of an edge state turns bulk-like with slight edge excess") {
    const auto result = run_snapshot_experiment({InitialStateKind::edge_right},
                                                params(200, 0.9 * pi), grid, options);
    CHECK(result.profile.per_site.maxCoeff() < 0.05);
    CHECK(edge_occupation(result.profile, 10, EdgeSide::left) < 0.25);
    CHECK(edge_occupation(result.profile, 10, EdgeSide::right) < 0.25);
    CHECK(result.profile.per_site.sum() == doctest::Approx(1.0).epsilon(1e-8));
  }

  SUBCASE("TNP evolution keeps each edge state at its own edge") {
    const auto right = run_snapshot_experiment({InitialStateKind::edge_right},
                                               params(200, 0.1 * pi), grid, options);
    CHECK(edge_occupation(right.profile, 50, EdgeSide::right) > 0.9);
    const auto left = run_snapshot_experiment({InitialStateKind::edge_left},
                                              params(200, 0.1 * pi), grid, options);
    CHECK(edge_occupation(left.profile, 50, EdgeSide::left) > 0.9);
  }
}

TEST_CASE("reflection covariance: swapped channels mirror the profile") {
  const ModelParams p = params(6, 0.1 * pi, 0.1);
  const TimeGrid grid{50.0, 0.05, 100};

  const auto standard = build_truncated_lindblad(p);          // loss at 1, gain at 6
  const auto swapped = build_truncated_lindblad(p, 6, 1);     // loss at 6, gain at 1

  const FockState psi0 = FockState::site(6, 2);
  const FockState mirrored = FockState::site(6, 5);

  const auto a = time_average(evolve_master_rk4(DensityMatrix::pure(psi0), standard, grid));
  const auto b = time_average(evolve_master_rk4(DensityMatrix::pure(mirrored), swapped, grid));
  CHECK((a.per_site - b.per_site.reverse()).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("theta sweep on the desk scale") {
  SUBCASE("closed edge occupation drops across the transition") {
    SweepOptions options;
    options.engine = Engine::spectral;
    options.windows = {1, 3, 5, 20};
    const std::vector<double> grid_thetas = {0.4 * pi, 0.6 * pi};
    const auto result = run_theta_sweep(params(100, 0.1 * pi), grid_thetas,
                                        {InitialStateKind::edge_right}, TimeGrid{2500.0, 0.05, 1000},
                                        options);
    REQUIRE(result.thetas.size() == 2);
    for (int w = 0; w < 4; ++w) {
      CHECK(result.edge_occ(1, w) < result.edge_occ(0, w));
    }
    CHECK(!result.kink_estimate.has_value());
  }

  SUBCASE("validation: ordering, windows, empty grids") {
    SweepOptions options;
    options.engine = Engine::spectral;
    CHECK_THROWS_AS(run_theta_sweep(params(20, 0.1 * pi), {0.3 * pi, 0.2 * pi},
                                    {InitialStateKind::edge_right}, TimeGrid{10.0, 0.05, 10},
                                    options),
                    InvalidParameter);
    CHECK_THROWS_AS(run_theta_sweep(params(20, 0.1 * pi), {}, {InitialStateKind::edge_right},
                                    TimeGrid{10.0, 0.05, 10}, options),
                    InvalidParameter);
    options.windows = {15};
    CHECK_THROWS_AS(run_theta_sweep(params(20, 0.1 * pi), {0.3 * pi}, {InitialStateKind::edge_right},
                                    TimeGrid{10.0, 0.05, 10}, options),
                    InvalidParameter);
  }

  SUBCASE("default grid has 41 points inside [0.05 pi, 0.95 pi]") {
    const auto grid_thetas = default_theta_grid();
    CHECK(grid_thetas.size() == 41);
    CHECK(grid_thetas.front() == doctest::Approx(0.05 * pi).epsilon(1e-12));
    CHECK(grid_thetas.back() == doctest::Approx(0.95 * pi).epsilon(1e-12));
  }
}

TEST_CASE("kink detection picks the sharpest corner") {
  std::vector<double> thetas, values;
  for (int i = 0; i <= 20; ++i) {
    const double x = i / 20.0;
    thetas.push_back(x);
    values.push_back(x < 0.5 ? 1.0 - x : 0.5);  // corner at x = 0.5
  }
  const auto kink = kink_from_second_difference(thetas, values);
  REQUIRE(kink.has_value());
  CHECK(*kink == doctest::Approx(0.5).epsilon(1e-12));

  CHECK(!kink_from_second_difference(std::vector<double>{0.1, 0.2},
                                     std::vector<double>{1.0, 2.0})
             .has_value());
}
