#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "sshgl/errors.hpp"
#include "sshgl/lindblad.hpp"
#include "sshgl/observables.hpp"
#include "sshgl/spectral.hpp"

using namespace sshgl;
using std::numbers::pi;

TEST_CASE("site occupations are the Fock diagonal") {
  const int n = 6;
  CHECK(site_occupations(DensityMatrix::pure(FockState::vacuum(n))).cwiseAbs().maxCoeff() == 0.0);

  const auto indicator = site_occupations(DensityMatrix::pure(FockState::site(n, 3)));
  for (int i = 0; i < n; ++i) CHECK(indicator(i) == (i == 2 ? 1.0 : 0.0));

  DensityMatrix mixed{0.5 * DensityMatrix::pure(FockState::site(n, 1)).entries +
                      0.5 * DensityMatrix::pure(FockState::vacuum(n)).entries};
  const auto occ = site_occupations(mixed);
  CHECK(occ(0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(occ.tail(n - 1).cwiseAbs().maxCoeff() == 0.0);
}

namespace {

OccupationSeries series_from_rows(const std::vector<Eigen::VectorXd>& rows) {
  OccupationSeries series;
  const int s = static_cast<int>(rows.size()) - 1;
  series.grid = TimeGrid{1.0 * s, 0.5, s};
  series.sample_times = series.grid.sample_times();
  series.per_site_mean.resize(s + 1, rows[0].size());
  for (int j = 0; j <= s; ++j) series.per_site_mean.row(j) = rows[static_cast<std::size_t>(j)];
  series.per_site_stderr = Eigen::MatrixXd::Zero(s + 1, rows[0].size());
  series.vacuum_prob.assign(static_cast<std::size_t>(s + 1), 0.0);
  return series;
}

}  // namespace

TEST_CASE("time average: constants, alternation, linearity") {
  const Eigen::VectorXd c = Eigen::VectorXd::Constant(3, 0.25);
  CHECK((time_average(series_from_rows({c, c, c})).per_site - c).cwiseAbs().maxCoeff() < 1e-15);

  std::vector<Eigen::VectorXd> alternating;
  for (int j = 0; j <= 100; ++j) {
    alternating.push_back(Eigen::VectorXd::Constant(2, j % 2 == 0 ? 0.0 : 1.0));
  }
  const auto avg = time_average(series_from_rows(alternating));
  CHECK(std::abs(avg.per_site(0) - 0.5) <= 1.0 / 100.0);

  // convex combination commutes with the average
  std::vector<Eigen::VectorXd> ra, rb, rc;
  for (int j = 0; j < 7; ++j) {
    ra.push_back(Eigen::VectorXd::Random(4).cwiseAbs());
    rb.push_back(Eigen::VectorXd::Random(4).cwiseAbs());
    rc.push_back(0.3 * ra.back() + 0.7 * rb.back());
  }
  const Eigen::VectorXd mixed = time_average(series_from_rows(rc)).per_site;
  const Eigen::VectorXd avg_a = time_average(series_from_rows(ra)).per_site;
  const Eigen::VectorXd avg_b = time_average(series_from_rows(rb)).per_site;
  const Eigen::VectorXd combo = 0.3 * avg_a + 0.7 * avg_b;
  CHECK((mixed - combo).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("closed eigenstate evolution time-averages to |v|^2 and conserves weight") {
  const ModelParams p{10, 1.0, 0.3, 0.2 * pi, 0.0};
  const auto report = eigendecompose_hermitian(build_ssh_hamiltonian(p).real_entries());
  const FockState psi0 =
      FockState::from_single_particle(report.eigenvectors.col(3).normalized());
  const TimeGrid grid{50.0, 0.05, 100};
  const auto profile = time_average(evolve_closed_spectral(psi0, p, grid));
  const Eigen::VectorXd expected = report.eigenvectors.col(3).cwiseAbs2().real();
  CHECK((profile.per_site - expected).cwiseAbs().maxCoeff() < 1e-8);
  CHECK(profile.per_site.sum() == doctest::Approx(1.0).epsilon(1e-8));  // Parseval
}

TEST_CASE("edge occupation windows") {
  TimeAveragedProfile profile;
  profile.per_site = Eigen::VectorXd::Zero(10);
  profile.per_site(9) = 1.0;
  profile.per_site_stderr = Eigen::VectorXd::Zero(10);
  CHECK(edge_occupation(profile, 1, EdgeSide::right) == 1.0);
  CHECK(edge_occupation(profile, 1, EdgeSide::left) == 0.0);

  profile.per_site = Eigen::VectorXd::Constant(10, 0.1);
  CHECK(edge_occupation(profile, 3, EdgeSide::right) == doctest::Approx(0.3).epsilon(1e-14));
  CHECK(edge_occupation(profile, 3, EdgeSide::left) +
            edge_occupation(profile, 3, EdgeSide::right) <=
        1.0 + 1e-8);

  CHECK_THROWS_AS(edge_occupation(profile, 6, EdgeSide::left), InvalidParameter);
  CHECK_THROWS_AS(edge_occupation(profile, 0, EdgeSide::left), InvalidParameter);
}
