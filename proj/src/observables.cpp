#include "sshgl/observables.hpp"

#include <cmath>
#include <string>

#include "sshgl/errors.hpp"

namespace sshgl {

Eigen::VectorXd site_occupations(const DensityMatrix& rho) {
  const int n = rho.n_sites();
  Eigen::VectorXd occ(n);
  for (int i = 1; i <= n; ++i) {
    const auto d = rho.entries(i, i);
    if (std::abs(d.imag()) > 1e-10) {
      throw InvalidParameter("rho", "diagonal entry " + std::to_string(i) +
                                        " has imaginary part " + std::to_string(d.imag()));
    }
    occ(i - 1) = d.real();
  }
  return occ;
}

TimeAveragedProfile time_average(const OccupationSeries& series) {
  if (series.n_samples() == 0) {
    throw InvalidParameter("series", "cannot average an empty series");
  }
  TimeAveragedProfile profile;
  profile.per_site = series.per_site_mean.colwise().mean();
  profile.per_site_stderr = Eigen::VectorXd::Zero(series.n_sites());
  profile.window = series.grid;
  return profile;
}

double edge_occupation(const TimeAveragedProfile& profile, int a, EdgeSide side) {
  const int n = static_cast<int>(profile.per_site.size());
  if (a < 1 || 2 * a > n) {
    throw InvalidParameter("a", "edge window must satisfy 1 <= a <= N/2 = " +
                                    std::to_string(n / 2) + ", got " + std::to_string(a));
  }
  return side == EdgeSide::left ? profile.per_site.head(a).sum()
                                : profile.per_site.tail(a).sum();
}

}  // namespace sshgl
