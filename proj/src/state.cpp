#include "sshgl/state.hpp"

#include <cmath>
#include <string>

#include "sshgl/errors.hpp"

namespace sshgl {

FockState FockState::vacuum(int n_sites) {
  FockState psi{Eigen::VectorXcd::Zero(n_sites + 1)};
  psi.amplitudes(0) = 1.0;
  return psi;
}

FockState FockState::site(int n_sites, int site_index) {
  if (site_index < 1 || site_index > n_sites) {
    throw InvalidParameter("site_index", "must lie in [1, n_sites], got " +
                                             std::to_string(site_index));
  }
  FockState psi{Eigen::VectorXcd::Zero(n_sites + 1)};
  psi.amplitudes(site_index) = 1.0;
  return psi;
}

FockState FockState::from_single_particle(const Eigen::VectorXcd& site_amplitudes) {
  FockState psi{Eigen::VectorXcd::Zero(site_amplitudes.size() + 1)};
  psi.amplitudes.tail(site_amplitudes.size()) = site_amplitudes;
  return psi;
}

DensityMatrix DensityMatrix::pure(const FockState& psi) {
  return DensityMatrix{psi.amplitudes * psi.amplitudes.adjoint()};
}

void TimeGrid::validate() const {
  if (!(t_end > 0.0) || !std::isfinite(t_end)) {
    throw InvalidParameter("t_end", "must be a finite real > 0, got " + std::to_string(t_end));
  }
  if (sample_count < 1) {
    throw InvalidParameter("samples", "must be a positive integer, got " +
                                          std::to_string(sample_count));
  }
  if (!(dt > 0.0) || dt > t_end / sample_count + 1e-15) {
    throw InvalidParameter("dt", "must satisfy 0 < dt <= t_end/samples = " +
                                     std::to_string(t_end / sample_count) + ", got " +
                                     std::to_string(dt));
  }
}

std::vector<double> TimeGrid::sample_times() const {
  std::vector<double> times(static_cast<std::size_t>(sample_count) + 1);
  for (int j = 0; j <= sample_count; ++j) {
    times[static_cast<std::size_t>(j)] = t_end * j / sample_count;
  }
  return times;
}

int TimeGrid::steps_per_sample() const {
  const double interval = t_end / sample_count;
  return static_cast<int>(std::ceil(interval / dt - 1e-12));
}

double TimeGrid::effective_dt() const {
  return t_end / sample_count / steps_per_sample();
}

CovarianceMatrix CovarianceMatrix::from_state(const FockState& psi) {
  const auto sites = psi.amplitudes.tail(psi.n_sites());
  return CovarianceMatrix{sites.conjugate() * sites.transpose()};
}

}  // namespace sshgl
