#include "sshgl/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <string>

#include "sshgl/errors.hpp"

namespace sshgl {

using std::complex;

SpectrumReport eigendecompose_hermitian(const Eigen::MatrixXd& matrix) {
  const double asym = (matrix - matrix.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12) {
    throw InvalidParameter("matrix", "not symmetric: max |M - M^T| = " + std::to_string(asym));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(matrix);
  if (solver.info() != Eigen::Success) {
    throw NonConvergence("symmetric eigensolver failed to converge (n = " +
                         std::to_string(matrix.rows()) + ")");
  }
  SpectrumReport report;
  report.eigenvalues = solver.eigenvalues().cast<complex<double>>();
  report.eigenvectors = solver.eigenvectors().cast<complex<double>>();
  return report;
}

SpectrumReport eigendecompose_general(const Eigen::MatrixXcd& matrix) {
  if (!matrix.allFinite()) {
    throw InvalidParameter("matrix", "entries must be finite");
  }
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(matrix, /*computeEigenvectors=*/true);
  if (solver.info() != Eigen::Success) {
    throw NonConvergence("complex eigensolver failed to converge (n = " +
                         std::to_string(matrix.rows()) +
                         ", max |entry| = " + std::to_string(matrix.cwiseAbs().maxCoeff()) + ")");
  }

  const int n = static_cast<int>(matrix.rows());
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  const auto& ev = solver.eigenvalues();
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (ev(a).real() != ev(b).real()) return ev(a).real() < ev(b).real();
    return ev(a).imag() < ev(b).imag();
  });

  SpectrumReport report;
  report.eigenvalues.resize(n);
  report.eigenvectors.resize(n, n);
  for (int k = 0; k < n; ++k) {
    report.eigenvalues(k) = ev(order[static_cast<std::size_t>(k)]);
    report.eigenvectors.col(k) = solver.eigenvectors().col(order[static_cast<std::size_t>(k)]);
    report.eigenvectors.col(k).normalize();
  }
  return report;
}

SpectrumReport classify_edge_states(SpectrumReport report, const ModelParams& params,
                                    const ClassificationOptions& options) {
  const int n = report.dim();
  if (n != params.n_sites) {
    throw InvalidParameter("report", "spectrum dimension " + std::to_string(n) +
                                         " does not match n_sites = " +
                                         std::to_string(params.n_sites));
  }
  const HoppingPair hp = hopping_amplitudes(params);
  const double gap = 2.0 * std::abs(hp.t_plus - hp.t_minus);
  const int window = options.edge_window > 0 ? options.edge_window : (n + 19) / 20;

  report.labels.assign(static_cast<std::size_t>(n), EdgeLabel{});
  report.labels_indeterminate = gap < options.gap_floor;
  for (int k = 0; k < n; ++k) {
    EdgeLabel& label = report.labels[static_cast<std::size_t>(k)];
    const auto v = report.eigenvectors.col(k);
    label.edge_weight_left = v.head(window).squaredNorm();
    label.edge_weight_right = v.tail(window).squaredNorm();
    label.is_pt_broken = std::abs(report.eigenvalues(k).imag()) > options.pt_tol;
    if (!report.labels_indeterminate) {
      label.is_midgap = std::abs(report.eigenvalues(k).real()) < options.midgap_gap_factor * gap;
    }
  }
  return report;
}

PtBreakingReport pt_breaking_report(const SpectrumReport& report, double tol) {
  PtBreakingReport result;
  for (int k = 0; k < report.dim(); ++k) {
    const double im = report.eigenvalues(k).imag();
    result.max_imag = std::max(result.max_imag, im);
    if (im > tol) ++result.n_complex_pairs;
  }
  return result;
}

TopologicalInvariant zak_phase(const ModelParams& params, int k_samples) {
  if (k_samples < 64) {
    throw InvalidParameter("k_samples", "must be >= 64, got " + std::to_string(k_samples));
  }
  const HoppingPair hp = hopping_amplitudes(params);
  if (std::abs(hp.t_minus - hp.t_plus) <= 1e-6) {
    throw DegenerateBulk("bulk gap closed: |t- - t+| = " +
                         std::to_string(std::abs(hp.t_minus - hp.t_plus)) +
                         " <= 1e-6 at theta = " + std::to_string(params.theta));
  }

  constexpr double pi = std::numbers::pi;
  const complex<double> iota(0.0, 1.0);

  // Lower-band eigenvector of [[0, g], [conj(g), 0]] with g = t- + t+ e^{-ik}:
  // u(k) = (-g/|g|, 1)/sqrt(2). The loop product is gauge invariant because
  // every u(k_m) enters once as a bra and once as a ket.
  auto band_vector = [&](double k) -> Eigen::Vector2cd {
    const complex<double> g = hp.t_minus + hp.t_plus * std::exp(-iota * k);
    Eigen::Vector2cd u;
    u << -g / std::abs(g), complex<double>(1.0, 0.0);
    return u / std::sqrt(2.0);
  };

  complex<double> wilson(1.0, 0.0);
  Eigen::Vector2cd u_first = band_vector(-pi);
  Eigen::Vector2cd u_prev = u_first;
  for (int m = 1; m < k_samples; ++m) {
    const double k = -pi + 2.0 * pi * m / k_samples;
    const Eigen::Vector2cd u = band_vector(k);
    wilson *= u_prev.dot(u);  // Eigen's dot conjugates the left argument
    u_prev = u;
  }
  wilson *= u_prev.dot(u_first);

  double phase = -std::arg(wilson);
  // wrap into [-pi/2, 3*pi/2) so the trivial phase reads ~0 and the
  // topological one ~pi
  phase -= 2.0 * pi * std::floor((phase + pi / 2.0) / (2.0 * pi));

  TopologicalInvariant invariant;
  invariant.zak_phase = phase;
  invariant.winding_number = static_cast<int>(std::lround(phase / pi)) % 2;
  invariant.k_samples = k_samples;
  return invariant;
}

}  // namespace sshgl
