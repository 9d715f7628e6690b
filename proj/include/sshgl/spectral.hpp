#pragma once

#include <Eigen/Dense>
#include <vector>

#include "sshgl/model.hpp"

namespace sshgl {

struct EdgeLabel {
  bool is_midgap = false;
  double edge_weight_left = 0.0;
  double edge_weight_right = 0.0;
  bool is_pt_broken = false;
};

struct SpectrumReport {
  Eigen::VectorXcd eigenvalues;   // ascending (real part, then imaginary part)
  Eigen::MatrixXcd eigenvectors;  // unit-norm columns, same order
  std::vector<EdgeLabel> labels;  // filled by classify_edge_states
  bool labels_indeterminate = false;  // gap closed; midgap flags not meaningful

  int dim() const { return static_cast<int>(eigenvalues.size()); }
};

struct ClassificationOptions {
  double midgap_gap_factor = 0.5;  // midgap iff |Re E| < factor * gap
  int edge_window = 0;             // sites per edge; 0 -> ceil(N/20)
  double gap_floor = 1e-6;         // below this the labels are indeterminate
  double pt_tol = 1e-8;            // |Im E| above this marks a PT-broken pair
};

struct PtBreakingReport {
  int n_complex_pairs = 0;  // eigenvalues with Im E > tol (each pair once)
  double max_imag = 0.0;
};

// Zak phase of the lower Bloch band and the corresponding winding number.
struct TopologicalInvariant {
  double zak_phase = 0.0;  // 0 or pi (mod 2*pi) for gapped parameters
  int winding_number = 0;
  int k_samples = 0;
};

// Dense symmetric eigendecomposition; rejects matrices whose asymmetry
// exceeds 1e-12. Eigenvalues ascend and are real.
SpectrumReport eigendecompose_hermitian(const Eigen::MatrixXd& matrix);

// Dense general complex eigendecomposition, ordered by (Re, Im). Throws
// NonConvergence (with the matrix dimensions) if the QR iteration fails.
SpectrumReport eigendecompose_general(const Eigen::MatrixXcd& matrix);

// Labels every eigenpair of a chain spectrum: midgap flag against the bulk
// gap 2|t+ - t-|, edge weights over the first/last ceil(N/20) sites, and the
// PT-broken flag from the imaginary part. With the gap below gap_floor the
// report comes back flagged indeterminate instead of guessing.
SpectrumReport classify_edge_states(SpectrumReport report, const ModelParams& params,
                                    const ClassificationOptions& options = {});

PtBreakingReport pt_breaking_report(const SpectrumReport& report, double tol);

// Wilson-loop Zak phase of the lower band of
//   h(k) = [[0, t- + t+ e^{-ik}], [t- + t+ e^{+ik}, 0]]
// on a closed uniform k grid. Gauge invariant by construction. Requires a
// gapped bulk (|t- - t+| > 1e-6) and k_samples >= 64.
TopologicalInvariant zak_phase(const ModelParams& params, int k_samples = 256);

}  // namespace sshgl
