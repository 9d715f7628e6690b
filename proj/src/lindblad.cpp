#include "sshgl/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <vector>

#include "sshgl/errors.hpp"
#include "sshgl/parallel.hpp"
#include "sshgl/rk4.hpp"
#include "sshgl/rng.hpp"

namespace sshgl {

using std::complex;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

namespace {

constexpr complex<double> kI(0.0, 1.0);

OccupationSeries make_series(const TimeGrid& grid, int n_sites) {
  OccupationSeries series;
  series.grid = grid;
  series.sample_times = grid.sample_times();
  const int rows = grid.sample_count + 1;
  series.per_site_mean = MatrixXd::Zero(rows, n_sites);
  series.per_site_stderr = MatrixXd::Zero(rows, n_sites);
  series.vacuum_prob.assign(static_cast<std::size_t>(rows), 0.0);
  return series;
}

// rho * H for the truncated Fock Hamiltonian (tridiagonal in the site block,
// vacuum row/column zero). Column j of H carries bonds[j-2] at row j-1 and
// bonds[j-1] at row j+1.
void right_multiply_h(const TruncatedLindbladModel& m, const MatrixXcd& rho, MatrixXcd& out) {
  const int n = m.params.n_sites;
  out.col(0).setZero();
  for (int j = 1; j <= n; ++j) {
    if (j >= 2) {
      out.col(j) = m.bonds[static_cast<std::size_t>(j - 2)] * rho.col(j - 1);
      if (j < n) out.col(j) += m.bonds[static_cast<std::size_t>(j - 1)] * rho.col(j + 1);
    } else {
      out.col(j) = m.bonds[0] * rho.col(2);
    }
  }
}

// -i[H, rho] + dissipators, written so Hermiticity is preserved exactly:
// with B = rho H and rho Hermitian, H rho = B^dag and -i[H,rho] = i(B - B^dag).
void master_rhs(const TruncatedLindbladModel& m, const MatrixXcd& rho, MatrixXcd& out,
                MatrixXcd& work) {
  right_multiply_h(m, rho, work);
  out = kI * (work - work.adjoint());

  const int l = m.loss_site;
  if (m.gamma_loss > 0.0) {
    out.row(l) -= (0.5 * m.gamma_loss) * rho.row(l);
    out.col(l) -= (0.5 * m.gamma_loss) * rho.col(l);
    out(0, 0) += m.gamma_loss * rho(l, l);
  }
  if (m.gamma_gain > 0.0) {
    out.row(0) -= (0.5 * m.gamma_gain) * rho.row(0);
    out.col(0) -= (0.5 * m.gamma_gain) * rho.col(0);
    out(m.gain_site, m.gain_site) += m.gamma_gain * rho(0, 0);
  }
}

}  // namespace

OccupationSeries evolve_closed_spectral(const FockState& psi0, const ModelParams& params,
                                        const TimeGrid& grid) {
  params.validate();
  grid.validate();
  if (params.gamma != 0.0) {
    throw EngineMismatch("the closed spectral engine requires gamma = 0 (got gamma = " +
                         std::to_string(params.gamma) + "); use the master or trajectory engine");
  }
  const int n = params.n_sites;
  if (psi0.n_sites() != n) {
    throw InvalidParameter("psi0", "state has " + std::to_string(psi0.n_sites()) +
                                       " sites, params have " + std::to_string(n));
  }
  if (std::abs(psi0.amplitudes(0)) > 1e-12) {
    throw InvalidParameter("psi0", "vacuum amplitude must be zero for closed evolution");
  }

  Eigen::SelfAdjointEigenSolver<MatrixXd> solver(build_ssh_hamiltonian(params).real_entries());
  if (solver.info() != Eigen::Success) {
    throw NonConvergence("symmetric eigensolver failed (n = " + std::to_string(n) + ")");
  }
  const MatrixXd& vecs = solver.eigenvectors();
  const VectorXd& vals = solver.eigenvalues();
  const VectorXcd coeff = vecs.transpose() * psi0.amplitudes.tail(n);

  OccupationSeries series = make_series(grid, n);
  VectorXcd phase(n), state(n);
  for (int j = 0; j <= grid.sample_count; ++j) {
    const double t = series.sample_times[static_cast<std::size_t>(j)];
    for (int k = 0; k < n; ++k) phase(k) = std::exp(-kI * vals(k) * t) * coeff(k);
    state.noalias() = vecs * phase;
    series.per_site_mean.row(j) = state.cwiseAbs2().transpose();
  }
  return series;
}

DensityMatrix lindblad_rhs(const DensityMatrix& rho, const TruncatedLindbladModel& model) {
  const int dim = model.dim();
  if (rho.entries.rows() != dim || rho.entries.cols() != dim) {
    throw InvalidParameter("rho", "dimension mismatch with model Fock space");
  }
  DensityMatrix out{MatrixXcd(dim, dim)};
  MatrixXcd work(dim, dim);
  master_rhs(model, rho.entries, out.entries, work);
  return out;
}

OccupationSeries evolve_master_rk4(const DensityMatrix& rho0, const TruncatedLindbladModel& model,
                                   const TimeGrid& grid, const SampleObserver& observer) {
  grid.validate();
  const int n = model.params.n_sites;
  const int dim = model.dim();
  if (rho0.entries.rows() != dim) {
    throw InvalidParameter("rho0", "dimension mismatch with model Fock space");
  }
  if (std::abs(rho0.entries.trace().real() - 1.0) > 1e-8) {
    throw InvalidParameter("rho0", "trace must be 1");
  }

  MatrixXcd rho = rho0.entries;
  MatrixXcd k1(dim, dim), k2(dim, dim), k3(dim, dim), k4(dim, dim), tmp(dim, dim),
      work(dim, dim);
  auto rhs = [&](const MatrixXcd& y, MatrixXcd& dy) { master_rhs(model, y, dy, work); };

  const int sps = grid.steps_per_sample();
  const double h = grid.effective_dt();
  OccupationSeries series = make_series(grid, n);

  auto record = [&](int j) {
    const double t = series.sample_times[static_cast<std::size_t>(j)];
    const double trace = rho.trace().real();
    if (std::abs(trace - 1.0) > 1e-6) {
      throw IntegratorFailure("master integrator trace drift " + std::to_string(trace - 1.0) +
                              " at t = " + std::to_string(t) + "; reduce dt (effective dt = " +
                              std::to_string(h) + ")");
    }
    double min_diag = 0.0;
    for (int i = 0; i < dim; ++i) min_diag = std::min(min_diag, rho(i, i).real());
    if (min_diag < -1e-6) {
      throw IntegratorFailure("master integrator negativity " + std::to_string(min_diag) +
                              " at t = " + std::to_string(t) + "; reduce dt (effective dt = " +
                              std::to_string(h) + ")");
    }
    for (int i = 1; i <= n; ++i) series.per_site_mean(j, i - 1) = rho(i, i).real();
    series.vacuum_prob[static_cast<std::size_t>(j)] = rho(0, 0).real();
    if (observer) observer(t, rho);
  };

  record(0);
  for (int j = 1; j <= grid.sample_count; ++j) {
    for (int step = 0; step < sps; ++step) rk4_step(rho, h, rhs, k1, k2, k3, k4, tmp);
    record(j);
  }
  return series;
}

namespace {

// d psi/dt = -i H_eff psi with H_eff = H - (i/2)(gl P_loss + gg P_vac).
struct EffectiveHamiltonianRhs {
  const TruncatedLindbladModel* model;

  void operator()(const VectorXcd& psi, VectorXcd& out) const {
    const auto& bonds = model->bonds;
    const int n = model->params.n_sites;
    out(0) = -(0.5 * model->gamma_gain) * psi(0);
    for (int i = 1; i <= n; ++i) {
      complex<double> hop(0.0, 0.0);
      if (i >= 2) hop += bonds[static_cast<std::size_t>(i - 2)] * psi(i - 1);
      if (i < n) hop += bonds[static_cast<std::size_t>(i - 1)] * psi(i + 1);
      out(i) = complex<double>(hop.imag(), -hop.real());  // -i * hop
    }
    out(model->loss_site) -= (0.5 * model->gamma_loss) * psi(model->loss_site);
  }
};

struct BlockAccumulator {
  MatrixXd sum_occ, sumsq_occ;   // (s+1) x N
  VectorXd sum_vac, sumsq_vac;   // s+1
  VectorXd sum_tavg, sumsq_tavg; // N
  std::int64_t jumps = 0;
  double min_final_norm2 = std::numeric_limits<double>::infinity();
  double max_final_norm2 = -std::numeric_limits<double>::infinity();
};

struct TrajectoryWorker {
  const TruncatedLindbladModel* model;
  const TimeGrid* grid;
  const VectorXcd* psi0;
  EffectiveHamiltonianRhs rhs;

  VectorXcd psi, prev, k1, k2, k3, k4, tmp;
  VectorXd occ_row, tavg;
  double threshold = 0.0;
  std::int64_t jumps = 0;

  explicit TrajectoryWorker(const TruncatedLindbladModel& m, const TimeGrid& g,
                            const VectorXcd& p0)
      : model(&m), grid(&g), psi0(&p0), rhs{&m} {
    const int dim = m.dim();
    psi.resize(dim);
    prev.resize(dim);
    k1.resize(dim);
    k2.resize(dim);
    k3.resize(dim);
    k4.resize(dim);
    tmp.resize(dim);
    occ_row.resize(m.params.n_sites);
    tavg.resize(m.params.n_sites);
  }

  void apply_jump(CounterRng& rng, double dt_eff) {
    const double w_loss =
        model->gamma_loss * std::norm(psi(model->loss_site));
    const double w_gain = model->gamma_gain * std::norm(psi(0));
    const double total = w_loss + w_gain;
    if (!(total > 0.0)) {
      throw IntegratorFailure(
          "all jump channels have zero weight at a forced jump; the step is too "
          "large (effective dt = " +
          std::to_string(dt_eff) + ")");
    }
    const double u = rng.next_unit_open();
    psi.setZero();
    if (u * total < w_loss) {
      psi(0) = 1.0;  // particle removed at the loss site
    } else {
      psi(model->gain_site) = 1.0;  // vacuum refilled at the gain site
    }
    ++jumps;
    threshold = rng.next_unit_open();
  }

  // One nominal substep of length h. When the squared norm crosses the
  // waiting-time threshold the crossing is located by bisection, the jump is
  // applied, and the remainder of the substep is integrated with a fresh
  // threshold.
  void advance(double h, CounterRng& rng) {
    double remaining = h;
    int guard = 0;
    while (remaining > 1e-15 * h) {
      prev = psi;
      rk4_step(psi, remaining, rhs, k1, k2, k3, k4, tmp);
      if (psi.squaredNorm() > threshold) return;

      double lo = 0.0, hi = remaining;
      for (int iter = 0; iter < 40; ++iter) {
        const double mid = 0.5 * (lo + hi);
        psi = prev;
        rk4_step(psi, mid, rhs, k1, k2, k3, k4, tmp);
        if (psi.squaredNorm() > threshold) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      psi = prev;
      rk4_step(psi, hi, rhs, k1, k2, k3, k4, tmp);
      apply_jump(rng, h);
      remaining -= hi;
      if (++guard > 100000) {
        throw IntegratorFailure("jump cascade inside one step; effective dt = " +
                                std::to_string(h) + " is too large");
      }
    }
  }

  void record(int j, BlockAccumulator& acc) {
    const int n = model->params.n_sites;
    const double inv_norm = 1.0 / psi.squaredNorm();
    for (int i = 0; i < n; ++i) occ_row(i) = std::norm(psi(i + 1)) * inv_norm;
    const double vac = std::norm(psi(0)) * inv_norm;
    acc.sum_occ.row(j) += occ_row.transpose();
    acc.sumsq_occ.row(j) += occ_row.cwiseAbs2().transpose();
    acc.sum_vac(j) += vac;
    acc.sumsq_vac(j) += vac * vac;
    tavg += occ_row;
  }

  void run_one(std::uint64_t seed, std::uint64_t stream, BlockAccumulator& acc) {
    CounterRng rng(seed, stream);
    psi = *psi0;
    tavg.setZero();
    const bool open = model->gamma_loss > 0.0 || model->gamma_gain > 0.0;
    threshold = open ? rng.next_unit_open() : 0.0;

    const int sps = grid->steps_per_sample();
    const double h = grid->effective_dt();

    record(0, acc);
    for (int j = 1; j <= grid->sample_count; ++j) {
      for (int step = 0; step < sps; ++step) {
        if (open) {
          advance(h, rng);
        } else {
          rk4_step(psi, h, rhs, k1, k2, k3, k4, tmp);
        }
      }
      record(j, acc);
    }

    tavg /= static_cast<double>(grid->sample_count + 1);
    acc.sum_tavg += tavg;
    acc.sumsq_tavg += tavg.cwiseAbs2();
    const double final_norm2 = psi.squaredNorm();
    acc.min_final_norm2 = std::min(acc.min_final_norm2, final_norm2);
    acc.max_final_norm2 = std::max(acc.max_final_norm2, final_norm2);
  }
};

}  // namespace

TrajectoryRun sample_trajectories(const FockState& psi0, const TruncatedLindbladModel& model,
                                  const TimeGrid& grid, const TrajectoryOptions& options) {
  grid.validate();
  const int n = model.params.n_sites;
  if (psi0.n_sites() != n) {
    throw InvalidParameter("psi0", "state has " + std::to_string(psi0.n_sites()) +
                                       " sites, model has " + std::to_string(n));
  }
  if (std::abs(psi0.amplitudes.norm() - 1.0) > 1e-9) {
    throw InvalidParameter("psi0", "state must be normalized");
  }
  if (options.n_traj < 1) {
    throw InvalidParameter("n_traj", "must be >= 1, got " + std::to_string(options.n_traj));
  }
  const int block_size = std::max(1, options.block_size);
  const int n_blocks = (options.n_traj + block_size - 1) / block_size;
  const int rows = grid.sample_count + 1;

  std::vector<BlockAccumulator> blocks(static_cast<std::size_t>(n_blocks));

  parallel_for(n_blocks, options.n_threads, [&](int b) {
    BlockAccumulator& acc = blocks[static_cast<std::size_t>(b)];
    acc.sum_occ = MatrixXd::Zero(rows, n);
    acc.sumsq_occ = MatrixXd::Zero(rows, n);
    acc.sum_vac = VectorXd::Zero(rows);
    acc.sumsq_vac = VectorXd::Zero(rows);
    acc.sum_tavg = VectorXd::Zero(n);
    acc.sumsq_tavg = VectorXd::Zero(n);

    TrajectoryWorker worker(model, grid, psi0.amplitudes);
    const int first = b * block_size;
    const int last = std::min(options.n_traj, first + block_size);
    for (int k = first; k < last; ++k) {
      worker.run_one(options.seed, static_cast<std::uint64_t>(k), acc);
    }
    acc.jumps = worker.jumps;
  });

  // Merge in fixed block order: the grouping (blocks of block_size, then this
  // sequential sum) never depends on how many workers ran.
  MatrixXd sum_occ = MatrixXd::Zero(rows, n), sumsq_occ = MatrixXd::Zero(rows, n);
  VectorXd sum_vac = VectorXd::Zero(rows), sumsq_vac = VectorXd::Zero(rows);
  VectorXd sum_tavg = VectorXd::Zero(n), sumsq_tavg = VectorXd::Zero(n);
  std::int64_t jumps = 0;
  double min_norm2 = std::numeric_limits<double>::infinity();
  double max_norm2 = -std::numeric_limits<double>::infinity();
  for (const auto& acc : blocks) {
    sum_occ += acc.sum_occ;
    sumsq_occ += acc.sumsq_occ;
    sum_vac += acc.sum_vac;
    sumsq_vac += acc.sumsq_vac;
    sum_tavg += acc.sum_tavg;
    sumsq_tavg += acc.sumsq_tavg;
    jumps += acc.jumps;
    min_norm2 = std::min(min_norm2, acc.min_final_norm2);
    max_norm2 = std::max(max_norm2, acc.max_final_norm2);
  }

  const double nt = static_cast<double>(options.n_traj);
  auto stderr_of = [&](double sum, double sumsq) {
    if (options.n_traj < 2) return 0.0;
    const double var = std::max(0.0, (sumsq - sum * sum / nt) / (nt - 1.0));
    return std::sqrt(var / nt);
  };

  TrajectoryRun run;
  run.series = make_series(grid, n);
  for (int j = 0; j < rows; ++j) {
    for (int i = 0; i < n; ++i) {
      run.series.per_site_mean(j, i) = sum_occ(j, i) / nt;
      run.series.per_site_stderr(j, i) = stderr_of(sum_occ(j, i), sumsq_occ(j, i));
    }
    run.series.vacuum_prob[static_cast<std::size_t>(j)] = sum_vac(j) / nt;
  }
  run.time_average.per_site = sum_tavg / nt;
  run.time_average.per_site_stderr = VectorXd::Zero(n);
  for (int i = 0; i < n; ++i) {
    run.time_average.per_site_stderr(i) = stderr_of(sum_tavg(i), sumsq_tavg(i));
  }
  run.time_average.window = grid;
  run.total_jumps = jumps;
  run.min_final_norm2 = min_norm2;
  run.max_final_norm2 = max_norm2;
  return run;
}

OccupationSeries covariance_evolve_raw(const Eigen::MatrixXd& h_single_particle,
                                       const CovarianceMatrix& c0, const TimeGrid& grid,
                                       int loss_site, double gamma_loss, int gain_site,
                                       double gamma_gain, const SampleObserver& observer) {
  grid.validate();
  const int n = static_cast<int>(h_single_particle.rows());
  if (h_single_particle.cols() != n || c0.entries.rows() != n || c0.entries.cols() != n) {
    throw InvalidParameter("c0", "covariance matrix must match the Hamiltonian dimension");
  }
  if (gamma_loss > 0.0 && (loss_site < 1 || loss_site > n)) {
    throw InvalidParameter("loss_site", "must lie in [1, n]");
  }
  if (gamma_gain > 0.0 && (gain_site < 1 || gain_site > n)) {
    throw InvalidParameter("gain_site", "must lie in [1, n]");
  }
  const int l = loss_site - 1, g = gain_site - 1;

  MatrixXcd c = c0.entries;
  MatrixXcd k1(n, n), k2(n, n), k3(n, n), k4(n, n), tmp(n, n), work(n, n);
  auto rhs = [&](const MatrixXcd& y, MatrixXcd& dy) {
    // dC/dt = i(hC - Ch) + channels; with B = C h and C Hermitian, hC = B^dag
    work.noalias() = y * h_single_particle;
    dy = kI * (work.adjoint() - work);
    if (gamma_loss > 0.0) {
      dy.row(l) -= (0.5 * gamma_loss) * y.row(l);
      dy.col(l) -= (0.5 * gamma_loss) * y.col(l);
    }
    if (gamma_gain > 0.0) {
      dy.row(g) -= (0.5 * gamma_gain) * y.row(g);
      dy.col(g) -= (0.5 * gamma_gain) * y.col(g);
      dy(g, g) += gamma_gain;
    }
  };

  const int sps = grid.steps_per_sample();
  const double h = grid.effective_dt();
  OccupationSeries series = make_series(grid, n);

  auto record = [&](int j) {
    for (int i = 0; i < n; ++i) {
      const double occ = c(i, i).real();
      if (occ < -1e-6 || occ > 1.0 + 1e-6) {
        throw IntegratorFailure("covariance occupation bound violated: <n_" +
                                std::to_string(i + 1) + "> = " + std::to_string(occ) +
                                " at t = " +
                                std::to_string(series.sample_times[static_cast<std::size_t>(j)]) +
                                "; reduce dt (effective dt = " + std::to_string(h) + ")");
      }
      series.per_site_mean(j, i) = occ;
    }
    if (observer) observer(series.sample_times[static_cast<std::size_t>(j)], c);
  };

  record(0);
  for (int j = 1; j <= grid.sample_count; ++j) {
    for (int step = 0; step < sps; ++step) rk4_step(c, h, rhs, k1, k2, k3, k4, tmp);
    record(j);
  }
  return series;
}

OccupationSeries covariance_evolve(const CovarianceMatrix& c0, const ModelParams& params,
                                   const TimeGrid& grid, const CovarianceOptions& options,
                                   const SampleObserver& observer) {
  params.validate();
  const Eigen::MatrixXd h = build_ssh_hamiltonian(params).real_entries();
  return covariance_evolve_raw(h, c0, grid, 1, options.include_loss ? params.gamma : 0.0,
                               params.n_sites, options.include_gain ? params.gamma : 0.0,
                               observer);
}

}  // namespace sshgl
