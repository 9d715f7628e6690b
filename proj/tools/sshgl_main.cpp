// Command-line driver: spectrum / zak / evolve / sweep / oracle-check.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sshgl/cli_io.hpp"
#include "sshgl/errors.hpp"
#include "sshgl/experiments.hpp"
#include "sshgl/lindblad.hpp"
#include "sshgl/observables.hpp"
#include "sshgl/parallel.hpp"
#include "sshgl/spectral.hpp"
#include "sshgl/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace sshgl;

namespace {

struct CommonArgs {
  std::optional<std::string> config_path;
  std::string out_dir = "out";
  int threads = 0;
  std::map<std::string, std::string> overrides;
};

void add_common_options(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "config file (key = value lines)");
  cmd->add_option("--out", args.out_dir, "output directory")->capture_default_str();
  cmd->add_option("--threads", args.threads, "worker count (default: SSHGL_THREADS or cores)");

  static const std::vector<std::pair<std::string, std::string>> keys = {
      {"--n-sites", "n_sites"},     {"--hopping", "hopping"},
      {"--dimerization", "dimerization"}, {"--theta", "theta"},
      {"--gamma", "gamma"},         {"--t-end", "t_end"},
      {"--dt", "dt"},               {"--samples", "samples"},
      {"--n-traj", "n_traj"},       {"--seed", "seed"},
      {"--engine", "engine"},       {"--initial", "initial"},
      {"--theta-ref", "theta_ref"}, {"--windows", "windows"}};
  for (const auto& [flag, key] : keys) {
    const std::string k = key;
    cmd->add_option_function<std::string>(
        flag, [&args, k](const std::string& value) { args.overrides[k] = value; },
        "override config key '" + k + "'");
  }
}

RunConfig load_config(const CommonArgs& args) {
  return parse_config(args.config_path, args.overrides);
}

fs::path prepare_out_dir(const CommonArgs& args) {
  fs::path dir(args.out_dir);
  fs::create_directories(dir);
  return dir;
}

RunManifest make_manifest(const RunConfig& config, const std::string& engine_name,
                          double wall_time_s, std::vector<std::string> outputs) {
  RunManifest m;
  m.params = config.params;
  m.grid = config.grid;
  m.engine = engine_name;
  m.seed = config.seed;
  m.n_traj = config.n_traj;
  m.code_version = std::string(kVersion);
  m.wall_time_s = wall_time_s;
  m.output_paths = std::move(outputs);
  return m;
}

json spectrum_to_json(const SpectrumReport& report) {
  json states = json::array();
  for (int k = 0; k < report.dim(); ++k) {
    json s{{"re", report.eigenvalues(k).real()}, {"im", report.eigenvalues(k).imag()}};
    if (!report.labels.empty()) {
      const auto& label = report.labels[static_cast<std::size_t>(k)];
      s["is_midgap"] = label.is_midgap;
      s["edge_weight_left"] = label.edge_weight_left;
      s["edge_weight_right"] = label.edge_weight_right;
      s["is_pt_broken"] = label.is_pt_broken;
    }
    states.push_back(std::move(s));
  }
  return json{{"eigenvalues", states}, {"indeterminate", report.labels_indeterminate}};
}

void write_profile_csv(const fs::path& path, const Eigen::VectorXd& initial,
                       const TimeAveragedProfile& profile) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out << "site,initial_occ,mean_occ,stderr\n";
  for (int i = 0; i < profile.per_site.size(); ++i) {
    out << (i + 1) << ',' << format_double(initial(i)) << ','
        << format_double(profile.per_site(i)) << ',' << format_double(profile.per_site_stderr(i))
        << '\n';
  }
}

int cmd_spectrum(const CommonArgs& args, double pt_tol) {
  const auto start = std::chrono::steady_clock::now();
  const RunConfig config = load_config(args);
  const fs::path dir = prepare_out_dir(args);

  SpectrumReport hermitian = classify_edge_states(
      eigendecompose_hermitian(build_ssh_hamiltonian(config.params).real_entries()),
      config.params);
  int midgap = 0;
  for (const auto& label : hermitian.labels) midgap += label.is_midgap ? 1 : 0;

  json out{{"params", json{{"n_sites", config.params.n_sites},
                           {"hopping", config.params.hopping},
                           {"dimerization", config.params.dimerization},
                           {"theta", config.params.theta},
                           {"gamma", config.params.gamma}}},
           {"hermitian", spectrum_to_json(hermitian)},
           {"midgap_count", midgap},
           {"pt", nullptr},
           {"pt_breaking", nullptr}};

  if (config.params.gamma > 0.0) {
    SpectrumReport pt = classify_edge_states(
        eigendecompose_general(build_pt_hamiltonian(config.params).entries), config.params);
    const PtBreakingReport breaking = pt_breaking_report(pt, pt_tol);
    out["pt"] = spectrum_to_json(pt);
    out["pt_breaking"] =
        json{{"n_complex_pairs", breaking.n_complex_pairs}, {"max_imag", breaking.max_imag}};
    std::cout << "spectrum: N=" << config.params.n_sites << " midgap=" << midgap
              << " pt_pairs=" << breaking.n_complex_pairs
              << " max_imag=" << format_double(breaking.max_imag) << "\n";
  } else {
    std::cout << "spectrum: N=" << config.params.n_sites << " midgap=" << midgap << "\n";
  }

  const fs::path json_path = dir / "spectrum.json";
  {
    std::ofstream f(json_path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open '" + json_path.string() + "' for writing");
    f << out.dump(2) << "\n";
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_manifest(make_manifest(config, "spectrum", wall, {json_path.string()}),
                 (dir / "manifest.json").string());
  return 0;
}

int cmd_zak(const CommonArgs& args, int k_samples) {
  const auto start = std::chrono::steady_clock::now();
  const RunConfig config = load_config(args);
  const fs::path dir = prepare_out_dir(args);

  const TopologicalInvariant invariant = zak_phase(config.params, k_samples);
  std::cout << "zak: theta=" << format_double(config.params.theta)
            << " zak_phase=" << format_double(invariant.zak_phase)
            << " winding=" << invariant.winding_number << "\n";

  json out{{"theta", config.params.theta},
           {"zak_phase", invariant.zak_phase},
           {"winding_number", invariant.winding_number},
           {"k_samples", invariant.k_samples}};
  const fs::path json_path = dir / "zak.json";
  {
    std::ofstream f(json_path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open '" + json_path.string() + "' for writing");
    f << out.dump(2) << "\n";
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_manifest(make_manifest(config, "zak", wall, {json_path.string()}),
                 (dir / "manifest.json").string());
  return 0;
}

int cmd_evolve(const CommonArgs& args) {
  const auto start = std::chrono::steady_clock::now();
  const RunConfig config = load_config(args);
  const fs::path dir = prepare_out_dir(args);

  SnapshotOptions options;
  options.engine = config.engine;
  options.n_traj = config.n_traj;
  options.seed = config.seed;
  options.n_threads = args.threads;
  const SnapshotResult result =
      run_snapshot_experiment(config.initial, config.params, config.grid, options);

  const fs::path series_path = dir / "series.csv";
  const fs::path profile_path = dir / "profile.csv";
  write_series(result.series, series_path.string());
  write_profile_csv(profile_path, result.initial_profile, result.profile);

  int peak = 0;
  result.profile.per_site.maxCoeff(&peak);
  std::cout << "evolve: engine=" << engine_to_string(config.engine)
            << " initial=" << initial_to_string(config.initial) << " peak_site=" << (peak + 1)
            << " peak_occ=" << format_double(result.profile.per_site(peak)) << "\n";

  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_manifest(make_manifest(config, engine_to_string(config.engine), wall,
                               {series_path.string(), profile_path.string()}),
                 (dir / "manifest.json").string());
  return 0;
}

int cmd_sweep(const CommonArgs& args, std::optional<double> theta_min,
              std::optional<double> theta_max, std::optional<int> theta_points) {
  const auto start = std::chrono::steady_clock::now();
  const RunConfig config = load_config(args);
  const fs::path dir = prepare_out_dir(args);

  std::vector<double> grid;
  if (theta_min || theta_max || theta_points) {
    constexpr double pi = std::numbers::pi;
    const double lo = theta_min.value_or(0.05 * pi);
    const double hi = theta_max.value_or(0.95 * pi);
    const int count = theta_points.value_or(41);
    if (count < 1 || hi <= lo) {
      throw InvalidParameter("theta_grid", "need theta_min < theta_max and theta_points >= 1");
    }
    for (int i = 0; i < count; ++i) {
      grid.push_back(count == 1 ? lo : lo + (hi - lo) * i / (count - 1));
    }
  } else {
    grid = default_theta_grid();
  }

  SweepOptions options;
  options.engine = config.engine;
  options.windows = config.windows;
  options.n_traj = config.n_traj;
  options.seed = config.seed;
  options.n_threads = args.threads;
  const SweepResult result =
      run_theta_sweep(config.params, grid, config.initial, config.grid, options);

  const fs::path csv_path = dir / "sweep.csv";
  const fs::path json_path = dir / "sweep.json";
  write_sweep(result, csv_path.string(), json_path.string());

  std::cout << "sweep: points=" << result.thetas.size() << " windows=" << result.windows.size()
            << " kink_estimate="
            << (result.kink_estimate ? format_double(*result.kink_estimate) : "null") << "\n";

  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_manifest(make_manifest(config, engine_to_string(config.engine), wall,
                               {csv_path.string(), json_path.string()}),
                 (dir / "manifest.json").string());
  return 0;
}

int cmd_oracle_check(const CommonArgs& args) {
  const auto start = std::chrono::steady_clock::now();

  CommonArgs oracle_args = args;
  // desk-scale defaults; config/flags may override
  if (!oracle_args.overrides.count("n_sites") && !oracle_args.config_path) {
    oracle_args.overrides["n_sites"] = "6";
    oracle_args.overrides["t_end"] = "100";
    oracle_args.overrides["samples"] = "200";
    if (!oracle_args.overrides.count("n_traj")) oracle_args.overrides["n_traj"] = "2000";
    // density-matrix RK4 needs a finer step than the trajectory default to
    // stay inside its positivity guard
    if (!oracle_args.overrides.count("dt")) oracle_args.overrides["dt"] = "0.02";
  }
  const RunConfig config = load_config(oracle_args);
  const fs::path dir = prepare_out_dir(args);

  const FockState psi0 = prepare_initial_state(config.initial, config.params);
  const TruncatedLindbladModel model = build_truncated_lindblad(config.params);

  const OccupationSeries master = evolve_master_rk4(DensityMatrix::pure(psi0), model, config.grid);
  const TrajectoryRun traj = sample_trajectories(
      psi0, model, config.grid, {config.n_traj, config.seed, args.threads, 32});

  int total = 0, within = 0;
  for (int j = 0; j < master.n_samples(); ++j) {
    for (int i = 0; i < master.n_sites(); ++i) {
      const double diff = std::abs(traj.series.per_site_mean(j, i) - master.per_site_mean(j, i));
      const double se = traj.series.per_site_stderr(j, i);
      ++total;
      if (diff <= 3.0 * se + 1e-12) ++within;
    }
  }
  const double fraction = static_cast<double>(within) / total;
  const bool traj_ok = fraction >= 0.99;
  std::cout << (traj_ok ? "PASS" : "FAIL")
            << " trajectories-vs-master: " << format_double(fraction * 100.0)
            << "% of samples within 3 standard errors (need >= 99%)\n";

  // gain disabled: the single-particle truncation is exact, so the
  // covariance oracle and the master engine must agree to 1e-8
  const TruncatedLindbladModel no_gain = model.without_gain();
  const OccupationSeries master_ng =
      evolve_master_rk4(DensityMatrix::pure(psi0), no_gain, config.grid);
  const OccupationSeries cov_ng =
      covariance_evolve(CovarianceMatrix::from_state(psi0), config.params, config.grid,
                        {true, false});
  const double max_dev_ng =
      (master_ng.per_site_mean - cov_ng.per_site_mean).cwiseAbs().maxCoeff();
  const bool cov_ok = max_dev_ng < 1e-8;
  std::cout << (cov_ok ? "PASS" : "FAIL")
            << " covariance-vs-master (gain disabled): max deviation "
            << format_double(max_dev_ng) << " (need < 1e-8)\n";

  // full gain on: truncation differs from the untruncated model; the
  // deviation is recorded, not asserted
  const OccupationSeries cov_full =
      covariance_evolve(CovarianceMatrix::from_state(psi0), config.params, config.grid, {});
  const double max_dev_full =
      (master.per_site_mean - cov_full.per_site_mean).cwiseAbs().maxCoeff();
  std::cout << "INFO truncation-vs-full-Fock (gain on): max occupation deviation "
            << format_double(max_dev_full) << "\n";

  json out{{"trajectories_within_3se_fraction", fraction},
           {"covariance_gain_off_max_dev", max_dev_ng},
           {"covariance_gain_on_max_dev", max_dev_full},
           {"n_traj", config.n_traj},
           {"passed", traj_ok && cov_ok}};
  const fs::path json_path = dir / "oracle.json";
  {
    std::ofstream f(json_path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open '" + json_path.string() + "' for writing");
    f << out.dump(2) << "\n";
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_manifest(make_manifest(config, "oracle-check", wall, {json_path.string()}),
                 (dir / "manifest.json").string());
  return traj_ok && cov_ok ? 0 : 1;
}

int dispatch(const std::function<int()>& run) {
  try {
    return run();
  } catch (const ConfigError& e) {
    std::cerr << "error: " << json{{"error", e.what()}, {"key", e.key()}}.dump() << "\n";
  } catch (const InvalidParameter& e) {
    std::cerr << "error: " << json{{"error", e.what()}, {"key", e.key()}}.dump() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << json{{"error", e.what()}}.dump() << "\n";
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SSH chain with balanced single-particle gain and loss"};
  app.require_subcommand(1);

  CommonArgs spectrum_args, zak_args, evolve_args, sweep_args, oracle_args;
  int k_samples = 256;
  double pt_tol = 1e-8;
  std::optional<double> theta_min, theta_max;
  std::optional<int> theta_points;

  CLI::App* spectrum = app.add_subcommand("spectrum", "eigenvalues, edge labels, PT breaking");
  add_common_options(spectrum, spectrum_args);
  spectrum->add_option("--pt-tol", pt_tol, "imaginary-part tolerance")->capture_default_str();

  CLI::App* zak = app.add_subcommand("zak", "Zak phase / winding number of the bulk bands");
  add_common_options(zak, zak_args);
  zak->add_option("--k-samples", k_samples, "Brillouin-zone samples")->capture_default_str();

  CLI::App* evolve = app.add_subcommand("evolve", "time evolution snapshot");
  add_common_options(evolve, evolve_args);

  CLI::App* sweep = app.add_subcommand("sweep", "theta sweep with kink detection");
  add_common_options(sweep, sweep_args);
  sweep->add_option("--theta-min", theta_min, "lowest theta (radians)");
  sweep->add_option("--theta-max", theta_max, "highest theta (radians)");
  sweep->add_option("--theta-points", theta_points, "number of theta points");

  CLI::App* oracle = app.add_subcommand("oracle-check", "cross-engine consistency battery");
  add_common_options(oracle, oracle_args);

  CLI11_PARSE(app, argc, argv);

  if (spectrum->parsed()) return dispatch([&] { return cmd_spectrum(spectrum_args, pt_tol); });
  if (zak->parsed()) return dispatch([&] { return cmd_zak(zak_args, k_samples); });
  if (evolve->parsed()) return dispatch([&] { return cmd_evolve(evolve_args); });
  if (sweep->parsed()) return dispatch([&] { return cmd_sweep(sweep_args, theta_min, theta_max, theta_points); });
  if (oracle->parsed()) return dispatch([&] { return cmd_oracle_check(oracle_args); });
  return 1;
}
