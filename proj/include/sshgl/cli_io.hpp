#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sshgl/experiments.hpp"
#include "sshgl/model.hpp"
#include "sshgl/observables.hpp"
#include "sshgl/state.hpp"

namespace sshgl {

// One fully resolved run: paper-default parameters unless a config file or a
// flag override says otherwise (flags win over the file).
struct RunConfig {
  ModelParams params{200, 1.0, 0.3, 0.31415926535897932, 0.1};
  TimeGrid grid{25000.0, 0.05, 1000};
  Engine engine = Engine::trajectories;
  InitialStateSpec initial{};
  int n_traj = 1000;
  std::uint64_t seed = 42;
  std::vector<int> windows = {1, 3, 5, 20};
};

// Flat "key = value" config file ('#' comments). Valid keys: n_sites,
// hopping, dimerization, theta, gamma, t_end, dt, samples, n_traj, seed,
// engine, initial, theta_ref, windows. Unknown keys and out-of-range values
// raise ConfigError/InvalidParameter naming the key and the valid range.
RunConfig parse_config(const std::optional<std::string>& path,
                       const std::map<std::string, std::string>& overrides);

std::string engine_to_string(Engine engine);
Engine engine_from_string(const std::string& text);

// "edge_right", "edge_left", "vacuum", "bulk[:<0-based index>]",
// "site:<1-based site>".
std::string initial_to_string(const InitialStateSpec& spec);
InitialStateSpec initial_from_string(const std::string& text, double theta_ref);

struct RunManifest {
  ModelParams params;
  TimeGrid grid;
  std::string engine;
  std::uint64_t seed = 0;
  int n_traj = 0;
  std::string code_version;
  double wall_time_s = 0.0;
  std::vector<std::string> output_paths;

  bool operator==(const RunManifest&) const = default;
};

std::string manifest_to_json(const RunManifest& manifest);
RunManifest manifest_from_json(const std::string& text);
void write_manifest(const RunManifest& manifest, const std::string& path);
RunManifest read_manifest(const std::string& path);

// CSV "time,site,mean_occ,stderr,vacuum_prob", rows ordered by (time, site),
// doubles printed as shortest round-trip decimals.
void write_series(const OccupationSeries& series, const std::string& path);

// CSV "theta,window,edge_occ" plus a JSON companion carrying kink_estimate
// (null when undefined), thetas, windows, and per-theta runtimes.
void write_sweep(const SweepResult& result, const std::string& csv_path,
                 const std::string& json_path);

// Shortest round-trip decimal form of a double.
std::string format_double(double value);

}  // namespace sshgl
