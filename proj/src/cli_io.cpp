#include "sshgl/cli_io.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "sshgl/errors.hpp"
#include "sshgl/version.hpp"

namespace sshgl {

namespace {

using nlohmann::json;

const std::set<std::string> kValidKeys = {
    "n_sites", "hopping", "dimerization", "theta",     "gamma",   "t_end",  "dt",
    "samples", "n_traj",  "seed",         "engine",    "initial", "theta_ref", "windows"};

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

template <class T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  const char* first = value.data();
  const char* last = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || ptr != last) {
    throw ConfigError(key, "cannot parse '" + value + "' as a number");
  }
  return out;
}

std::vector<int> parse_windows(const std::string& value) {
  std::vector<int> windows;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    windows.push_back(parse_number<int>("windows", item));
  }
  if (windows.empty()) {
    throw ConfigError("windows", "expected a comma-separated list of positive integers");
  }
  return windows;
}

void apply_key(RunConfig& config, const std::string& key, const std::string& value) {
  if (key == "n_sites") {
    config.params.n_sites = parse_number<int>(key, value);
  } else if (key == "hopping") {
    config.params.hopping = parse_number<double>(key, value);
  } else if (key == "dimerization") {
    config.params.dimerization = parse_number<double>(key, value);
  } else if (key == "theta") {
    config.params.theta = parse_number<double>(key, value);
  } else if (key == "gamma") {
    config.params.gamma = parse_number<double>(key, value);
  } else if (key == "t_end") {
    config.grid.t_end = parse_number<double>(key, value);
  } else if (key == "dt") {
    config.grid.dt = parse_number<double>(key, value);
  } else if (key == "samples") {
    config.grid.sample_count = parse_number<int>(key, value);
  } else if (key == "n_traj") {
    config.n_traj = parse_number<int>(key, value);
    if (config.n_traj < 1) throw ConfigError(key, "must be >= 1, got " + value);
  } else if (key == "seed") {
    config.seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "engine") {
    config.engine = engine_from_string(value);
  } else if (key == "initial") {
    config.initial = initial_from_string(value, config.initial.theta_ref);
  } else if (key == "theta_ref") {
    config.initial.theta_ref = parse_number<double>(key, value);
  } else if (key == "windows") {
    config.windows = parse_windows(value);
  } else {
    std::string valid;
    for (const auto& k : kValidKeys) valid += (valid.empty() ? "" : ", ") + k;
    throw ConfigError(key, "unknown key; valid keys are: " + valid);
  }
}

}  // namespace

RunConfig parse_config(const std::optional<std::string>& path,
                       const std::map<std::string, std::string>& overrides) {
  RunConfig config;

  if (path) {
    std::ifstream in(*path);
    if (!in) throw ConfigError("config", "cannot open config file '" + *path + "'");
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const auto comment = line.find('#');
      if (comment != std::string::npos) line.erase(comment);
      line = trim(line);
      if (line.empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos) {
        throw ConfigError("config", "line " + std::to_string(lineno) +
                                        " is not of the form 'key = value'");
      }
      apply_key(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
  }

  // theta_ref first so an initial override sees the final reference angle
  if (auto it = overrides.find("theta_ref"); it != overrides.end()) {
    apply_key(config, it->first, it->second);
  }
  for (const auto& [key, value] : overrides) {
    if (key == "theta_ref") continue;
    apply_key(config, key, value);
  }

  config.params.validate();
  config.grid.validate();
  return config;
}

std::string engine_to_string(Engine engine) {
  switch (engine) {
    case Engine::spectral: return "spectral";
    case Engine::trajectories: return "trajectories";
    case Engine::master: return "master";
  }
  throw std::logic_error("unreachable engine");
}

Engine engine_from_string(const std::string& text) {
  if (text == "spectral") return Engine::spectral;
  if (text == "trajectories") return Engine::trajectories;
  if (text == "master") return Engine::master;
  throw ConfigError("engine", "must be one of spectral, trajectories, master; got '" + text + "'");
}

std::string initial_to_string(const InitialStateSpec& spec) {
  switch (spec.kind) {
    case InitialStateKind::edge_right: return "edge_right";
    case InitialStateKind::edge_left: return "edge_left";
    case InitialStateKind::vacuum: return "vacuum";
    case InitialStateKind::bulk:
      return spec.bulk_index ? "bulk:" + std::to_string(*spec.bulk_index) : "bulk";
    case InitialStateKind::site:
      return "site:" + std::to_string(spec.site_index.value_or(0));
  }
  throw std::logic_error("unreachable initial kind");
}

InitialStateSpec initial_from_string(const std::string& text, double theta_ref) {
  InitialStateSpec spec;
  spec.theta_ref = theta_ref;
  if (text == "edge_right") {
    spec.kind = InitialStateKind::edge_right;
  } else if (text == "edge_left") {
    spec.kind = InitialStateKind::edge_left;
  } else if (text == "vacuum") {
    spec.kind = InitialStateKind::vacuum;
  } else if (text == "bulk") {
    spec.kind = InitialStateKind::bulk;
  } else if (text.rfind("bulk:", 0) == 0) {
    spec.kind = InitialStateKind::bulk;
    spec.bulk_index = parse_number<int>("initial", text.substr(5));
  } else if (text.rfind("site:", 0) == 0) {
    spec.kind = InitialStateKind::site;
    spec.site_index = parse_number<int>("initial", text.substr(5));
  } else {
    throw ConfigError("initial",
                      "must be edge_right, edge_left, bulk[:<index>], site:<site>, or vacuum; "
                      "got '" +
                          text + "'");
  }
  return spec;
}

namespace {

json params_to_json(const ModelParams& p) {
  return json{{"n_sites", p.n_sites},
              {"hopping", p.hopping},
              {"dimerization", p.dimerization},
              {"theta", p.theta},
              {"gamma", p.gamma}};
}

ModelParams params_from_json(const json& j) {
  ModelParams p;
  p.n_sites = j.at("n_sites").get<int>();
  p.hopping = j.at("hopping").get<double>();
  p.dimerization = j.at("dimerization").get<double>();
  p.theta = j.at("theta").get<double>();
  p.gamma = j.at("gamma").get<double>();
  return p;
}

}  // namespace

std::string manifest_to_json(const RunManifest& m) {
  json j{{"params", params_to_json(m.params)},
         {"grid", json{{"t_end", m.grid.t_end}, {"dt", m.grid.dt}, {"samples", m.grid.sample_count}}},
         {"engine", m.engine},
         {"seed", m.seed},
         {"n_traj", m.n_traj},
         {"code_version", m.code_version},
         {"wall_time_s", m.wall_time_s},
         {"output_paths", m.output_paths}};
  return j.dump(2) + "\n";
}

RunManifest manifest_from_json(const std::string& text) {
  const json j = json::parse(text);
  RunManifest m;
  m.params = params_from_json(j.at("params"));
  m.grid.t_end = j.at("grid").at("t_end").get<double>();
  m.grid.dt = j.at("grid").at("dt").get<double>();
  m.grid.sample_count = j.at("grid").at("samples").get<int>();
  m.engine = j.at("engine").get<std::string>();
  m.seed = j.at("seed").get<std::uint64_t>();
  m.n_traj = j.at("n_traj").get<int>();
  m.code_version = j.at("code_version").get<std::string>();
  m.wall_time_s = j.at("wall_time_s").get<double>();
  m.output_paths = j.at("output_paths").get<std::vector<std::string>>();
  return m;
}

void write_manifest(const RunManifest& manifest, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << manifest_to_json(manifest);
}

RunManifest read_manifest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return manifest_from_json(buffer.str());
}

std::string format_double(double value) {
  char buf[40];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

void write_series(const OccupationSeries& series, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << "time,site,mean_occ,stderr,vacuum_prob\n";
  for (int j = 0; j < series.n_samples(); ++j) {
    const std::string time = format_double(series.sample_times[static_cast<std::size_t>(j)]);
    const std::string vac = format_double(series.vacuum_prob[static_cast<std::size_t>(j)]);
    for (int i = 0; i < series.n_sites(); ++i) {
      out << time << ',' << (i + 1) << ',' << format_double(series.per_site_mean(j, i)) << ','
          << format_double(series.per_site_stderr(j, i)) << ',' << vac << '\n';
    }
  }
}

void write_sweep(const SweepResult& result, const std::string& csv_path,
                 const std::string& json_path) {
  {
    std::ofstream out(csv_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + csv_path + "' for writing");
    out << "theta,window,edge_occ\n";
    for (std::size_t i = 0; i < result.thetas.size(); ++i) {
      for (std::size_t w = 0; w < result.windows.size(); ++w) {
        out << format_double(result.thetas[i]) << ',' << result.windows[w] << ','
            << format_double(result.edge_occ(static_cast<int>(i), static_cast<int>(w))) << '\n';
      }
    }
  }
  json j{{"kink_estimate", nullptr},
         {"thetas", result.thetas},
         {"windows", result.windows},
         {"runtime_s", result.runtime_s}};
  if (result.kink_estimate) j["kink_estimate"] = *result.kink_estimate;
  std::ofstream out(json_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + json_path + "' for writing");
  out << j.dump(2) << "\n";
}

}  // namespace sshgl
