#include <doctest.h>

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "sshgl/cli_io.hpp"
#include "sshgl/errors.hpp"
#include "sshgl/lindblad.hpp"

using namespace sshgl;
using std::numbers::pi;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() / "sshgl_test_io";
    std::filesystem::create_directories(path);
  }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("empty config yields the paper defaults") {
  const RunConfig config = parse_config(std::nullopt, {});
  CHECK(config.params.n_sites == 200);
  CHECK(config.params.hopping == 1.0);
  CHECK(config.params.dimerization == 0.3);
  CHECK(config.params.gamma == 0.1);
  CHECK(config.grid.t_end == 25000.0);
  CHECK(config.grid.dt == 0.05);
  CHECK(config.grid.sample_count == 1000);
  CHECK(config.seed == 42);
  CHECK(config.engine == Engine::trajectories);
  CHECK(config.windows == std::vector<int>{1, 3, 5, 20});
}

TEST_CASE("config file parsing, overrides, and diagnostics") {
  TempDir dir;
  const std::string cfg = dir.file("run.cfg");
  {
    std::ofstream out(cfg);
    out << "# comment line\n"
        << "n_sites = 100\n"
        << "gamma = 0.1\n"
        << "theta = 0.31\n"
        << "windows = 1, 3,5 ,20\n"
        << "initial = site:7\n";
  }

  SUBCASE("file values are picked up") {
    const RunConfig config = parse_config(cfg, {});
    CHECK(config.params.n_sites == 100);
    CHECK(config.params.theta == 0.31);
    CHECK(config.initial.kind == InitialStateKind::site);
    CHECK(config.initial.site_index == 7);
  }

  SUBCASE("flags override file values") {
    const RunConfig config = parse_config(cfg, {{"gamma", "0.0"}, {"engine", "spectral"}});
    CHECK(config.params.gamma == 0.0);
    CHECK(config.engine == Engine::spectral);
  }

  SUBCASE("unknown keys name themselves") {
    {
      std::ofstream out(cfg, std::ios::app);
      out << "hoppings = 2\n";
    }
    CHECK_THROWS_WITH_AS(parse_config(cfg, {}), doctest::Contains("hoppings"), ConfigError);
  }

  SUBCASE("out-of-range values name the key and the valid range") {
    CHECK_THROWS_WITH_AS(parse_config(cfg, {{"n_sites", "101"}}), doctest::Contains("even"),
                         InvalidParameter);
    CHECK_THROWS_WITH_AS(parse_config(cfg, {{"dt", "500"}}), doctest::Contains("dt"),
                         InvalidParameter);
    CHECK_THROWS_AS(parse_config(cfg, {{"dimerization", "1.5"}}), InvalidParameter);
    CHECK_THROWS_AS(parse_config(cfg, {{"n_traj", "0"}}), ConfigError);
    CHECK_THROWS_AS(parse_config(cfg, {{"samples", "abc"}}), ConfigError);
  }
}

TEST_CASE("initial and engine string round trips") {
  for (const std::string text :
       {"edge_right", "edge_left", "bulk", "bulk:12", "site:5", "vacuum"}) {
    CHECK(initial_to_string(initial_from_string(text, 0.1 * pi)) == text);
  }
  CHECK_THROWS_AS(initial_from_string("edge", 0.1 * pi), ConfigError);
  for (const std::string text : {"spectral", "trajectories", "master"}) {
    CHECK(engine_to_string(engine_from_string(text)) == text);
  }
  CHECK_THROWS_AS(engine_from_string("exact"), ConfigError);
}

TEST_CASE("manifest round-trips losslessly") {
  RunManifest manifest;
  manifest.params = ModelParams{100, 1.0, 0.3, 0.1 * pi, 0.1};
  manifest.grid = TimeGrid{2500.0, 0.05, 1000};
  manifest.engine = "trajectories";
  manifest.seed = 0xDEADBEEFCAFEBABEULL;
  manifest.n_traj = 200;
  manifest.code_version = "0.1.0";
  manifest.wall_time_s = 0.12345678901234567;
  manifest.output_paths = {"out/series.csv", "out/profile.csv"};

  const RunManifest parsed = manifest_from_json(manifest_to_json(manifest));
  CHECK(parsed == manifest);

  TempDir dir;
  write_manifest(manifest, dir.file("manifest.json"));
  CHECK(read_manifest(dir.file("manifest.json")) == manifest);
}

TEST_CASE("format_double is shortest round-trip") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(0.0) == "0");
  CHECK(format_double(1e-9) == "1e-09");

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int i = 0; i < 50; ++i) {
    const double x = u(rng);
    const std::string s = format_double(x);
    double back = 0.0;
    const auto result = std::from_chars(s.data(), s.data() + s.size(), back);
    REQUIRE(result.ec == std::errc());
    CHECK(back == x);
  }
}

TEST_CASE("series CSV: frozen golden file, (time, site) ordering") {
  OccupationSeries series;
  series.grid = TimeGrid{1.0, 0.5, 1};
  series.sample_times = {0.0, 1.0};
  series.per_site_mean.resize(2, 2);
  series.per_site_mean << 0.0, 1.0, 0.25, 0.5;
  series.per_site_stderr = Eigen::MatrixXd::Zero(2, 2);
  series.per_site_stderr(1, 1) = 0.125;
  series.vacuum_prob = {0.0, 0.25};

  TempDir dir;
  write_series(series, dir.file("series.csv"));
  CHECK(slurp(dir.file("series.csv")) ==
        "time,site,mean_occ,stderr,vacuum_prob\n"
        "0,1,0,0,0\n"
        "0,2,1,0,0\n"
        "1,1,0.25,0,0.25\n"
        "1,2,0.5,0.125,0.25\n");
}

TEST_CASE("sweep CSV and JSON companion") {
  SweepResult result;
  result.thetas = {0.3};
  result.windows = {10};
  result.edge_occ = Eigen::MatrixXd::Constant(1, 1, 0.75);
  result.runtime_s = {0.5};
  result.kink_estimate = std::nullopt;

  TempDir dir;
  write_sweep(result, dir.file("sweep.csv"), dir.file("sweep.json"));
  CHECK(slurp(dir.file("sweep.csv")) == "theta,window,edge_occ\n0.3,10,0.75\n");
  CHECK(slurp(dir.file("sweep.json")).find("\"kink_estimate\": null") != std::string::npos);

  result.kink_estimate = 1.5;
  write_sweep(result, dir.file("sweep.csv"), dir.file("sweep.json"));
  CHECK(slurp(dir.file("sweep.json")).find("\"kink_estimate\": 1.5") != std::string::npos);
}

TEST_CASE("rerunning an identical ensemble writes byte-identical files") {
  const ModelParams p{6, 1.0, 0.3, 0.1 * pi, 0.1};
  const auto model = build_truncated_lindblad(p);
  const FockState psi0 = FockState::site(6, 6);
  const TimeGrid grid{10.0, 0.05, 20};

  TempDir dir;
  const auto a = sample_trajectories(psi0, model, grid, {50, 123, 2});
  write_series(a.series, dir.file("a.csv"));
  const auto b = sample_trajectories(psi0, model, grid, {50, 123, 1});
  write_series(b.series, dir.file("b.csv"));
  CHECK(slurp(dir.file("a.csv")) == slurp(dir.file("b.csv")));
  CHECK(!slurp(dir.file("a.csv")).empty());
}
