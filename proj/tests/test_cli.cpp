#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "boussinesq/runner.hpp"

using namespace boussinesq;
using namespace boussinesq::cli;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string message_of(const std::string& text) {
  try {
    parse_config_text(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("config parsing") {
  const ExperimentConfig c = parse_config_text(
      "; comment\n[grid]\ndimension = 2\npoints = 128\nperiod = 4pi\n[dispersion]\nbeta = 1\n"
      "[experiment]\ntype = strichartz\nlambdas = 4, 8\nT = 2\n[output]\ndirectory = out\n");
  CHECK(c.dimension == 2);
  CHECK(c.period == doctest::Approx(4 * kPi));
  CHECK(c.type == ExperimentType::kStrichartz);
  CHECK(c.reals("lambdas") == std::vector<Real>{4, 8});
  CHECK(c.text("r") == "4");
  CHECK(c.output == "out");
  CHECK_FALSE(c.optional_real("expect_min"));
}

TEST_CASE("config errors") {
  CHECK(message_of("[dispersion]\nbeta = 2\n[experiment]\ntype = decay\n").find("beta must be -1, 0, or 1") !=
        std::string::npos);
  CHECK(message_of("[grid]\npoints = 100\n[dispersion]\nbeta = 1\n[experiment]\ntype = decay\n")
            .find("grid.points") != std::string::npos);
  CHECK(message_of("[dispersion]\nbeta = 1\n[experiment]\ntype = decay\nlamda = 4\n").find("experiment.lamda") !=
        std::string::npos);
  CHECK(message_of("[dispersion]\nbeta = 1\n[experiment]\ntype = decay\n[extra]\nx = 1\n").find("[extra]") !=
        std::string::npos);
  CHECK(message_of("[dispersion]\nbeta = 1\n[experiment]\ntype = decay\nlambda = abc\n").find("line 5") !=
        std::string::npos);
  CHECK(message_of("[dispersion]\nbeta = 1\n[experiment]\ntype = fly\n").find("unknown experiment type") !=
        std::string::npos);
  CHECK(message_of("[experiment]\ntype = decay\n").find("dispersion.beta") != std::string::npos);
  CHECK(message_of("[dispersion]\nbeta = 1\nbeta = 0\n[experiment]\ntype = decay\n").find("line 3") !=
        std::string::npos);
  CHECK(message_of("[grid]\npoints = 64\n[dispersion]\nbeta = 1\n[experiment]\ntype = strichartz\nlambdas = 8,16\n")
            .find("Nyquist") != std::string::npos);
  CHECK(message_of("[dispersion]\nbeta = 1\n[experiment]\ntype = strichartz\nr = 4\n").find("admissible") !=
        std::string::npos);
  CHECK(message_of("[dispersion]\nbeta = 1\n[experiment]\ntype = evolve\nrecord_every = 3\nsnapshot_every = 4\n")
            .find("snapshot_every") != std::string::npos);
  CHECK(message_of("[grid]\ndimension = 2\n[dispersion]\nbeta = 1\n[experiment]\ntype = gevrey-track\n")
            .find("dimension") != std::string::npos);
}

TEST_CASE("JSON round trip for every experiment type") {
  for (const char* type : {"dispersion", "decay", "strichartz", "bilinear", "evolve", "gevrey-track"}) {
    const ExperimentConfig c = parse_config_text(std::string("[grid]\npoints = 32768\nperiod = 64pi\n[dispersion]\nbeta = 1\n"
                                                             "[experiment]\nseed = 77\ntype = ") + type + "\n");
    CAPTURE(type);
    CHECK(config_from_json(to_json(c)) == c);
  }
}

TEST_CASE("dry run") {
  TempDir dir("boussinesq-cli-dry");
  RunOptions o;
  o.output = dir.path;
  o.dry_run = true;
  const ExperimentConfig c = parse_config_text("[dispersion]\nbeta = -1\n[experiment]\ntype = decay\n");
  const RunOutcome r = run_experiment(c, o);
  CHECK(fs::exists(r.directory / "manifest.json"));
  CHECK_FALSE(fs::exists(r.directory / "summary.json"));
  const auto manifest = nlohmann::ordered_json::parse(slurp(r.directory / "manifest.json"));
  CHECK(config_from_json(manifest.at("config")) == c);
  CHECK(manifest.at("dry_run").get<bool>());
}

TEST_CASE("dispersion run and a failing band") {
  TempDir dir("boussinesq-cli-dispersion");
  RunOptions o;
  o.output = dir.path;
  const RunOutcome r =
      run_experiment(parse_config_text("[dispersion]\nbeta = -1\n[experiment]\ntype = dispersion\nsamples = 11\n"), o);
  CHECK(r.exit_code == kExitOk);
  CHECK(r.summary["status"] == "ok");
  const std::string csv = slurp(r.directory / "dispersion.csv");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 12);

  const RunOutcome bad = run_experiment(
      parse_config_text("[dispersion]\nbeta = 1\n[experiment]\ntype = evolve\nsteps = 10\ndrift_max = -1\n"), o);
  CHECK(bad.exit_code == kExitCheckFailed);
  CHECK(bad.summary["status"] == "check_failed");
}

TEST_CASE("module errors land in the summary") {
  TempDir dir("boussinesq-cli-error");
  RunOptions o;
  o.output = dir.path;
  const RunOutcome r = run_experiment(
      parse_config_text("[grid]\npoints = 64\nperiod = 8pi\n[dispersion]\nbeta = 1\n[experiment]\ntype = evolve\n"
                        "nonlinearity = minus_cube\namplitude = 200\ndt = 1e-2\nsteps = 2000\n"),
      o);
  CHECK(r.exit_code == kExitRuntime);
  CHECK(r.summary["status"] == "error");
  CHECK(fs::exists(r.directory / "trajectory.csv"));
}

TEST_CASE("decay run gives seven rows and a fit") {
  TempDir dir("boussinesq-cli-decay");
  RunOptions o;
  o.output = dir.path;
  const ExperimentConfig c = parse_config_text(
      "[dispersion]\nbeta = -1\n[experiment]\ntype = decay\nlambda = 8\ntimes = 0.25,0.5,1,2,4,8,16\nlog_points = 256\n"
      "expect_min = -0.65\nexpect_max = -0.35\n");
  const RunOutcome r = run_experiment(c, o);
  CHECK(r.exit_code == kExitOk);
  const std::string csv = slurp(r.directory / "decay.csv");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 8);
  const auto summary = nlohmann::ordered_json::parse(slurp(r.directory / "summary.json"));
  CHECK(summary["results"]["fit"]["exponent"].get<double>() == doctest::Approx(-0.5).epsilon(0.15));
}

TEST_CASE("re-runs reproduce CSVs byte for byte") {
  TempDir dir("boussinesq-cli-rerun");
  RunOptions o;
  o.output = dir.path;
  const ExperimentConfig c = parse_config_text(
      "[grid]\npoints = 2048\nperiod = 16pi\n[dispersion]\nbeta = 1\n[experiment]\ntype = bilinear\nseed = 5\n"
      "lambda_sweep = 8,16\ndraws = 2\ntime_samples = 16\n");
  const RunOutcome a = run_experiment(c, o), b = run_experiment(c, o);
  CHECK(a.directory != b.directory);
  const std::string x = slurp(a.directory / "bilinear.csv");
  CHECK(x.size() > 100);
  CHECK(x == slurp(b.directory / "bilinear.csv"));
}

TEST_CASE("verify suite") {
  std::ostringstream out;
  const auto results = verify_all(out, 0);
  CHECK(results.size() >= 40);
  for (const auto& r : results) {
    CAPTURE(r.name);
    CHECK(r.passed);
  }
}

}
