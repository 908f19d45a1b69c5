// Command-line front end: one experiment per invocation, or the verify suite.
#include <iostream>

#include <CLI11.hpp>

#include "boussinesq/dispersion.hpp"
#include "boussinesq/runner.hpp"

namespace cli = boussinesq::cli;

namespace {

struct ExperimentFlags {
  std::string config;
  std::string out;
  std::uint64_t seed = 0;
  int threads = 1;
  bool dry_run = false;
};

int run(cli::ExperimentType type, const ExperimentFlags& flags, const CLI::App& sub) {
  cli::ExperimentConfig config;
  try {
    config = cli::parse_config(flags.config);
    if (config.type != type)
      throw cli::ConfigError("config describes a " + std::string(cli::to_string(config.type)) +
                             " experiment, not " + std::string(cli::to_string(type)));
    if (sub.count("--seed")) config.seed = flags.seed;
  } catch (const cli::ConfigError& e) {
    std::cerr << "config error: " << flags.config << ": " << e.what() << '\n';
    return cli::kExitConfig;
  }
  cli::RunOptions options;
  if (!flags.out.empty()) options.output = flags.out;
  options.dry_run = flags.dry_run;
  options.threads = flags.threads;
  try {
    const cli::RunOutcome outcome = cli::run_experiment(config, options);
    std::cout << outcome.directory.string() << '\n';
    if (!flags.dry_run) {
      std::cout << "status: " << outcome.summary.value("status", "") << '\n';
      if (outcome.summary.contains("error")) std::cerr << outcome.summary["error"].get<std::string>() << '\n';
    }
    return outcome.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kExitRuntime;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dispersion, decay and solver experiments for the sixth-order Boussinesq equation"};
  app.require_subcommand(1);

  constexpr cli::ExperimentType kTypes[] = {cli::ExperimentType::kDispersion, cli::ExperimentType::kDecay,
                                            cli::ExperimentType::kStrichartz, cli::ExperimentType::kBilinear,
                                            cli::ExperimentType::kEvolve,     cli::ExperimentType::kGevreyTrack};
  ExperimentFlags flags;
  int code = 0;
  for (const auto type : kTypes) {
    CLI::App* sub = app.add_subcommand(std::string(cli::to_string(type)), "run the " + std::string(cli::to_string(type)) + " experiment");
    sub->add_option("--config", flags.config, "experiment config (INI)")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", flags.out, "results root, overrides [output] directory");
    sub->add_option("--seed", flags.seed, "overrides [experiment] seed");
    sub->add_option("--threads", flags.threads, "worker threads for kernel scans")->check(CLI::PositiveNumber);
    sub->add_flag("--dry-run", flags.dry_run, "write the manifest only");
    sub->callback([&, type, sub] { code = run(type, flags, *sub); });
  }

  std::uint64_t verify_seed = 0;
  std::string fault;
  CLI::App* verify = app.add_subcommand("verify", "run the built-in check suite");
  verify->add_option("--seed", verify_seed, "seed for random test data");
  verify->add_option("--inject-fault", fault, "")->group("")->check(CLI::IsMember({"phase-sign"}));
  verify->callback([&] {
    if (fault == "phase-sign") boussinesq::detail::phase_fault_sign = -1;
    std::size_t failed = 0;
    for (const auto& r : cli::verify_all(std::cout, verify_seed)) failed += !r.passed;
    code = failed ? cli::kExitCheckFailed : cli::kExitOk;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int status = app.exit(e);
    return status == 0 ? 0 : cli::kExitConfig;
  }
  return code;
}
