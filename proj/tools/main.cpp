#include <iostream>

#include <CLI11.hpp>

#include "app/commands.hpp"
#include "app/config.hpp"
#include "app/report.hpp"
#include "gbm_cutoff/error.hpp"

namespace {

constexpr int kExitError = 1;
constexpr int kExitUsage = 2;
constexpr int kExitVerifyFailed = 3;

void print_error(const std::string& code, const std::string& message) {
  std::string flat = message;
  for (char& c : flat) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  std::cerr << "error: " << code << ": " << flat << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cutoff times, mixing times and Monte Carlo checks for matrix geometric Brownian motion",
               "gbm-cutoff"};
  std::string command;
  std::string config_path;
  gbm::cli::Overrides o;
  std::uint64_t seed = 0;
  long paths = 0;
  double dt = 0.0;
  std::string out;

  app.add_option("command", command, "Command to run")
      ->required()
      ->check(CLI::IsMember(gbm::cli::command_names()));
  app.add_option("--config", config_path, "JSON run configuration");
  app.add_option("--eps", o.eps, "Replace eps_list (repeatable)");
  auto* seed_opt = app.add_option("--seed", seed, "Monte Carlo seed");
  auto* paths_opt = app.add_option("--paths", paths, "Monte Carlo path count");
  auto* dt_opt = app.add_option("--dt", dt, "Euler-Maruyama / Magnus step");
  auto* out_opt = app.add_option("--out", out, "Output file (stdout when absent)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    print_error("usage", e.what());
    return kExitUsage;
  }
  if (*seed_opt) o.seed = seed;
  if (*paths_opt) o.paths = paths;
  if (*dt_opt) o.dt = dt;
  if (*out_opt) o.out = out;

  try {
    gbm::cli::RunConfig cfg;
    if (!config_path.empty()) {
      cfg = gbm::cli::load_config(config_path);
    } else if (command != "example35") {
      print_error("missing_config", "--config is required for " + command);
      return kExitUsage;
    }
    gbm::cli::apply_overrides(cfg, o);
    gbm::cli::validate(cfg);
    const gbm::cli::CommandResult r = gbm::cli::run_command(command, cfg);
    gbm::cli::write_output(cfg.output, r.content);
    if (r.verify_failed) {
      print_error("verify_failed", "at least one t exceeds 3 standard errors");
      return kExitVerifyFailed;
    }
  } catch (const gbm::Error& e) {
    print_error(e.code(), e.message());
    return kExitError;
  } catch (const std::exception& e) {
    print_error("internal", e.what());
    return kExitError;
  }
  return 0;
}
