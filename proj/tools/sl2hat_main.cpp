#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "harness/harness.hpp"

namespace h = sl2hat::harness;

int main(int argc, char** argv) {
  CLI::App app{"sl2hat: affine sl2 characters, tilted chains and conditioned Brownian motion"};
  app.set_version_flag("--version", "0.3.0");

  // Flags are collected as text so that the config file and the command line
  // share one parser and one set of error messages.
  const std::vector<std::pair<std::string, std::string>> flags{
      {"command", "verify | sample-chain | sample-diffusion | converge | interval-limit"},
      {"n", "comma-separated scaling parameters, ascending (default 25,50,100,200)"},
      {"t", "time horizon"},
      {"x", "start position, 0 < x < u"},
      {"u", "time offset of the domain"},
      {"c", "slope of the upper boundary for sample-diffusion, 0 < c <= 1"},
      {"c-list", "comma-separated slopes for interval-limit"},
      {"paths", "number of Monte Carlo paths"},
      {"dt", "Euler step"},
      {"depth-cut", "delta-depth cut for depth-resolved rows"},
      {"eps", "series tolerance"},
      {"seed", "master seed"},
      {"out", "output directory (default $SL2HAT_OUT_DIR or .)"},
      {"dump-paths", "write this many full diffusion trajectories"},
      {"workers", "worker threads, 0 = SL2HAT_THREADS or hardware"},
  };
  std::map<std::string, std::string> given;
  for (const auto& [name, help] : flags) app.add_option("--" + name, given[name], help);
  std::string config_path;
  app.add_option("--config", config_path, "key = value file; command-line flags take precedence");
  bool fault = false;
  app.add_flag("--inject-phi0-sign-fault", fault, "negate phi_0 inside verify (negative control)")
      ->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return static_cast<int>(h::ExitStatus::config_error);
  }

  h::RunConfig cfg;
  cfg.out_dir = h::default_out_dir();
  cfg.fault_phi0_sign = fault;
  try {
    if (!config_path.empty()) {
      for (const auto& [key, value] : h::read_config_file(config_path)) h::apply_setting(cfg, key, value);
    }
    for (const auto& [name, help] : flags) {
      if (app.count("--" + name) > 0) h::apply_setting(cfg, name, given[name]);
    }
    h::validate(cfg);
  } catch (const h::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return static_cast<int>(h::ExitStatus::config_error);
  }

  try {
    return static_cast<int>(h::run(cfg, std::cout));
  } catch (const h::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return static_cast<int>(h::ExitStatus::config_error);
  } catch (const std::domain_error& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return static_cast<int>(h::ExitStatus::config_error);
  } catch (const std::exception& e) {
    std::cerr << "run failed: " << e.what() << '\n';
    return static_cast<int>(h::ExitStatus::statistical_failure);
  }
}
