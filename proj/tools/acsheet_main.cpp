// acsheet: numerical laboratory for the 1D stochastic Allen-Cahn equation
// driven by space-time white noise. Simulates U = V + Z with a spectral
// exponential integrator for the rough convolution Z and a semi-implicit
// finite-difference solve for V, and runs the dynamics diagnostics
// (kernel bounds, growth rates, pullback attraction, squeezing, dimension,
// determining modes, appendix inequalities).

#include <cstdlib>
#include <exception>
#include <iostream>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "acsheet/config.hpp"
#include "acsheet/experiments.hpp"

namespace {

int resolve_threads(const acsheet::Config& cfg, int flag_value) {
  if (flag_value > 0) return flag_value;
  const long long cfg_threads = cfg.get_int("threads", 0);
  if (cfg_threads > 0) return static_cast<int>(cfg_threads);
  if (const char* env = std::getenv("ACSHEET_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "acsheet - stochastic Allen-Cahn laboratory (space-time white noise, "
      "V+Z decomposition)"};
  app.footer("Configuration keys (flat key = value file, '#' comments):\n" +
             acsheet::config_reference());

  std::string command;
  app.add_option("command", command,
                 "one of: simulate zdiag greenbound pullback absorb squeeze "
                 "dimension modes inequalities all")
      ->required();
  std::string config_path;
  app.add_option("--config", config_path, "configuration file");
  std::uint64_t seed_override = 0;
  const auto* seed_opt = app.add_option("--seed", seed_override, "override config seed");
  std::string out_dir;
  app.add_option("--out", out_dir, "override output directory");
  int threads = 0;
  app.add_option("--threads", threads, "worker threads (0: ACSHEET_THREADS or hardware)");
  bool verbose = false;
  app.add_flag("--verbose", verbose, "echo the summary to stdout");

  CLI11_PARSE(app, argc, argv);

  try {
    acsheet::Config cfg;
    if (!config_path.empty()) cfg = acsheet::Config::from_file(config_path);
    if (seed_opt->count() > 0) cfg.set("seed", std::to_string(seed_override));
    if (!out_dir.empty()) cfg.set("out", out_dir);
    cfg.set("threads_resolved", std::to_string(resolve_threads(cfg, threads)));
    cfg.validate();

    const acsheet::ExperimentReport report = acsheet::run_command(command, cfg);
    const std::string dir = cfg.get_string("out", "out");
    acsheet::write_report(report, dir);

    if (verbose) std::cout << acsheet::summary_text(report);
    std::cout << (report.all_pass() ? "PASS" : "FAIL") << " (" << command
              << "): artifacts in " << dir << "\n";
    return report.all_pass() ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
