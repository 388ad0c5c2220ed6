// Acceptance harness: runs every acceptance check at full scale and prints
// one PASS/FAIL line per criterion. The last criterion shells out to the CLI
// binary (path in argv[1]) and compares artifact trees byte for byte.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "acsheet/config.hpp"
#include "acsheet/experiments.hpp"

namespace fs = std::filesystem;
using acsheet::Config;
using acsheet::ExperimentReport;
using acsheet::Verdict;

namespace {

struct CriterionLine {
  std::string id;
  bool pass;
  std::string detail;
  double runtime_s;
};

std::vector<CriterionLine> g_lines;

void record(const ExperimentReport& rep, const std::map<std::string, double>& caps) {
  for (const auto& v : rep.verdicts) {
    CriterionLine line{v.id, v.pass, v.detail, v.runtime_s};
    auto it = caps.find(v.id);
    if (it != caps.end() && v.runtime_s >= it->second) {
      line.pass = false;
      line.detail += " [runtime cap " + std::to_string(it->second) + "s exceeded]";
    }
    g_lines.push_back(std::move(line));
  }
}

std::map<std::string, std::string> read_tree(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::ifstream f(entry.path(), std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    out[fs::relative(entry.path(), dir).string()] = ss.str();
  }
  return out;
}

const char* kSmokeConfig =
    "seed = 424242\n"
    "N = 48\n"
    "dt = 1e-3\n"
    "sim_T = 0.5\n"
    "sim_snapshots = 0.25,0.5\n"
    "sim_binary = 1\n"
    "res_dt = 4e-3\n"
    "res_seeds = 1\n"
    "cancel_pairs = 2\n"
    "cancel_T = 0.2\n"
    "zdiag_N = 32\n"
    "zdiag_dt = 0.05\n"
    "zdiag_t_max = 100\n"
    "zdiag_ensemble = 80\n"
    "zdiag_checkpoints = 10,100\n"
    "noise_samples = 2000\n"
    "zvar_samples = 4000\n"
    "zcross_seeds = 16\n"
    "kernel_points = 50\n"
    "pb_horizons = 0.5,1.5\n"
    "pb_seeds = 1\n"
    "pb_set_size = 4\n"
    "ab_T = 4\n"
    "ab_dt = 1e-4\n"
    "ab_u0_norms = 1,5\n"
    "ab_temper_shifts = 0,24,48\n"
    "ab_beta_sweep = 1,2\n"
    "sq_m_list = 2,4,8\n"
    "sq_windows = 30\n"
    "dim_samples = 1000\n"
    "dim_horizon = 5\n"
    "dim_dt = 1e-3\n"
    "dim_embed = 8,16\n"
    "dim_selftest_n = 3000\n"
    "md_m_list = 4,8\n"
    "md_T = 4\n"
    "md_horizons = 2,4\n"
    "ineq_samples = 60\n";

bool run_cli(const std::string& cli, const std::string& config_path,
             const std::string& out_dir, int threads) {
  const std::string cmd = cli + " all --config " + config_path + " --out " + out_dir +
                          " --threads " + std::to_string(threads) + " > /dev/null 2>&1";
  return std::system(cmd.c_str()) != -1;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli_path = argc > 1 ? argv[1] : "";
  const unsigned hw = std::thread::hardware_concurrency();

  Config cfg;
  cfg.set("threads_resolved", std::to_string(hw > 0 ? hw : 1));
  cfg.validate();

  const std::map<std::string, double> caps = {
      {"C01_kernel_equivalence", 10.0}, {"C02_green_bound", 30.0},
      {"C05_growth_rates", 300.0},      {"C08_pullback_attraction", 300.0},
      {"C13_appendix_inequalities", 60.0}};

  record(acsheet::run_greenbound(cfg), caps);
  record(acsheet::run_zdiag(cfg), caps);
  record(acsheet::run_simulate(cfg), caps);
  record(acsheet::run_pullback(cfg), caps);
  record(acsheet::run_absorb(cfg), caps);
  record(acsheet::run_squeeze(cfg), caps);
  record(acsheet::run_dimension(cfg), caps);
  record(acsheet::run_modes(cfg), caps);
  record(acsheet::run_inequalities(cfg), caps);

  // reproducibility of the CLI artifacts: rerun and thread-count invariance
  {
    CriterionLine line{"C14_reproducibility", false, "", 0.0};
    if (cli_path.empty()) {
      line.detail = "no CLI path given";
    } else {
      const fs::path base = fs::temp_directory_path() / "acsheet_accept";
      fs::remove_all(base);
      fs::create_directories(base);
      const std::string cfg_path = (base / "smoke.cfg").string();
      {
        std::ofstream f(cfg_path);
        f << kSmokeConfig;
      }
      const auto t0 = std::chrono::steady_clock::now();
      const bool ran = run_cli(cli_path, cfg_path, (base / "run1").string(), 1) &&
                       run_cli(cli_path, cfg_path, (base / "run2").string(), 1) &&
                       run_cli(cli_path, cfg_path, (base / "run8").string(), 8);
      line.runtime_s =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      if (!ran) {
        line.detail = "CLI invocation failed";
      } else {
        const auto a = read_tree(base / "run1");
        const auto b = read_tree(base / "run2");
        const auto c = read_tree(base / "run8");
        const bool rerun_same = a == b;
        const bool threads_same = a == c;
        line.pass = rerun_same && threads_same && !a.empty();
        line.detail = "rerun identical: " + std::string(rerun_same ? "yes" : "no") +
                      ", threads 1 vs 8 identical: " +
                      std::string(threads_same ? "yes" : "no") + ", files: " +
                      std::to_string(a.size());
      }
    }
    g_lines.push_back(std::move(line));
  }

  int failures = 0;
  for (const auto& line : g_lines) {
    std::printf("[%s] %s (%.1fs): %s\n", line.pass ? "PASS" : "FAIL", line.id.c_str(),
                line.runtime_s, line.detail.c_str());
    if (!line.pass) ++failures;
  }
  std::printf("ACCEPTANCE: %d/%zu criteria passed\n", static_cast<int>(g_lines.size()) - failures,
              g_lines.size());
  return failures == 0 ? 0 : 1;
}
