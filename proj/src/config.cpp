#include "acsheet/config.hpp"

#include <fstream>
#include <sstream>

#include "acsheet/drift.hpp"

namespace acsheet {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

}  // namespace

Config Config::from_string(const std::string& text) {
  Config cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigInvalid("ConfigInvalid: line " + std::to_string(lineno) +
                          " has no '=': " + line);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw ConfigInvalid("ConfigInvalid: empty key at line " + std::to_string(lineno));
    cfg.kv_[key] = value;
  }
  return cfg;
}

Config Config::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigInvalid("ConfigInvalid: cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_string(ss.str());
}

double Config::get_double(const std::string& key, double fallback) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) return fallback;
  try {
    std::size_t pos = 0;
    const double v = std::stod(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ConfigInvalid("ConfigInvalid: field '" + key + "' is not a number: " + it->second);
  }
}

std::int64_t Config::get_int(const std::string& key, std::int64_t fallback) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) return fallback;
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ConfigInvalid("ConfigInvalid: field '" + key + "' is not an integer: " + it->second);
  }
}

std::uint64_t Config::get_u64(const std::string& key, std::uint64_t fallback) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) return fallback;
  try {
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ConfigInvalid("ConfigInvalid: field '" + key + "' is not an unsigned integer: " +
                        it->second);
  }
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
  auto it = kv_.find(key);
  return it == kv_.end() ? fallback : it->second;
}

std::vector<double> Config::get_list(const std::string& key,
                                     const std::vector<double>& fallback) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) return fallback;
  std::vector<double> out;
  std::stringstream ss(it->second);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw ConfigInvalid("ConfigInvalid: field '" + key + "' has a bad list entry: " + item);
    }
  }
  if (out.empty())
    throw ConfigInvalid("ConfigInvalid: field '" + key + "' is an empty list");
  return out;
}

std::vector<int> Config::get_int_list(const std::string& key,
                                      const std::vector<int>& fallback) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) return fallback;
  std::vector<int> out;
  for (double v : get_list(key, {})) out.push_back(static_cast<int>(v));
  return out;
}

void Config::validate() const {
  const double L = get_double("L", 1.0);
  const std::int64_t N = get_int("N", 128);
  const double dt = get_double("dt", 1e-4);
  if (L <= 0.0) throw ConfigInvalid("ConfigInvalid: L must be positive");
  if (N < 2) throw ConfigInvalid("ConfigInvalid: N must be at least 2");
  if (dt <= 0.0) throw ConfigInvalid("ConfigInvalid: dt must be positive");
  const double beta = get_double("beta", 1.0);
  if (beta < 0.0) throw ConfigInvalid("ConfigInvalid: beta must be nonnegative");

  std::vector<double> coeffs = get_list("drift", {0.0, 1.0, 0.0, -1.0});
  double K = 0.0;
  try {
    DriftPolynomial f(coeffs);
    K = f.K();
  } catch (const EvenDegree&) {
    throw ConfigInvalid("ConfigInvalid: drift must have odd degree");
  } catch (const NonnegativeLeadingCoefficient&) {
    throw ConfigInvalid("ConfigInvalid: drift leading coefficient must be negative");
  }
  if (dt * K >= 1.0)
    throw ConfigInvalid(
        "ConfigInvalid: stability guard dt*K < 1 violated (dt*K = " +
        std::to_string(dt * K) + ")");

  const double gamma = get_double("gb_gamma", 0.0);
  for (double p : get_list("gb_p_list", {1.0, 2.0})) {
    if (!(p > 0.0) || p > 2.5)
      throw ConfigInvalid("ConfigInvalid: gb_p_list entries must lie in (0, 2.5]");
    if (gamma < 0.0 || gamma >= std::min(1.0, 3.0 - p))
      throw ConfigInvalid("ConfigInvalid: gb_gamma out of range for gb_p_list");
  }

  if (get_int("zdiag_ensemble", 100) < 50)
    throw ConfigInvalid("ConfigInvalid: zdiag_ensemble must be at least 50");
  if (get_int("dim_samples", 1000) < 1000)
    throw ConfigInvalid("ConfigInvalid: dim_samples must be at least 1000");
  if (get_int("sq_windows", 32) < 30)
    throw ConfigInvalid("ConfigInvalid: sq_windows must be at least 30");
  for (double h : get_list("pb_horizons", {1.0, 2.0, 4.0, 8.0}))
    if (h <= 0.0) throw ConfigInvalid("ConfigInvalid: pb_horizons must be positive");
}

std::string config_reference() {
  return
      "seed = 2024            # base RNG seed shared by all experiments\n"
      "out = out              # artifact directory\n"
      "threads = 0            # worker threads; 0 = ACSHEET_THREADS or hardware\n"
      "L = 1.0                # domain length\n"
      "N = 128                # interior nodes\n"
      "dt = 1e-4              # solver time step\n"
      "beta = 1.0             # damping split parameter\n"
      "drift = 0,1,0,-1       # drift coefficients a0,a1,... (odd degree, a_top<0)\n"
      "sim_T = 1.0            # simulate: trajectory length\n"
      "sim_u0_modes = 0.5     # simulate: initial data sine amplitudes\n"
      "sim_snapshots = 0.25,0.5,0.75,1 # simulate: snapshot times\n"
      "sim_binary = 0         # simulate: also write snapshots.bin\n"
      "res_dt = 2e-3          # residual: coarse step (fine = half)\n"
      "res_T = 1.0            # residual: window length\n"
      "res_seeds = 3          # residual: seeds\n"
      "cancel_pairs = 5       # cancellation: seed/pair combinations\n"
      "cancel_T = 0.5         # cancellation: run length\n"
      "zdiag_N = 64           # growth: interior nodes\n"
      "zdiag_dt = 0.01        # growth: time step\n"
      "zdiag_t_max = 100      # growth: horizon\n"
      "zdiag_ensemble = 100   # growth: paths (>= 50)\n"
      "zdiag_eps = 0.05       # growth: exceedance exponent offset\n"
      "zdiag_beta = 0.0       # growth: damping for the Z study\n"
      "zdiag_checkpoints = 1,2,4,8,10,16,32,64,100\n"
      "noise_samples = 10000  # noise law: ensemble size\n"
      "zvar_samples = 10000   # mode-1 stationary variance ensemble\n"
      "zcross_seeds = 16      # cross-check: paths per refinement level\n"
      "gb_p_list = 1,2        # kernel bound: exponents (0 < p <= 2.5)\n"
      "gb_gamma = 0.0         # kernel bound: edge exponent\n"
      "gb_x = 0.5             # kernel bound: evaluation point\n"
      "pb_horizons = 1,2,4,8  # pullback: horizons\n"
      "pb_seeds = 3           # pullback: number of seeds\n"
      "pb_set_size = 10       # pullback: initial conditions\n"
      "pb_norm_cap = 5        # pullback: |u0|_L2 cap\n"
      "pb_spin = 1.0          # pullback: Z spin-up window\n"
      "ab_T = 6               # absorbing: run length\n"
      "ab_dt = 5e-5           # absorbing: time step (large data)\n"
      "ab_u0_norms = 1,10,100 # absorbing: |u0|_L2 magnitudes\n"
      "ab_temper_shifts = 0,20,40,60\n"
      "ab_eps = 0.1           # absorbing: temperedness discount\n"
      "ab_beta_sweep = 0.5,1,2,4\n"
      "sq_m_list = 4,8,16,32  # squeezing: cutoffs\n"
      "sq_windows = 32        # squeezing: unit windows (>= 30)\n"
      "sq_spin = 1.0          # squeezing: Z spin-up\n"
      "dim_samples = 1000     # dimension: attractor cloud size (>= 1000)\n"
      "dim_ball = 5           # dimension: initial ball radius\n"
      "dim_horizon = 5.5      # dimension: pullback horizon (collapse scale)\n"
      "dim_dt = 5e-4          # dimension: time step for the cloud run\n"
      "dim_embed = 16,32      # dimension: embedding mode counts\n"
      "dim_selftest_n = 10000 # dimension: synthetic cloud size\n"
      "md_m_list = 0,4,8,16,32 # modes: cutoffs\n"
      "md_T = 20              # modes: forward horizon\n"
      "md_tol = 1e-6          # modes: convergence tolerance\n"
      "md_horizons = 4,8,16   # modes: pullback horizons\n"
      "md_r_times = -1,0      # modes: pullback evaluation times\n"
      "ineq_samples = 1000    # inequalities: samples per lemma\n"
      "ineq_tol = 1e-7        # inequalities: violation tolerance\n";
}

}  // namespace acsheet
