#include "acsheet/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "acsheet/drift.hpp"
#include "acsheet/inequality.hpp"
#include "acsheet/kernel.hpp"
#include "acsheet/rds.hpp"
#include "acsheet/rng.hpp"
#include "acsheet/solver.hpp"
#include "acsheet/stoch_conv.hpp"
#include "acsheet/thread_pool.hpp"

namespace acsheet {

namespace {

int resolved_threads(const Config& cfg) {
  return std::max(1, static_cast<int>(cfg.get_int("threads_resolved", 1)));
}

SolveConfig solve_config(const Config& cfg, double dt) {
  SolveConfig sc;
  sc.beta = cfg.get_double("beta", 1.0);
  sc.dt = dt;
  sc.drift = DriftPolynomial(cfg.get_list("drift", {0.0, 1.0, 0.0, -1.0}));
  return sc;
}

std::string fmt(double v) { return format_double(v); }

std::string pass_str(bool b) { return b ? "PASS" : "FAIL"; }

class Stopwatch {
 public:
  Stopwatch() : t0_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
  }

 private:
  std::chrono::steady_clock::time_point t0_;
};

}  // namespace

void ExperimentReport::merge(ExperimentReport&& other) {
  for (auto& v : other.verdicts) verdicts.push_back(std::move(v));
  for (auto& t : other.tables) tables.push_back(std::move(t));
  for (auto& b : other.blobs) blobs.push_back(std::move(b));
}

bool ExperimentReport::all_pass() const {
  for (const auto& v : verdicts)
    if (!v.pass) return false;
  return true;
}

// ---------------------------------------------------------------------------
// greenbound: C1 kernel equivalence, C2 space-time integral bound

ExperimentReport run_greenbound(const Config& cfg) {
  ExperimentReport rep;
  const double L = cfg.get_double("L", 1.0);
  const std::uint64_t seed = cfg.get_u64("seed", 2024);
  const int threads = resolved_threads(cfg);

  KernelParams kp;
  kp.L = L;
  kp.beta = 0.0;
  kp.tol = 1e-14;

  // C1: two series agree pointwise; semigroup composition closes
  {
    Stopwatch sw;
    SmallRng rng(hash_combine(0x6b65726eULL, seed));
    double worst = 0.0;
    const int n_pts = static_cast<int>(cfg.get_int("kernel_points", 300));
    for (int i = 0; i < n_pts; ++i) {
      const double t = 0.01 * std::pow(200.0, rng.uniform());
      const double x = rng.uniform(0.0, L);
      const double y = rng.uniform(0.0, L);
      worst = std::max(worst,
                       std::abs(kernel_images(kp, t, x, y) - kernel_spectral(kp, t, x, y)));
    }
    double worst_ck = 0.0;
    const double xy[3][2] = {{0.3 * L, 0.6 * L}, {0.5 * L, 0.5 * L}, {0.2 * L, 0.9 * L}};
    for (const auto& p : xy)
      worst_ck = std::max(worst_ck, std::abs(chapman_kolmogorov_defect(
                                        kp, 0.1 * L * L, 0.2 * L * L, p[0], p[1])));
    CsvTable t;
    t.name = "kernel_equivalence";
    t.header = {"points", "max_series_gap", "max_chapman_kolmogorov_defect"};
    t.add_row({format_int(n_pts), fmt(worst), fmt(worst_ck)});
    rep.tables.push_back(std::move(t));

    Verdict v;
    v.id = "C01_kernel_equivalence";
    v.pass = worst < 1e-10 && worst_ck < 1e-6;
    v.detail = "max series gap " + fmt(worst) + ", max CK defect " + fmt(worst_ck);
    v.runtime_s = sw.seconds();
    rep.verdicts.push_back(std::move(v));
  }

  // C2: integral growth exponent and constant stability
  {
    Stopwatch sw;
    const std::vector<double> p_list = cfg.get_list("gb_p_list", {1.0, 2.0});
    const double gamma = cfg.get_double("gb_gamma", 0.0);
    const double x = cfg.get_double("gb_x", 0.5) * L;
    GreenBoundConfig gcfg = default_green_bound_config();
    if (cfg.has("gb_t_fit")) gcfg.t_fit = cfg.get_list("gb_t_fit", gcfg.t_fit);
    if (cfg.has("gb_t_stable")) gcfg.t_stable = cfg.get_list("gb_t_stable", gcfg.t_stable);

    std::vector<GreenBoundReport> reports(p_list.size());
    parallel_for(p_list.size(), threads, [&](std::size_t i) {
      reports[i] = green_bound_report(kp, p_list[i], gamma, x, gcfg);
    });

    CsvTable t;
    t.name = "greenbound";
    t.header = {"p", "gamma", "x", "t", "integral", "slope", "k_hat"};
    bool all = true;
    std::string detail;
    for (const auto& r : reports) {
      for (const auto& row : r.rows)
        t.add_row({fmt(r.p), fmt(r.gamma), fmt(r.x), fmt(row.t), fmt(row.integral),
                   fmt(r.slope), fmt(r.k_hat)});
      all = all && r.pass;
      detail += "p=" + fmt(r.p) + " slope " + fmt(r.slope) + " (target " +
                fmt(r.slope_target) + "), k_hat " + fmt(r.k_hat) + " drift " +
                fmt(r.k_hat_drift) + "; ";
    }
    rep.tables.push_back(std::move(t));

    Verdict v;
    v.id = "C02_green_bound";
    v.pass = all;
    v.detail = detail;
    v.runtime_s = sw.seconds();
    rep.verdicts.push_back(std::move(v));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// zdiag: C3 noise law, C4 cross-check, C5 growth rates

namespace {

struct ZCrossResult {
  std::vector<int> n_levels;
  std::vector<double> dt_levels;
  std::vector<double> rms;
  double order = 0.0;
  bool decreasing = true;
};

ZCrossResult z_cross_check(double L, double beta, std::uint64_t seed, int n_seeds,
                           int threads) {
  ZCrossResult out;
  const int levels = 3;
  out.rms.assign(levels, 0.0);
  for (int lev = 0; lev < levels; ++lev) {
    out.n_levels.push_back((32 << lev) - 1);
    const double dx = L / (32 << lev);
    out.dt_levels.push_back(0.5 * dx * dx);
  }
  const double t_hi = L * L / 2.0;
  const std::vector<double> evals = {t_hi / 2.0, t_hi};

  std::vector<std::vector<double>> acc(static_cast<std::size_t>(levels),
                                       std::vector<double>(static_cast<std::size_t>(n_seeds)));
  std::vector<std::size_t> tasks;
  for (int lev = 0; lev < levels; ++lev)
    for (int s = 0; s < n_seeds; ++s) tasks.push_back(static_cast<std::size_t>(lev * n_seeds + s));

  parallel_for(tasks.size(), threads, [&](std::size_t ti) {
    const int lev = static_cast<int>(tasks[ti]) / n_seeds;
    const int s = static_cast<int>(tasks[ti]) % n_seeds;
    const int N = (32 << lev) - 1;
    GridSpec g(L, N, 0.0, t_hi, 0.5 * (L / (N + 1)) * (L / (N + 1)));
    NoisePath path(seed + 100 + static_cast<std::uint64_t>(s), g);
    ZKernelBatch batch(path, g, beta, 0, evals);
    auto tab = std::make_shared<SpectralZTables>(g, beta, N);
    SpectralZ z(tab, 0);
    std::int64_t kcur = 0;
    double sq = 0.0;
    int cnt = 0;
    for (double t : evals) {
      const std::int64_t kt = g.time_index(t);
      while (kcur < kt) z.step(path, kcur++);
      for (int i = 0; i < 50; ++i) {
        const double x = (i + 1) * L / 51.0;
        const double d = z.value_at(x) - batch.value(t, x);
        sq += d * d;
        ++cnt;
      }
    }
    acc[static_cast<std::size_t>(lev)][static_cast<std::size_t>(s)] = sq / cnt;
  });

  for (int lev = 0; lev < levels; ++lev) {
    double m = 0.0;
    for (double v : acc[static_cast<std::size_t>(lev)]) m += v;
    out.rms[static_cast<std::size_t>(lev)] = std::sqrt(m / n_seeds);
  }
  for (int lev = 1; lev < levels; ++lev)
    if (out.rms[static_cast<std::size_t>(lev)] >=
        out.rms[static_cast<std::size_t>(lev - 1)])
      out.decreasing = false;
  out.order = std::log2(out.rms.front() / out.rms.back()) / (levels - 1);
  return out;
}

}  // namespace

ExperimentReport run_zdiag(const Config& cfg) {
  ExperimentReport rep;
  const double L = cfg.get_double("L", 1.0);
  const std::uint64_t seed = cfg.get_u64("seed", 2024);
  const int threads = resolved_threads(cfg);
  const double beta_z = cfg.get_double("zdiag_beta", 0.0);

  // --- C3: noise law ---
  {
    Stopwatch sw;
    const int n_samples = static_cast<int>(cfg.get_int("noise_samples", 10000));
    GridSpec g(L, 31, 0.0, 2.0, 0.02);

    // cell-increment variance at fixed (k, j) across seeds
    double s1 = 0.0, s2 = 0.0;
    for (int m = 0; m < n_samples; ++m) {
      NoisePath p(seed + 10 + static_cast<std::uint64_t>(m), g, 0);
      const double xi = p.increment(5, 7);
      s1 += xi;
      s2 += xi * xi;
    }
    const double var_cell = (s2 - s1 * s1 / n_samples) / (n_samples - 1);
    const double var_cell_target = g.dt() * g.dx();

    // rectangle sums over [0,2] x [L/4, 3L/4]
    const int j0 = static_cast<int>(std::round(0.25 * L / g.dx()));
    const int j1 = static_cast<int>(std::round(0.75 * L / g.dx()));
    const std::int64_t k1 = g.time_index(2.0);
    const double area = static_cast<double>(k1) * g.dt() * (j1 - j0) * g.dx();
    std::vector<double> sums(static_cast<std::size_t>(n_samples));
    parallel_for(static_cast<std::size_t>(n_samples), threads, [&](std::size_t m) {
      NoisePath p(seed + 20000 + m, g);
      sums[m] = p.rectangle_sum(0, k1, j0, j1);
    });
    double r1 = 0.0, r2 = 0.0;
    for (double v : sums) {
      r1 += v;
      r2 += v * v;
    }
    const double var_rect = (r2 - r1 * r1 / n_samples) / (n_samples - 1);

    // shift composition is exact index arithmetic
    NoisePath base(seed, g);
    NoisePath ab = shift(shift(base, 0.5), -1.5);
    NoisePath once = shift(base, -1.0);
    bool shift_exact = ab == once && shift(base, 0.0) == base;
    for (int k = -3; k <= 3 && shift_exact; ++k)
      for (int j = 0; j <= g.N(); ++j)
        if (ab.increment(k, j) != once.increment(k, j)) shift_exact = false;

    CsvTable t;
    t.name = "noise_law";
    t.header = {"check", "observed", "target", "rel_err"};
    t.add_row({"cell_variance", fmt(var_cell), fmt(var_cell_target),
               fmt(std::abs(var_cell / var_cell_target - 1.0))});
    t.add_row({"rectangle_variance", fmt(var_rect), fmt(area),
               fmt(std::abs(var_rect / area - 1.0))});
    t.add_row({"shift_composition", shift_exact ? "exact" : "broken", "exact", "0"});
    rep.tables.push_back(std::move(t));

    Verdict v;
    v.id = "C03_noise_law";
    v.runtime_s = sw.seconds();
    v.pass = std::abs(var_cell / var_cell_target - 1.0) < 0.05 &&
             std::abs(var_rect / area - 1.0) < 0.05 && shift_exact;
    v.detail = "cell var rel err " + fmt(std::abs(var_cell / var_cell_target - 1.0)) +
               ", rectangle var rel err " + fmt(std::abs(var_rect / area - 1.0)) +
               ", shift " + (shift_exact ? "exact" : "broken");
    rep.verdicts.push_back(std::move(v));
  }

  // --- C4: spectral vs quadrature + mode-1 stationary variance ---
  {
    Stopwatch sw;
    const int n_seeds = static_cast<int>(cfg.get_int("zcross_seeds", 16));
    ZCrossResult zc = z_cross_check(L, beta_z, seed, n_seeds, threads);

    const int n_var = static_cast<int>(cfg.get_int("zvar_samples", 10000));
    const double dt_var = 1e-3 * L * L;
    GridSpec gv(L, 31, 0.0, 0.4 * L * L, dt_var);
    const std::int64_t n_steps = gv.M();
    std::vector<double> z1(static_cast<std::size_t>(n_var));
    auto tab = std::make_shared<SpectralZTables>(gv, beta_z, 1);
    parallel_for(static_cast<std::size_t>(n_var), threads, [&](std::size_t m) {
      NoisePath p(seed + 40000 + m, gv);
      SpectralZ z(tab, 0);
      for (std::int64_t k = 0; k < n_steps; ++k) z.step(p, k);
      z1[m] = z.modes()[0];
    });
    double s1 = 0.0, s2 = 0.0;
    for (double v : z1) {
      s1 += v;
      s2 += v * v;
    }
    const double var_mode = (s2 - s1 * s1 / n_var) / (n_var - 1);
    const double var_target = 1.0 / (2.0 * (beta_z + gv.lambda(1)));
    const double var_err = std::abs(var_mode / var_target - 1.0);

    CsvTable t;
    t.name = "zdiag_crosscheck";
    t.header = {"level", "n_interior", "dt", "rms_gap", "order", "mode1_var",
                "mode1_var_target"};
    for (std::size_t lev = 0; lev < zc.rms.size(); ++lev)
      t.add_row({format_int(static_cast<long long>(lev)), format_int(zc.n_levels[lev]),
                 fmt(zc.dt_levels[lev]), fmt(zc.rms[lev]), fmt(zc.order), fmt(var_mode),
                 fmt(var_target)});
    rep.tables.push_back(std::move(t));

    Verdict v;
    v.id = "C04_z_crosscheck";
    v.runtime_s = sw.seconds();
    v.pass = zc.decreasing && zc.order >= 0.5 && var_err < 0.05;
    v.detail = "refinement order " + fmt(zc.order) + " (rms " + fmt(zc.rms.front()) +
               " -> " + fmt(zc.rms.back()) + "), mode-1 var rel err " + fmt(var_err);
    rep.verdicts.push_back(std::move(v));
  }

  // --- C5: growth rates ---
  {
    Stopwatch sw;
    const int n_grid = static_cast<int>(cfg.get_int("zdiag_N", 64));
    const double dt = cfg.get_double("zdiag_dt", 0.01);
    const double t_max = cfg.get_double("zdiag_t_max", 100.0);
    GridSpec g(L, n_grid, 0.0, t_max, dt);

    GrowthConfig gc;
    gc.beta = beta_z;
    gc.eps = cfg.get_double("zdiag_eps", 0.05);
    gc.t_max = t_max;
    gc.checkpoints = cfg.get_list("zdiag_checkpoints", {1, 2, 4, 8, 10, 16, 32, 64, 100});
    gc.ensemble = static_cast<int>(cfg.get_int("zdiag_ensemble", 100));
    gc.q = 2.0 * solve_config(cfg, cfg.get_double("dt", 1e-4)).drift.p();
    GrowthReport gr = growth_report(g, gc, seed + 60000);

    CsvTable t;
    t.name = "zdiag";
    t.header = {"seed", "t", "sup_norm", "z_phi_over_t", "l2_norm", "l2p_norm"};
    for (const auto& r : gr.rows)
      t.add_row({format_int(static_cast<long long>(r.seed)), fmt(r.t), fmt(r.sup_norm),
                 fmt(r.z_phi_over_t), fmt(r.l2_norm), fmt(r.l2p_norm)});
    rep.tables.push_back(std::move(t));

    CsvTable ts;
    ts.name = "zdiag_growth";
    ts.header = {"t", "exceed_fraction", "exceed_se", "median_zphi_over_t",
                 "holder_slope_time", "holder_slope_space"};
    for (const auto& c : gr.checkpoints)
      ts.add_row({fmt(c.t), fmt(c.exceed_fraction), fmt(c.exceed_se),
                  fmt(c.median_zphi_over_t), fmt(gr.holder_slope_time),
                  fmt(gr.holder_slope_space)});
    rep.tables.push_back(std::move(ts));

    const GrowthCheckpoint* c10 = nullptr;
    const GrowthCheckpoint* c100 = nullptr;
    for (const auto& c : gr.checkpoints) {
      if (c.t == 10.0) c10 = &c;
      if (c.t == 100.0) c100 = &c;
    }
    bool pass = c10 && c100;
    std::string detail;
    if (pass) {
      const double slack = 2.0 * std::sqrt(c10->exceed_se * c10->exceed_se +
                                           c100->exceed_se * c100->exceed_se);
      const bool exceed_ok = c100->exceed_fraction <= c10->exceed_fraction + slack;
      const double ratio = c10->median_zphi_over_t / c100->median_zphi_over_t;
      pass = exceed_ok && ratio >= 3.0;
      detail = "exceed " + fmt(c10->exceed_fraction) + " -> " + fmt(c100->exceed_fraction) +
               ", median |Z^phi|/t decay ratio " + fmt(ratio) + ", holder slopes t " +
               fmt(gr.holder_slope_time) + " x " + fmt(gr.holder_slope_space);
    } else {
      detail = "checkpoints 10 and 100 required";
    }
    Verdict v;
    v.id = "C05_growth_rates";
    v.pass = pass;
    v.detail = detail;
    v.runtime_s = sw.seconds();
    rep.verdicts.push_back(std::move(v));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// simulate: trajectory snapshots + C6 residual halving + C7 cancellation

ExperimentReport run_simulate(const Config& cfg) {
  ExperimentReport rep;
  const double L = cfg.get_double("L", 1.0);
  const int N = static_cast<int>(cfg.get_int("N", 128));
  const double dt = cfg.get_double("dt", 1e-4);
  const double T = cfg.get_double("sim_T", 1.0);
  const std::uint64_t seed = cfg.get_u64("seed", 2024);
  const int threads = resolved_threads(cfg);

  // trajectory with snapshots
  {
    GridSpec g(L, N, 0.0, T, dt);
    SolveConfig sc = solve_config(cfg, dt);
    const Field u0 = sine_profile(g, cfg.get_list("sim_u0_modes", {0.5}));
    NoisePath noise(seed, g);
    const std::vector<double> snaps =
        cfg.get_list("sim_snapshots", {0.25 * T, 0.5 * T, 0.75 * T, T});
    SolveResult res = solve_u(g, sc, u0, noise, 0, g.M(), {}, snaps);

    CsvTable t;
    t.name = "simulate_trajectory";
    t.header = {"t", "x", "U", "V", "Z"};
    for (const auto& s : res.snapshots)
      for (int i = 1; i <= g.N(); ++i)
        t.add_row({fmt(s.t), fmt(g.node(i)), fmt(s.u[i - 1]), fmt(s.v[i - 1]),
                   fmt(s.z[i - 1])});
    rep.tables.push_back(std::move(t));

    if (cfg.get_int("sim_binary", 0) != 0) {
      std::string bytes;
      for (const auto& s : res.snapshots) {
        const auto& v = s.u.values();
        const std::size_t off = bytes.size();
        bytes.resize(off + v.size() * sizeof(double));
        std::memcpy(bytes.data() + off, v.data(), v.size() * sizeof(double));
      }
      rep.blobs.emplace_back("snapshots.bin", std::move(bytes));
    }
  }

  // C6: weak-form residual halves with dt
  {
    Stopwatch sw;
    const double dtc = cfg.get_double("res_dt", 2e-3);
    const double Tr = cfg.get_double("res_T", 1.0);
    const int n_seeds = static_cast<int>(cfg.get_int("res_seeds", 3));
    GridSpec gc(L, N, 0.0, Tr, dtc);
    GridSpec gf(L, N, 0.0, Tr, dtc / 2.0);
    const std::vector<std::vector<double>> phis = {{1.0}, {0.0, 1.0, 0.5}};

    struct Case {
      int seed_idx, phi_idx;
      double coarse, fine, ratio;
    };
    std::vector<Case> cases(static_cast<std::size_t>(n_seeds) * phis.size());
    parallel_for(cases.size(), threads, [&](std::size_t i) {
      const int si = static_cast<int>(i) / static_cast<int>(phis.size());
      const int pi = static_cast<int>(i) % static_cast<int>(phis.size());
      NoisePath fine(seed + 1000 + static_cast<std::uint64_t>(si), gf);
      CoarsenedNoise coarse(fine, 2);
      const TestFunction phic = TestFunction::from_sine_series(gc, phis[static_cast<std::size_t>(pi)]);
      const TestFunction phif = TestFunction::from_sine_series(gf, phis[static_cast<std::size_t>(pi)]);
      const Field u0c = sine_profile(gc, cfg.get_list("sim_u0_modes", {0.5}));
      const Field u0f = sine_profile(gf, cfg.get_list("sim_u0_modes", {0.5}));
      const auto rc = weak_form_residual(gc, solve_config(cfg, dtc), u0c, coarse, phic, 0, gc.M());
      const auto rf = weak_form_residual(gf, solve_config(cfg, dtc / 2.0), u0f, fine, phif, 0, gf.M());
      cases[i] = {si, pi, rc.max_abs, rf.max_abs, rf.max_abs / rc.max_abs};
    });

    CsvTable t;
    t.name = "simulate_residual";
    t.header = {"seed_index", "phi_index", "max_residual_coarse", "max_residual_fine",
                "ratio"};
    bool all = true;
    double worst_lo = 1.0, worst_hi = 0.0;
    for (const auto& c : cases) {
      t.add_row({format_int(c.seed_idx), format_int(c.phi_idx), fmt(c.coarse),
                 fmt(c.fine), fmt(c.ratio)});
      all = all && c.ratio >= 0.4 && c.ratio <= 0.6;
      worst_lo = std::min(worst_lo, c.ratio);
      worst_hi = std::max(worst_hi, c.ratio);
    }
    rep.tables.push_back(std::move(t));

    Verdict v;
    v.id = "C06_weak_form_residual";
    v.runtime_s = sw.seconds();
    v.pass = all;
    v.detail = "halving ratios in [" + fmt(worst_lo) + ", " + fmt(worst_hi) +
               "] over " + format_int(static_cast<long long>(cases.size())) + " runs";
    rep.verdicts.push_back(std::move(v));
  }

  // C7: additive noise cancels exactly in difference dynamics
  {
    Stopwatch sw;
    const int n_pairs = static_cast<int>(cfg.get_int("cancel_pairs", 5));
    const double Tc = cfg.get_double("cancel_T", 0.5);
    GridSpec g(L, N, 0.0, Tc, dt);
    SolveConfig sc = solve_config(cfg, dt);

    std::vector<DifferenceReport> reports(static_cast<std::size_t>(n_pairs));
    parallel_for(reports.size(), threads, [&](std::size_t i) {
      SmallRng rng(hash_combine(hash_combine(0xd1ffULL, seed), i));
      std::vector<double> a(4), b(4);
      for (auto& x : a) x = rng.uniform(-1.0, 1.0);
      for (auto& x : b) x = rng.uniform(-1.0, 1.0);
      NoisePath noise(seed + 2000 + i, g);
      reports[i] =
          difference_run(g, sc, sine_profile(g, a), sine_profile(g, b), noise, 0, g.M());
    });

    CsvTable t;
    t.name = "simulate_cancellation";
    t.header = {"pair", "max_defect_rel", "final_diff_l2", "gronwall_ok"};
    bool all = true;
    double worst = 0.0;
    for (std::size_t i = 0; i < reports.size(); ++i) {
      const auto& r = reports[i];
      t.add_row({format_int(static_cast<long long>(i)), fmt(r.max_defect_rel),
                 fmt(r.diff_l2.back()), r.gronwall_ok ? "1" : "0"});
      all = all && r.max_defect_rel < 1e-12 && r.gronwall_ok;
      worst = std::max(worst, r.max_defect_rel);
    }
    rep.tables.push_back(std::move(t));

    Verdict v;
    v.id = "C07_additive_cancellation";
    v.runtime_s = sw.seconds();
    v.pass = all;
    v.detail = "worst relative defect " + fmt(worst);
    rep.verdicts.push_back(std::move(v));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// pullback: C8

ExperimentReport run_pullback(const Config& cfg) {
  Stopwatch sw;
  ExperimentReport rep;
  const double L = cfg.get_double("L", 1.0);
  const int N = static_cast<int>(cfg.get_int("N", 128));
  const double dt = cfg.get_double("dt", 1e-4);
  const std::uint64_t seed = cfg.get_u64("seed", 2024);
  const int threads = resolved_threads(cfg);
  const std::vector<double> horizons = cfg.get_list("pb_horizons", {1.0, 2.0, 4.0, 8.0});
  const int n_seeds = static_cast<int>(cfg.get_int("pb_seeds", 3));
  const int set_size = static_cast<int>(cfg.get_int("pb_set_size", 10));
  const double cap = cfg.get_double("pb_norm_cap", 5.0);
  const double spin = cfg.get_double("pb_spin", 1.0);
  const double ratio_tol = cfg.get_double("pb_ratio_tol", 0.01);

  const double t_max = *std::max_element(horizons.begin(), horizons.end());
  GridSpec g(L, N, -t_max - spin, 0.0, dt);
  SolveConfig sc = solve_config(cfg, dt);

  std::vector<Field> starts;
  const int half = set_size / 2;
  for (int j = 1; j <= half; ++j) {
    const double nrm = cap * 0.99 * j / half;
    Field f = sine_profile(g, {1.0});
    f *= nrm / f.l2_norm();
    starts.push_back(f);
    f *= -1.0;
    starts.push_back(std::move(f));
  }

  std::vector<PullbackReport> reports(static_cast<std::size_t>(n_seeds));
  parallel_for(reports.size(), threads, [&](std::size_t i) {
    reports[i] = pullback_experiment(g, sc, starts, horizons, seed + i, spin, cap);
  });

  CsvTable t;
  t.name = "pullback";
  t.header = {"seed_index", "horizon", "diameter", "semidist_prev"};
  bool all = true;
  std::string detail;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto& r = reports[i];
    for (const auto& row : r.rows)
      t.add_row({format_int(static_cast<long long>(i)), fmt(row.horizon),
                 fmt(row.diameter), fmt(row.semidist_prev)});
    const double first = r.rows.front().diameter;
    const double last = r.rows.back().diameter;
    const bool ok = last < ratio_tol * first && r.diameters_non_increasing;
    all = all && ok;
    detail += "seed" + format_int(static_cast<long long>(i)) + " " + fmt(first) +
              " -> " + fmt(last) + "; ";
  }
  rep.tables.push_back(std::move(t));

  Verdict v;
  v.id = "C08_pullback_attraction";
  v.runtime_s = sw.seconds();
  v.pass = all;
  v.detail = "diameters " + detail;
  rep.verdicts.push_back(std::move(v));
  return rep;
}

// ---------------------------------------------------------------------------
// absorb: C9

ExperimentReport run_absorb(const Config& cfg) {
  Stopwatch sw;
  ExperimentReport rep;
  const double L = cfg.get_double("L", 1.0);
  const int N = static_cast<int>(cfg.get_int("N", 128));
  const double dt_ab = cfg.get_double("ab_dt", 5e-5);
  const double T = cfg.get_double("ab_T", 6.0);
  const std::uint64_t seed = cfg.get_u64("seed", 2024);

  GridSpec g(L, N, 0.0, T, dt_ab);
  SolveConfig sc = solve_config(cfg, dt_ab);

  AbsorbConfig ac;
  ac.u0_norms = cfg.get_list("ab_u0_norms", {1.0, 10.0, 100.0});
  ac.T = T;
  ac.eps_temper = cfg.get_double("ab_eps", 0.1);
  ac.temper_shifts = cfg.get_list("ab_temper_shifts", {0.0, 20.0, 40.0, 60.0});
  ac.beta_sweep = cfg.get_list("ab_beta_sweep", {0.5, 1.0, 2.0, 4.0});
  ac.threads = resolved_threads(cfg);
  ac.aux_dt = cfg.get_double("dt", 1e-4);

  AbsorbReport ar = absorbing_radius(g, sc, ac, seed + 7000);

  CsvTable t;
  t.name = "absorb";
  t.header = {"u0_norm", "window_sup", "entry_time", "r_hat"};
  for (std::size_t i = 0; i < ar.u0_norms.size(); ++i)
    t.add_row({fmt(ar.u0_norms[i]), fmt(ar.window_sups[i]), fmt(ar.entry_times[i]),
               fmt(ar.r_hat)});
  rep.tables.push_back(std::move(t));

  CsvTable tt;
  tt.name = "absorb_tempered";
  tt.header = {"shift", "discounted_radius"};
  for (std::size_t i = 0; i < ar.temper_shift.size(); ++i)
    tt.add_row({fmt(ar.temper_shift[i]), fmt(ar.temper_value[i])});
  rep.tables.push_back(std::move(tt));

  CsvTable tb;
  tb.name = "absorb_beta";
  tb.header = {"beta", "radius", "beta_stable"};
  for (std::size_t i = 0; i < ar.beta_values.size(); ++i)
    tb.add_row({fmt(ar.beta_values[i]), fmt(ar.beta_radii[i]), fmt(ar.beta_stable)});
  rep.tables.push_back(std::move(tb));

  bool entries_ok = true;
  for (double e : ar.entry_times) entries_ok = entries_ok && e >= 0.0;

  Verdict v;
  v.id = "C09_absorbing_radius";
  v.runtime_s = sw.seconds();
  v.pass = entries_ok && ar.spread < 0.05 && ar.temper_decreasing;
  v.detail = "r_hat " + fmt(ar.r_hat) + ", spread " + fmt(ar.spread) +
             ", temper decreasing " + (ar.temper_decreasing ? "yes" : "no");
  rep.verdicts.push_back(std::move(v));
  return rep;
}

// ---------------------------------------------------------------------------
// squeeze: C10

ExperimentReport run_squeeze(const Config& cfg) {
  Stopwatch sw;
  ExperimentReport rep;
  const double L = cfg.get_double("L", 1.0);
  const int N = static_cast<int>(cfg.get_int("N", 128));
  const double dt = cfg.get_double("dt", 1e-4);
  const std::uint64_t seed = cfg.get_u64("seed", 2024);

  GridSpec g(L, N, 0.0, 1.0, dt);
  SolveConfig sc = solve_config(cfg, dt);

  SqueezeConfig qc;
  qc.m_list = cfg.get_int_list("sq_m_list", {4, 8, 16, 32});
  qc.windows = static_cast<int>(cfg.get_int("sq_windows", 32));
  qc.spin_up = cfg.get_double("sq_spin", 1.0);

  SqueezeReport sr = squeezing_estimate(g, sc, qc, seed + 8000);
  const auto oracle = linear_squeezing_oracle(g, 1.0, qc.m_list, dt);

  CsvTable t;
  t.name = "squeeze";
  t.header = {"m", "delta_hat", "se_log", "c_mean", "verdict"};
  bool any_verdict = false;
  for (const auto& r : sr.rows) {
    t.add_row({format_int(r.m), fmt(r.delta_hat), fmt(r.se_log), fmt(r.c_mean),
               r.verdict ? "1" : "0"});
    any_verdict = any_verdict || r.verdict;
  }
  rep.tables.push_back(std::move(t));

  CsvTable to;
  to.name = "squeeze_linear_oracle";
  to.header = {"m", "log_delta_scheme", "log_delta_oracle", "log_gap"};
  bool oracle_ok = true;
  double worst_gap = 0.0;
  for (const auto& r : oracle) {
    const double gap = std::abs(r.log_delta_hat - r.log_oracle);
    to.add_row({format_int(r.m), fmt(r.log_delta_hat), fmt(r.log_oracle), fmt(gap)});
    oracle_ok = oracle_ok && gap <= std::log(1.1);
    worst_gap = std::max(worst_gap, gap);
  }
  rep.tables.push_back(std::move(to));

  const double e_k = std::exp(sc.drift.K());

  Verdict v;
  v.id = "C10_squeezing";
  v.runtime_s = sw.seconds();
  v.pass = sr.delta_decreasing && any_verdict && oracle_ok && sr.gronwall_max_rho <= e_k;
  v.detail = std::string("delta decreasing ") + (sr.delta_decreasing ? "yes" : "no") +
             ", verdict attained " + (any_verdict ? "yes" : "no") +
             ", linear oracle worst log gap " + fmt(worst_gap) + ", full-space rho max " +
             fmt(sr.gronwall_max_rho);
  rep.verdicts.push_back(std::move(v));
  return rep;
}

// ---------------------------------------------------------------------------
// dimension: C11

ExperimentReport run_dimension(const Config& cfg) {
  Stopwatch sw;
  ExperimentReport rep;
  const double L = cfg.get_double("L", 1.0);
  const int N = static_cast<int>(cfg.get_int("N", 128));
  const std::uint64_t seed = cfg.get_u64("seed", 2024);
  const int threads = resolved_threads(cfg);

  CsvTable t;
  t.name = "dimension";
  t.header = {"cloud", "points", "dimension", "scales_used"};

  // estimator self-test on synthetic clouds
  const int self_n = static_cast<int>(cfg.get_int("dim_selftest_n", 10000));
  bool self_ok = true;
  {
    std::vector<DimensionEstimate> ests(3);
    parallel_for(3, threads, [&](std::size_t di) {
      const int d = static_cast<int>(di) + 1;
      SmallRng rng(hash_combine(hash_combine(0xd1aULL, seed), static_cast<std::uint64_t>(d)));
      std::vector<std::vector<double>> cloud(static_cast<std::size_t>(self_n));
      for (auto& p : cloud) {
        p.resize(static_cast<std::size_t>(d));
        for (auto& c : p) c = rng.uniform();
      }
      ests[di] = box_counting_dimension(cloud);
    });
    for (int d = 1; d <= 3; ++d) {
      const auto& e = ests[static_cast<std::size_t>(d - 1)];
      t.add_row({"synthetic_d" + format_int(d), format_int(self_n), fmt(e.dimension),
                 format_int(e.window_size)});
      self_ok = self_ok && std::abs(e.dimension - d) <= 0.2;
    }
  }

  // attractor sample: pullback images of a bounded set at fixed omega
  const int n_samples = static_cast<int>(cfg.get_int("dim_samples", 1000));
  const double ball = cfg.get_double("dim_ball", 5.0);
  const double horizon = cfg.get_double("dim_horizon", 5.5);
  const double dt_dim = cfg.get_double("dim_dt", 5e-4);
  const std::vector<int> embeds = cfg.get_int_list("dim_embed", {16, 32});

  GridSpec g(L, N, -horizon - 1.0, 0.0, dt_dim);
  SolveConfig sc = solve_config(cfg, dt_dim);

  const int embed_max = *std::max_element(embeds.begin(), embeds.end());
  const auto cloud_full =
      attractor_cloud(g, sc, n_samples, ball, horizon, 1.0, embed_max, seed + 9000);

  std::vector<double> dims;
  for (int m : embeds) {
    std::vector<std::vector<double>> cloud(cloud_full.size());
    for (std::size_t i = 0; i < cloud_full.size(); ++i)
      cloud[i] = std::vector<double>(cloud_full[i].begin(), cloud_full[i].begin() + m);
    const auto est = box_counting_dimension(cloud);
    t.add_row({"attractor_m" + format_int(m), format_int(n_samples), fmt(est.dimension),
               format_int(est.window_size)});
    dims.push_back(est.dimension);
  }
  rep.tables.push_back(std::move(t));

  bool attr_ok = true;
  for (double d : dims) attr_ok = attr_ok && std::isfinite(d) && d < 10.0;
  const double stability = std::abs(dims.back() - dims.front());
  // near-zero estimates compare against a floor so the ratio stays meaningful
  attr_ok = attr_ok && stability <= 0.10 * std::max({dims.front(), dims.back(), 0.5});

  Verdict v;
  v.id = "C11_fractal_dimension";
  v.runtime_s = sw.seconds();
  v.pass = self_ok && attr_ok;
  v.detail = std::string("self-test ") + (self_ok ? "ok" : "off") + ", attractor dims " +
             fmt(dims.front()) + " / " + fmt(dims.back());
  rep.verdicts.push_back(std::move(v));
  return rep;
}

// ---------------------------------------------------------------------------
// modes: C12

ExperimentReport run_modes(const Config& cfg) {
  Stopwatch sw;
  ExperimentReport rep;
  const double L = cfg.get_double("L", 1.0);
  const int N = static_cast<int>(cfg.get_int("N", 128));
  const double dt = cfg.get_double("dt", 1e-4);
  const std::uint64_t seed = cfg.get_u64("seed", 2024);
  const double T = cfg.get_double("md_T", 20.0);
  const double tol = cfg.get_double("md_tol", 1e-6);
  const std::vector<int> m_list = cfg.get_int_list("md_m_list", {0, 4, 8, 16, 32});

  GridSpec gf(L, N, 0.0, T, dt);
  SolveConfig sc = solve_config(cfg, dt);
  const Field u0 = sine_profile(gf, {0.8, 0.3});
  const Field v0 = sine_profile(gf, {-0.5, 0.2, -0.3});

  const auto fwd = determining_modes_forward(gf, sc, u0, v0, m_list, T, tol, seed + 11000);

  CsvTable t;
  t.name = "modes_forward";
  t.header = {"m", "applicable", "p_below_time", "full_below_time", "final_p_diff",
              "final_full_diff", "criterion_ok"};
  for (const auto& r : fwd.rows)
    t.add_row({format_int(r.m), r.applicable ? "1" : "0", fmt(r.p_below_time),
               fmt(r.full_below_time), fmt(r.final_p_diff), fmt(r.final_full_diff),
               r.criterion_ok ? "1" : "0"});
  rep.tables.push_back(std::move(t));

  const std::vector<double> horizons = cfg.get_list("md_horizons", {4.0, 8.0, 16.0});
  const std::vector<double> r_times = cfg.get_list("md_r_times", {-1.0, 0.0});
  const double t_back = *std::max_element(horizons.begin(), horizons.end());
  GridSpec gp(L, N, -t_back - 1.0, 0.0, dt);
  const auto pb = determining_modes_pullback(gp, sc, sine_profile(gp, {0.8, 0.3}),
                                             sine_profile(gp, {-0.5, 0.2, -0.3}), m_list,
                                             horizons, r_times, tol, 1.0, seed + 11000);

  CsvTable tp;
  tp.name = "modes_pullback";
  tp.header = {"m", "horizon", "r", "p_diff", "full_diff"};
  for (const auto& r : pb.rows)
    tp.add_row({format_int(r.m), fmt(r.horizon), fmt(r.r), fmt(r.p_diff), fmt(r.full_diff)});
  rep.tables.push_back(std::move(tp));

  const bool fwd_ok = fwd.m_star >= 0 && fwd.m_star <= 32;
  bool fwd_all = true;
  for (const auto& r : fwd.rows)
    if (r.applicable && r.m >= fwd.m_star && fwd.m_star >= 0)
      fwd_all = fwd_all && r.criterion_ok && r.final_full_diff < tol;

  Verdict v;
  v.id = "C12_determining_modes";
  v.runtime_s = sw.seconds();
  v.pass = fwd_ok && fwd_all && pb.criterion_ok;
  v.detail = "forward m* = " + format_int(fwd.m_star) + ", pullback at largest horizon " +
             (pb.criterion_ok ? "converged" : "not converged");
  rep.verdicts.push_back(std::move(v));
  return rep;
}

// ---------------------------------------------------------------------------
// inequalities: C13

ExperimentReport run_inequalities(const Config& cfg) {
  Stopwatch sw;
  ExperimentReport rep;
  const std::uint64_t seed = cfg.get_u64("seed", 2024);
  const int n_samples = static_cast<int>(cfg.get_int("ineq_samples", 1000));
  const double tol = cfg.get_double("ineq_tol", 1e-7);
  const int threads = resolved_threads(cfg);
  const double L = cfg.get_double("L", 1.0);

  CsvTable t;
  t.name = "inequalities";
  t.header = {"lemma", "sample", "p", "margin", "verdict"};

  int violations = 0;

  // Poincare in L^p
  {
    const double p_choices[5] = {1.0, 1.5, 2.0, 4.0, 8.0};
    std::vector<IneqResult> results(static_cast<std::size_t>(n_samples));
    std::vector<double> ps(static_cast<std::size_t>(n_samples));
    parallel_for(results.size(), threads, [&](std::size_t i) {
      SmallRng rng(hash_combine(hash_combine(0x9017caULL, seed), i));
      const double p = p_choices[i % 5];
      ps[i] = p;
      if (i % 2 == 0) {
        std::vector<double> amps(6);
        for (std::size_t n = 0; n < amps.size(); ++n)
          amps[n] = rng.uniform(-1.0, 1.0) / static_cast<double>(n + 1);
        results[i] = poincare_lp_check(SampleFunction::sine_series(L, amps), p, tol);
      } else {
        std::vector<double> poly(4);
        for (auto& c : poly) c = rng.uniform(-1.0, 1.0);
        results[i] = poincare_lp_check(SampleFunction::x_times_poly(L, poly), p, tol);
      }
    });
    for (std::size_t i = 0; i < results.size(); ++i) {
      t.add_row({"poincare_lp", format_int(static_cast<long long>(i)), fmt(ps[i]),
                 fmt(results[i].margin), pass_str(results[i].pass)});
      if (!results[i].pass) ++violations;
    }
  }

  // Laplacian against odd powers
  {
    std::vector<OddPowerResult> results(static_cast<std::size_t>(n_samples));
    std::vector<int> ps(static_cast<std::size_t>(n_samples));
    parallel_for(results.size(), threads, [&](std::size_t i) {
      SmallRng rng(hash_combine(hash_combine(0x0ddULL, seed), i));
      const int p = 1 + static_cast<int>(i % 3);
      ps[i] = p;
      std::vector<double> amps(5);
      for (std::size_t n = 0; n < amps.size(); ++n)
        amps[n] = rng.uniform(-1.0, 1.0) / static_cast<double>((n + 1) * (n + 1));
      results[i] = odd_power_check(SampleFunction::sine_series(L, amps), p, tol);
    });
    for (std::size_t i = 0; i < results.size(); ++i) {
      t.add_row({"odd_power", format_int(static_cast<long long>(i)),
                 format_int(ps[i]), fmt(std::min(results[i].laplacian_form.margin,
                                                 results[i].gradient_form.margin)),
                 pass_str(results[i].pass)});
      if (!results[i].pass) ++violations;
    }
  }

  // kernel-derivative bound for Lipschitz data
  {
    std::vector<DerivativeBoundResult> results(static_cast<std::size_t>(n_samples));
    parallel_for(results.size(), threads, [&](std::size_t i) {
      SmallRng rng(hash_combine(hash_combine(0xde4b0ULL, seed), i));
      double a = rng.uniform(-2.0, 2.0);
      double b = rng.uniform(-2.0, 2.0);
      const double c = rng.uniform(-1.0, 1.0);
      if (std::max(std::abs(a + b), std::abs(a - b)) < 0.1) a += 0.5;
      const double lam = std::max(std::abs(a + b), std::abs(a - b));
      results[i] = derivative_bound_check(
          [a, b, c](double y) { return a * y + b * std::abs(y - c); }, lam,
          {0.01, 1.0, 100.0}, 50, tol, c);
    });
    for (std::size_t i = 0; i < results.size(); ++i) {
      t.add_row({"derivative_bound", format_int(static_cast<long long>(i)), "0",
                 fmt(results[i].bound - results[i].max_value), pass_str(results[i].pass)});
      if (!results[i].pass) ++violations;
    }
  }

  rep.tables.push_back(std::move(t));

  Verdict v;
  v.id = "C13_appendix_inequalities";
  v.runtime_s = sw.seconds();
  v.pass = violations == 0;
  v.detail = format_int(violations) + " violations over " +
             format_int(3LL * n_samples) + " samples";
  rep.verdicts.push_back(std::move(v));
  return rep;
}

// ---------------------------------------------------------------------------

ExperimentReport run_all(const Config& cfg) {
  ExperimentReport rep;
  rep.merge(run_greenbound(cfg));
  rep.merge(run_zdiag(cfg));
  rep.merge(run_simulate(cfg));
  rep.merge(run_pullback(cfg));
  rep.merge(run_absorb(cfg));
  rep.merge(run_squeeze(cfg));
  rep.merge(run_dimension(cfg));
  rep.merge(run_modes(cfg));
  rep.merge(run_inequalities(cfg));
  std::sort(rep.verdicts.begin(), rep.verdicts.end(),
            [](const Verdict& a, const Verdict& b) { return a.id < b.id; });
  return rep;
}

ExperimentReport run_command(const std::string& command, const Config& cfg) {
  if (command == "simulate") return run_simulate(cfg);
  if (command == "zdiag") return run_zdiag(cfg);
  if (command == "greenbound") return run_greenbound(cfg);
  if (command == "pullback") return run_pullback(cfg);
  if (command == "absorb") return run_absorb(cfg);
  if (command == "squeeze") return run_squeeze(cfg);
  if (command == "dimension") return run_dimension(cfg);
  if (command == "modes") return run_modes(cfg);
  if (command == "inequalities") return run_inequalities(cfg);
  if (command == "all") return run_all(cfg);
  throw ConfigInvalid("ConfigInvalid: unknown command '" + command + "'");
}

std::string summary_text(const ExperimentReport& report) {
  std::string out;
  int passed = 0;
  for (const auto& v : report.verdicts) {
    out += "[" + std::string(v.pass ? "PASS" : "FAIL") + "] " + v.id + ": " + v.detail + "\n";
    if (v.pass) ++passed;
  }
  out += "RESULT: " + std::string(report.all_pass() ? "PASS" : "FAIL") + " (" +
         format_int(passed) + "/" +
         format_int(static_cast<long long>(report.verdicts.size())) + ")\n";
  return out;
}

void write_report(const ExperimentReport& report, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  for (const auto& t : report.tables)
    write_csv(out_dir + "/" + t.name + ".csv", t);
  for (const auto& [name, bytes] : report.blobs) {
    std::ofstream f(out_dir + "/" + name, std::ios::binary);
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  }
  std::ofstream s(out_dir + "/summary.txt", std::ios::binary);
  s << summary_text(report);
}

}  // namespace acsheet
