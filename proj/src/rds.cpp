#include "acsheet/rds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_set>

#include "acsheet/rng.hpp"
#include "acsheet/thread_pool.hpp"

namespace acsheet {

namespace {

double median_sorted(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// smooth random profile with unit L2 norm and content in every mode
Field random_unit_profile(const GridSpec& g, SmallRng& rng) {
  std::vector<double> amps(static_cast<std::size_t>(g.N()));
  for (int n = 1; n <= g.N(); ++n)
    amps[static_cast<std::size_t>(n - 1)] = rng.uniform(-1.0, 1.0) / n;
  Field f = sine_profile(g, amps);
  const double nrm = f.l2_norm();
  f *= 1.0 / nrm;
  return f;
}

}  // namespace

SpectralZ spun_up_z(const SolverEngine& eng, const NoiseSource& noise,
                    std::int64_t k_start, double spin_up_time) {
  const GridSpec& g = eng.grid();
  const std::int64_t spin_steps = g.time_index(spin_up_time);
  SpectralZ z = eng.make_z(k_start - spin_steps);
  std::vector<double> row(static_cast<std::size_t>(g.N() + 1));
  for (std::int64_t s = 0; s < spin_steps; ++s) {
    noise.fill_row(z.step_index(), row);
    z.step_row(row);
  }
  return z;
}

PullbackReport pullback_experiment(const GridSpec& g, const SolveConfig& cfg,
                                   const std::vector<Field>& starts,
                                   const std::vector<double>& horizons,
                                   std::uint64_t seed, double spin_up, double norm_cap) {
  for (const Field& f : starts)
    if (f.l2_norm() > norm_cap) throw UnboundedInitialSet();

  SolverEngine eng(g, cfg);
  NoisePath noise(seed, g);
  PullbackReport rep;

  std::vector<Field> prev_images;
  double prev_diam = -1.0;
  for (double horizon : horizons) {
    const std::int64_t k_start = -g.time_index(horizon);
    SpectralZ z = spun_up_z(eng, noise, k_start, spin_up);
    Field z_nodes = z.node_field();
    std::vector<Field> vs = starts;
    for (Field& v : vs) v -= z_nodes;
    eng.march(z, z_nodes, vs, noise, -k_start);

    std::vector<Field> images = vs;
    for (Field& u : images) u += z_nodes;

    double diam = 0.0;
    for (std::size_t a = 0; a < images.size(); ++a)
      for (std::size_t b = a + 1; b < images.size(); ++b)
        diam = std::max(diam, l2_distance(images[a], images[b]));

    double semi = 0.0;
    if (!prev_images.empty()) {
      for (const Field& u : images) {
        double closest = std::numeric_limits<double>::infinity();
        for (const Field& w : prev_images) closest = std::min(closest, l2_distance(u, w));
        semi = std::max(semi, closest);
      }
    }

    PullbackRow row;
    row.horizon = horizon;
    row.diameter = diam;
    row.semidist_prev = semi;
    rep.rows.push_back(row);
    if (prev_diam >= 0.0 && diam > prev_diam * (1.0 + 1e-9) + 1e-15)
      rep.diameters_non_increasing = false;
    prev_diam = diam;
    prev_images = std::move(images);
  }
  rep.last_images = std::move(prev_images);
  return rep;
}

namespace {

// |V|_q^q series of one forward run; V starts at u0 with Z starting at 0
std::vector<double> v_norm_series(const GridSpec& g, const SolveConfig& cfg,
                                  const Field& u0, const NoiseSource& noise, double T,
                                  double sample_every, double q) {
  SolverEngine eng(g, cfg);
  SpectralZ z = eng.make_z(0);
  Field z_nodes = z.node_field();
  Field vs[1] = {u0};
  const std::int64_t stride = g.time_index(sample_every);
  const std::int64_t n_steps = g.time_index(T);
  std::vector<double> out;
  out.push_back(u0.lq_norm_pow(q));
  std::vector<double> row(static_cast<std::size_t>(g.N() + 1));
  for (std::int64_t s = 0; s < n_steps; ++s) {
    eng.advance(z, z_nodes, vs, noise, row);
    if ((s + 1) % stride == 0) out.push_back(vs[0].lq_norm_pow(q));
  }
  return out;
}

}  // namespace

AbsorbReport absorbing_radius(const GridSpec& g, const SolveConfig& cfg,
                              const AbsorbConfig& acfg, std::uint64_t seed) {
  if (cfg.beta < acfg.beta_threshold) throw BetaBelowThreshold();

  AbsorbReport rep;
  rep.q = 2.0 * cfg.drift.p();
  rep.u0_norms = acfg.u0_norms;

  SolverEngine eng(g, cfg);
  NoisePath noise(seed, g);

  // all magnitudes share one Z march
  std::vector<Field> vs;
  for (double nrm : acfg.u0_norms) {
    Field f = flat_profile(g, 1.0);
    f *= nrm / f.l2_norm();
    vs.push_back(std::move(f));
  }
  const std::int64_t stride = g.time_index(acfg.sample_every);
  const std::int64_t n_steps = g.time_index(acfg.T);
  std::vector<std::vector<double>> series(vs.size());
  for (std::size_t i = 0; i < vs.size(); ++i)
    series[i].push_back(vs[i].lq_norm_pow(rep.q));

  {
    SpectralZ z = eng.make_z(0);
    Field z_nodes = z.node_field();
    std::vector<double> row(static_cast<std::size_t>(g.N() + 1));
    for (std::int64_t s = 0; s < n_steps; ++s) {
      eng.advance(z, z_nodes, vs, noise, row);
      if ((s + 1) % stride == 0)
        for (std::size_t i = 0; i < vs.size(); ++i)
          series[i].push_back(vs[i].lq_norm_pow(rep.q));
    }
  }

  const std::size_t win_lo = series[0].size() / 2;
  for (std::size_t i = 0; i < series.size(); ++i) {
    double sup = 0.0;
    for (std::size_t s = win_lo; s < series[i].size(); ++s) sup = std::max(sup, series[i][s]);
    rep.window_sups.push_back(sup);
    rep.r_hat = std::max(rep.r_hat, sup);
  }
  for (std::size_t i = 0; i < series.size(); ++i) {
    double entry = -1.0;
    for (std::size_t s = 0; s < series[i].size(); ++s)
      if (series[i][s] <= rep.r_hat) {
        entry = static_cast<double>(s) * acfg.sample_every;
        break;
      }
    rep.entry_times.push_back(entry);
  }
  const auto [mn, mx] = std::minmax_element(rep.window_sups.begin(), rep.window_sups.end());
  rep.spread = *mx / *mn - 1.0;

  // side runs use a coarser step: their data is moderate, and the shifted
  // paths are independent solves anyway
  GridSpec g_aux(g.L(), g.N(), 0.0, acfg.T, acfg.aux_dt);
  SolveConfig cfg_aux = cfg;
  cfg_aux.dt = acfg.aux_dt;
  Field f_aux = flat_profile(g_aux, 1.0);
  f_aux *= acfg.temper_u0_norm / f_aux.l2_norm();

  auto window_sup_of = [&](const NoiseSource& src, const SolveConfig& c) {
    auto ser = v_norm_series(g_aux, c, f_aux, src, acfg.T, acfg.sample_every, rep.q);
    double sup = 0.0;
    for (std::size_t s = ser.size() / 2; s < ser.size(); ++s) sup = std::max(sup, ser[s]);
    return sup;
  };

  // temperedness: radius of the shifted path, discounted
  {
    NoisePath noise_aux(seed, g_aux);
    rep.temper_shift = acfg.temper_shifts;
    rep.temper_value.assign(acfg.temper_shifts.size(), 0.0);
    parallel_for(acfg.temper_shifts.size(), acfg.threads, [&](std::size_t i) {
      NoisePath shifted = noise_aux.shifted(acfg.temper_shifts[i]);
      rep.temper_value[i] =
          window_sup_of(shifted, cfg_aux) * std::exp(-acfg.eps_temper * acfg.temper_shifts[i]);
    });
    for (std::size_t i = 1; i < rep.temper_value.size(); ++i)
      if (rep.temper_value[i] >= rep.temper_value[i - 1]) rep.temper_decreasing = false;
  }

  // optional beta scan: smallest beta whose radius is within 10% of the next
  if (!acfg.beta_sweep.empty()) {
    NoisePath noise_aux(seed, g_aux);
    rep.beta_values = acfg.beta_sweep;
    rep.beta_radii.assign(acfg.beta_sweep.size(), 0.0);
    parallel_for(acfg.beta_sweep.size(), acfg.threads, [&](std::size_t i) {
      SolveConfig c2 = cfg_aux;
      c2.beta = acfg.beta_sweep[i];
      rep.beta_radii[i] = window_sup_of(noise_aux, c2);
    });
    for (std::size_t i = 0; i + 1 < rep.beta_radii.size(); ++i) {
      if (std::abs(rep.beta_radii[i] / rep.beta_radii[i + 1] - 1.0) < 0.10) {
        rep.beta_stable = rep.beta_values[i];
        break;
      }
    }
  }
  return rep;
}

SqueezeReport squeezing_estimate(const GridSpec& g, const SolveConfig& cfg,
                                 const SqueezeConfig& scfg, std::uint64_t seed) {
  SolverEngine eng(g, cfg);
  NoisePath noise(seed, g);
  SineBasis basis(g);

  SpectralZ z = spun_up_z(eng, noise, 0, scfg.spin_up);
  Field z_nodes = z.node_field();

  // pilot trajectory supplies in-ball base points for the pairs
  Field pilot(g);
  const std::int64_t unit = g.time_index(1.0);

  std::vector<std::vector<double>> log_rho(scfg.m_list.size());
  SqueezeReport rep;

  std::vector<double> row(static_cast<std::size_t>(g.N() + 1));
  std::vector<double> diff(static_cast<std::size_t>(g.N()));
  std::vector<double> coeffs;

  for (int w = 0; w < scfg.windows; ++w) {
    SmallRng rng(hash_combine(hash_combine(0x5e7a11ceULL, seed), static_cast<std::uint64_t>(w)));
    Field perturb = random_unit_profile(g, rng);
    perturb *= 0.5 * scfg.pair_separation;
    Field fields[3] = {pilot, pilot, pilot};
    fields[1] += perturb;
    fields[2] -= perturb;
    const double sep0 = l2_distance(fields[1], fields[2]);
    if (sep0 < 1e-12) throw DegeneratePair();

    for (std::int64_t s = 0; s < unit; ++s) eng.advance(z, z_nodes, fields, noise, row);

    for (int i = 0; i < g.N(); ++i)
      diff[static_cast<std::size_t>(i)] = fields[1][i] - fields[2][i];
    basis.to_modes(diff, coeffs);
    const double parseval = g.dx() * (g.N() + 1) / 2.0;
    double total = 0.0;
    for (double c : coeffs) total += c * c;
    rep.gronwall_max_rho =
        std::max(rep.gronwall_max_rho, std::sqrt(parseval * total) / sep0);
    for (std::size_t mi = 0; mi < scfg.m_list.size(); ++mi) {
      const int m = scfg.m_list[mi];
      double q = 0.0;
      for (int n = m; n < g.N(); ++n)
        q += coeffs[static_cast<std::size_t>(n)] * coeffs[static_cast<std::size_t>(n)];
      log_rho[mi].push_back(std::log(std::sqrt(parseval * q) / sep0));
    }
    pilot = fields[0];
  }

  double prev_log_delta = 0.0, prev_se = 0.0;
  for (std::size_t mi = 0; mi < scfg.m_list.size(); ++mi) {
    const auto& lr = log_rho[mi];
    const double med = median_sorted(lr);
    double mean = 0.0, var = 0.0;
    for (double v : lr) mean += v;
    mean /= static_cast<double>(lr.size());
    for (double v : lr) var += (v - mean) * (v - mean);
    var /= static_cast<double>(lr.size() - 1);
    const double se = 1.2533 * std::sqrt(var / static_cast<double>(lr.size()));

    SqueezeRow rowr;
    rowr.m = scfg.m_list[mi];
    rowr.delta_hat = std::exp(med);
    rowr.se_log = se;
    rowr.c_mean = mean - med;
    rowr.verdict = rowr.c_mean < -med;  // E[c] < ln(1/delta)
    rep.rows.push_back(rowr);

    if (mi > 0) {
      const double slack = 2.0 * std::sqrt(se * se + prev_se * prev_se);
      if (!(med < prev_log_delta + slack)) rep.delta_decreasing = false;
    }
    prev_log_delta = med;
    prev_se = se;
  }
  return rep;
}

std::vector<LinearSqueezeRow> linear_squeezing_oracle(const GridSpec& g, double a,
                                                      const std::vector<int>& m_list,
                                                      double dt_cap) {
  std::vector<LinearSqueezeRow> rows;
  for (int m : m_list) {
    const double lam = g.lambda_fd(m + 1);
    // per-mode step small enough that the implicit-Euler rate bias stays
    // inside the 10% comparison band
    double dt = std::min(dt_cap, 0.05 / (lam * lam));
    const double steps = std::ceil(1.0 / dt);
    dt = 1.0 / steps;
    LinearSqueezeRow r;
    r.m = m;
    r.log_delta_hat = steps * (std::log1p(-a * dt) - std::log1p(dt * lam));
    r.log_oracle = -(a + lam);
    rows.push_back(r);
  }
  return rows;
}

DimensionEstimate box_counting_dimension(const std::vector<std::vector<double>>& points,
                                         int max_levels, double occupancy_cap) {
  if (points.size() < 2) throw InsufficientSamples();
  const std::size_t dim = points[0].size();

  std::vector<double> lo(dim, std::numeric_limits<double>::infinity());
  std::vector<double> hi(dim, -std::numeric_limits<double>::infinity());
  for (const auto& p : points)
    for (std::size_t d = 0; d < dim; ++d) {
      lo[d] = std::min(lo[d], p[d]);
      hi[d] = std::max(hi[d], p[d]);
    }
  double extent = 0.0;
  for (std::size_t d = 0; d < dim; ++d) extent = std::max(extent, hi[d] - lo[d]);

  DimensionEstimate est;
  if (extent <= 0.0) {  // all points coincide
    est.rows.push_back({1.0, 1});
    return est;
  }

  std::vector<double> lx, ly;
  std::unordered_set<std::uint64_t> boxes;
  for (int lev = 1; lev <= max_levels; ++lev) {
    const double eps = extent / static_cast<double>(1 << lev);
    boxes.clear();
    for (const auto& p : points) {
      std::uint64_t h = 0x0b5e55edULL;
      for (std::size_t d = 0; d < dim; ++d) {
        const auto idx = static_cast<std::int64_t>(std::floor((p[d] - lo[d]) / eps));
        h = hash_combine(h, static_cast<std::uint64_t>(idx));
      }
      boxes.insert(h);
    }
    const long count = static_cast<long>(boxes.size());
    est.rows.push_back({eps, count});
    if (count >= 2 &&
        count <= static_cast<long>(occupancy_cap * static_cast<double>(points.size()))) {
      lx.push_back(std::log(1.0 / eps));
      ly.push_back(std::log(static_cast<double>(count)));
    }
  }

  est.window_size = static_cast<int>(lx.size());
  if (lx.size() >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(lx.size());
    for (std::size_t i = 0; i < lx.size(); ++i) {
      sx += lx[i];
      sy += ly[i];
      sxx += lx[i] * lx[i];
      sxy += lx[i] * ly[i];
    }
    est.dimension = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  }
  return est;
}

std::vector<std::vector<double>> attractor_cloud(const GridSpec& g, const SolveConfig& cfg,
                                                 int n_samples, double ball_radius,
                                                 double horizon, double spin_up,
                                                 int m_embed, std::uint64_t seed) {
  if (n_samples < 1000) throw InsufficientSamples();
  SolverEngine eng(g, cfg);
  NoisePath noise(seed, g);
  SineBasis basis(g);

  const std::int64_t k_start = -g.time_index(horizon);
  SpectralZ z = spun_up_z(eng, noise, k_start, spin_up);
  Field z_nodes = z.node_field();

  SmallRng rng(hash_combine(0xc1bd5ULL, seed));
  std::vector<Field> vs;
  vs.reserve(static_cast<std::size_t>(n_samples));
  for (int s = 0; s < n_samples; ++s) {
    Field u0 = random_unit_profile(g, rng);
    u0 *= ball_radius * std::sqrt(rng.uniform());
    u0 -= z_nodes;
    vs.push_back(std::move(u0));
  }
  eng.march(z, z_nodes, vs, noise, -k_start);

  std::vector<std::vector<double>> cloud;
  cloud.reserve(vs.size());
  std::vector<double> coeffs;
  const double scale = basis.orthonormal_scale();
  for (Field& v : vs) {
    v += z_nodes;
    basis.to_modes(v.values(), coeffs);
    std::vector<double> pt(static_cast<std::size_t>(m_embed));
    for (int n = 0; n < m_embed; ++n) pt[static_cast<std::size_t>(n)] = scale * coeffs[static_cast<std::size_t>(n)];
    cloud.push_back(std::move(pt));
  }
  return cloud;
}

ModesForwardReport determining_modes_forward(const GridSpec& g, const SolveConfig& cfg,
                                             const Field& u0, const Field& v0,
                                             const std::vector<int>& m_list, double T,
                                             double tol, std::uint64_t seed) {
  SolverEngine eng(g, cfg);
  NoisePath noise(seed, g);
  SineBasis basis(g);

  ModesForwardReport rep;
  rep.T = T;
  rep.tol = tol;
  for (int m : m_list) {
    ModesForwardRow r;
    r.m = m;
    r.applicable = m > 0;
    rep.rows.push_back(r);
  }

  SpectralZ z = eng.make_z(0);
  Field z_nodes = z.node_field();
  Field fields[2] = {u0, v0};

  const std::int64_t n_steps = g.time_index(T);
  const std::int64_t stride = g.time_index(0.05);
  std::vector<double> row(static_cast<std::size_t>(g.N() + 1));
  std::vector<double> diff(static_cast<std::size_t>(g.N()));
  std::vector<double> coeffs;
  const double parseval = g.dx() * (g.N() + 1) / 2.0;

  for (std::int64_t s = 0; s < n_steps; ++s) {
    eng.advance(z, z_nodes, fields, noise, row);
    if ((s + 1) % stride != 0 && s + 1 != n_steps) continue;
    const double t = (s + 1) * g.dt();
    for (int i = 0; i < g.N(); ++i)
      diff[static_cast<std::size_t>(i)] = fields[0][i] - fields[1][i];
    basis.to_modes(diff, coeffs);
    std::vector<double> prefix(coeffs.size() + 1, 0.0);
    for (std::size_t n = 0; n < coeffs.size(); ++n)
      prefix[n + 1] = prefix[n] + coeffs[n] * coeffs[n];
    const double total = std::sqrt(parseval * prefix.back());
    for (auto& r : rep.rows) {
      const double pn = std::sqrt(parseval * prefix[static_cast<std::size_t>(r.m)]);
      if (r.p_below_time < 0.0 && pn < tol) r.p_below_time = t;
      if (r.full_below_time < 0.0 && total < tol) r.full_below_time = t;
      if (s + 1 == n_steps) {
        r.final_p_diff = pn;
        r.final_full_diff = total;
      }
    }
  }
  for (auto& r : rep.rows) {
    r.criterion_ok = r.applicable && (r.p_below_time < 0.0 || r.full_below_time >= 0.0);
    const bool effective = r.applicable && r.p_below_time >= 0.0 && r.full_below_time >= 0.0;
    if (effective && rep.m_star < 0) rep.m_star = r.m;
  }
  return rep;
}

ModesPullbackReport determining_modes_pullback(const GridSpec& g, const SolveConfig& cfg,
                                               const Field& u0, const Field& v0,
                                               const std::vector<int>& m_list,
                                               const std::vector<double>& horizons,
                                               const std::vector<double>& r_times,
                                               double tol, double spin_up,
                                               std::uint64_t seed) {
  SolverEngine eng(g, cfg);
  NoisePath noise(seed, g);
  SineBasis basis(g);

  ModesPullbackReport rep;
  rep.tol = tol;
  const double parseval = g.dx() * (g.N() + 1) / 2.0;
  bool last_ok = true;

  for (double s : horizons) {
    const std::int64_t k_start = -g.time_index(s);
    SpectralZ z = spun_up_z(eng, noise, k_start, spin_up);
    Field z_nodes = z.node_field();
    Field fields[2] = {u0, v0};
    fields[0] -= z_nodes;
    fields[1] -= z_nodes;

    std::vector<std::int64_t> r_steps;
    for (double r : r_times) r_steps.push_back(g.time_index(r));

    std::vector<double> row(static_cast<std::size_t>(g.N() + 1));
    std::vector<double> diff(static_cast<std::size_t>(g.N()));
    std::vector<double> coeffs;
    for (std::int64_t k = k_start; k < 0; ++k) {
      eng.advance(z, z_nodes, fields, noise, row);
      const std::int64_t know = k + 1;
      if (std::find(r_steps.begin(), r_steps.end(), know) == r_steps.end()) continue;
      for (int i = 0; i < g.N(); ++i)
        diff[static_cast<std::size_t>(i)] = fields[0][i] - fields[1][i];
      basis.to_modes(diff, coeffs);
      std::vector<double> prefix(coeffs.size() + 1, 0.0);
      for (std::size_t n = 0; n < coeffs.size(); ++n)
        prefix[n + 1] = prefix[n] + coeffs[n] * coeffs[n];
      const double total = std::sqrt(parseval * prefix.back());
      for (int m : m_list) {
        ModesPullbackRow rr;
        rr.m = m;
        rr.horizon = s;
        rr.r = know * g.dt();
        rr.p_diff = std::sqrt(parseval * prefix[static_cast<std::size_t>(m)]);
        rr.full_diff = total;
        rep.rows.push_back(rr);
        if (s == horizons.back() && total >= tol) last_ok = false;
      }
    }
  }
  rep.criterion_ok = last_ok;
  return rep;
}

}  // namespace acsheet
