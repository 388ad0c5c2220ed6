#include "acsheet/stoch_conv.hpp"

#include <algorithm>
#include <cmath>

#include "acsheet/errors.hpp"
#include "acsheet/rng.hpp"

namespace acsheet {

namespace {
constexpr double kPi = 3.14159265358979323846264338328;

double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double fit_loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const int n = static_cast<int>(xs.size());
  for (int i = 0; i < n; ++i) {
    const double lx = std::log(xs[static_cast<std::size_t>(i)]);
    const double ly = std::log(ys[static_cast<std::size_t>(i)]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

SpectralZTables::SpectralZTables(const GridSpec& g, double beta_, int n_modes_)
    : n_modes(n_modes_),
      cells(g.N() + 1),
      n_nodes(g.N()),
      dt(g.dt()),
      dx(g.dx()),
      L(g.L()),
      beta(beta_) {
  if (n_modes < 1 || n_modes > g.N()) throw GridMismatch("n_modes out of range");
  const double root = std::sqrt(2.0 / L);
  proj.resize(static_cast<std::size_t>(n_modes) * cells);
  synth.resize(static_cast<std::size_t>(n_nodes) * n_modes);
  decay.resize(static_cast<std::size_t>(n_modes));
  gain.resize(static_cast<std::size_t>(n_modes));
  mu.resize(static_cast<std::size_t>(n_modes));
  for (int n = 1; n <= n_modes; ++n) {
    const double w = n * kPi / L;
    // cell averages of e_n = sqrt(2/L) sin(n pi y / L)
    for (int j = 0; j < cells; ++j) {
      const double a = j * dx, b = (j + 1) * dx;
      proj[static_cast<std::size_t>(n - 1) * cells + j] =
          root * (std::cos(w * a) - std::cos(w * b)) / (w * dx);
    }
    for (int i = 1; i <= n_nodes; ++i)
      synth[static_cast<std::size_t>(i - 1) * n_modes + (n - 1)] =
          root * std::sin(n * kPi * i / (n_nodes + 1));
    const double m = beta + g.lambda(n);
    mu[static_cast<std::size_t>(n - 1)] = m;
    decay[static_cast<std::size_t>(n - 1)] = std::exp(-m * dt);
    gain[static_cast<std::size_t>(n - 1)] = -std::expm1(-m * dt) / (m * dt);
  }
}

SpectralZ::SpectralZ(std::shared_ptr<const SpectralZTables> tables, std::int64_t k_start)
    : tables_(std::move(tables)),
      z_(static_cast<std::size_t>(tables_->n_modes), 0.0),
      row_(static_cast<std::size_t>(tables_->cells), 0.0),
      k_(k_start) {}

SpectralZ::SpectralZ(const GridSpec& g, double beta, int n_modes, std::int64_t k_start)
    : SpectralZ(std::make_shared<SpectralZTables>(g, beta, n_modes), k_start) {}

void SpectralZ::step(const NoiseSource& noise, std::int64_t k) {
  if (k != k_) throw StepMisalignment();
  noise.fill_row(k, row_);
  step_row(row_);
}

void SpectralZ::step_row(std::span<const double> row) {
  const auto& T = *tables_;
  for (int n = 0; n < T.n_modes; ++n) {
    const double* pr = &T.proj[static_cast<std::size_t>(n) * T.cells];
    double dw = 0.0;
    for (int j = 0; j < T.cells; ++j) dw += pr[j] * row[static_cast<std::size_t>(j)];
    z_[static_cast<std::size_t>(n)] =
        T.decay[static_cast<std::size_t>(n)] * z_[static_cast<std::size_t>(n)] +
        T.gain[static_cast<std::size_t>(n)] * dw;
  }
  ++k_;
}

double SpectralZ::value_at(double x) const {
  const auto& T = *tables_;
  const double root = std::sqrt(2.0 / T.L);
  double s = 0.0;
  for (int n = 1; n <= T.n_modes; ++n)
    s += z_[static_cast<std::size_t>(n - 1)] * root * std::sin(n * kPi * x / T.L);
  return s;
}

void SpectralZ::node_field_into(Field& out) const {
  const auto& T = *tables_;
  for (int i = 0; i < T.n_nodes; ++i) {
    const double* row = &T.synth[static_cast<std::size_t>(i) * T.n_modes];
    double s = 0.0;
    for (int n = 0; n < T.n_modes; ++n) s += row[n] * z_[static_cast<std::size_t>(n)];
    out[i] = s;
  }
}

Field SpectralZ::node_field() const {
  Field f(tables_->n_nodes, tables_->dx);
  node_field_into(f);
  return f;
}

double z_kernel_quadrature(const NoiseSource& noise, const GridSpec& g, double beta,
                           double t, double x, std::int64_t k_start,
                           const KernelParams* kernel_override) {
  KernelParams kp;
  kp.L = g.L();
  kp.beta = beta;
  if (kernel_override) kp = *kernel_override;
  const std::int64_t k_end = g.time_index(t);
  double acc = 0.0;
  std::vector<double> row(static_cast<std::size_t>(g.N() + 1));
  for (std::int64_t k = k_start; k < k_end; ++k) {
    const double tau = t - (k + 0.5) * g.dt();
    noise.fill_row(k, row);
    for (int j = 0; j <= g.N(); ++j)
      acc += kernel_value(kp, tau, x, g.cell_mid(j)) * row[static_cast<std::size_t>(j)];
  }
  return acc;
}

namespace {
// modes with exp(-lambda_n tau) >= 1e-18 contribute above double precision
int modes_needed(double L, double tau) {
  return static_cast<int>(std::ceil(L * std::sqrt(41.5 / tau) / kPi)) + 2;
}
}  // namespace

ZKernelBatch::ZKernelBatch(const NoiseSource& noise, const GridSpec& g, double beta,
                           std::int64_t k_start, const std::vector<double>& eval_times)
    : g_(g), beta_(beta), k_start_(k_start) {
  k_end_ = k_start;
  for (double t : eval_times) k_end_ = std::max(k_end_, g.time_index(t));

  const std::size_t rows = static_cast<std::size_t>(k_end_ - k_start_);
  offset_.assign(rows + 1, 0);
  std::vector<int> n_of_row(rows, 0);
  for (std::size_t r = 0; r < rows; ++r) {
    const std::int64_t k = k_start_ + static_cast<std::int64_t>(r);
    double tau_min = -1.0;
    for (double t : eval_times) {
      const double tau = t - (k + 0.5) * g.dt();
      if (tau > 0.0 && (tau_min < 0.0 || tau < tau_min)) tau_min = tau;
    }
    n_of_row[r] = tau_min > 0.0 ? modes_needed(g.L(), tau_min) : 0;
    offset_[r + 1] = offset_[r] + static_cast<std::size_t>(n_of_row[r]);
  }
  s_.assign(offset_.back(), 0.0);

  const int cells = g.N() + 1;
  const double root = std::sqrt(2.0 / g.L());
  int n_cap = 0;
  for (std::size_t r = 0; r < rows; ++r) n_cap = std::max(n_cap, n_of_row[r]);
  std::vector<double> basis(static_cast<std::size_t>(n_cap) * cells);
  for (int n = 1; n <= n_cap; ++n)
    for (int j = 0; j < cells; ++j)
      basis[static_cast<std::size_t>(n - 1) * cells + j] =
          root * std::sin(n * kPi * g.cell_mid(j) / g.L());

  std::vector<double> row(static_cast<std::size_t>(cells));
  for (std::size_t r = 0; r < rows; ++r) {
    noise.fill_row(k_start_ + static_cast<std::int64_t>(r), row);
    double* out = &s_[offset_[r]];
    for (int n = 0; n < n_of_row[r]; ++n) {
      const double* b = &basis[static_cast<std::size_t>(n) * cells];
      double acc = 0.0;
      for (int j = 0; j < cells; ++j) acc += b[j] * row[static_cast<std::size_t>(j)];
      out[n] = acc;
    }
  }
}

double ZKernelBatch::value(double t, double x) const {
  const std::int64_t k_end = g_.time_index(t);
  const double root = std::sqrt(2.0 / g_.L());
  int n_cap = 0;
  for (std::size_t r = 0; r + 1 < offset_.size(); ++r)
    n_cap = std::max(n_cap, static_cast<int>(offset_[r + 1] - offset_[r]));
  std::vector<double> ex(static_cast<std::size_t>(n_cap));
  for (int n = 1; n <= n_cap; ++n)
    ex[static_cast<std::size_t>(n - 1)] = root * std::sin(n * kPi * x / g_.L());
  double acc = 0.0;
  for (std::int64_t k = k_start_; k < k_end; ++k) {
    const double tau = t - (k + 0.5) * g_.dt();
    const std::size_t r = static_cast<std::size_t>(k - k_start_);
    const double* sk = &s_[offset_[r]];
    const int n_avail = static_cast<int>(offset_[r + 1] - offset_[r]);
    const double a = kPi * kPi * tau / (g_.L() * g_.L());
    double sum = 0.0;
    for (int n = 1; n <= n_avail; ++n) {
      const double d = std::exp(-a * n * n);
      if (d < 1e-18 && n > 2) break;
      sum += d * ex[static_cast<std::size_t>(n - 1)] * sk[n - 1];
    }
    acc += std::exp(-beta_ * tau) * sum;
  }
  return acc;
}

GrowthReport growth_report(const GridSpec& g, const GrowthConfig& cfg,
                           std::uint64_t seed_base) {
  if (cfg.ensemble < 50) throw EnsembleTooSmall();
  GrowthReport rep;
  const TestFunction phi = TestFunction::from_sine_series(g, cfg.phi_modes);
  const auto& phim = phi.cell_mid_values();
  auto tables = std::make_shared<SpectralZTables>(g, cfg.beta, g.N());

  std::vector<std::int64_t> check_steps;
  for (double t : cfg.checkpoints) check_steps.push_back(g.time_index(t));
  const std::int64_t n_steps = g.time_index(cfg.t_max);

  Field zn(g);
  std::vector<double> row(static_cast<std::size_t>(g.N() + 1));
  for (int m = 0; m < cfg.ensemble; ++m) {
    NoisePath path(seed_base + static_cast<std::uint64_t>(m), g);
    SpectralZ z(tables, 0);
    double zphi = 0.0;
    std::size_t next_cp = 0;
    for (std::int64_t k = 0; k < n_steps; ++k) {
      path.fill_row(k, row);
      double dphi = 0.0;
      for (int j = 0; j <= g.N(); ++j) dphi += phim[static_cast<std::size_t>(j)] * row[static_cast<std::size_t>(j)];
      zphi += dphi;
      z.step_row(row);
      if (next_cp < check_steps.size() && k + 1 == check_steps[next_cp]) {
        const double t = (k + 1) * g.dt();
        z.node_field_into(zn);
        double sup = 0.0;  // signed supremum; boundary values are 0
        for (int i = 0; i < g.N(); ++i) sup = std::max(sup, zn[i]);
        ZDiagnosticsRow r;
        r.seed = seed_base + static_cast<std::uint64_t>(m);
        r.t = t;
        r.sup_norm = sup;
        r.z_phi_over_t = std::abs(zphi) / t;
        r.l2_norm = zn.l2_norm();
        r.l2p_norm = zn.lq_norm(cfg.q);
        rep.rows.push_back(r);
        ++next_cp;
      }
    }
  }

  for (std::size_t c = 0; c < cfg.checkpoints.size(); ++c) {
    const double t = cfg.checkpoints[c];
    const double threshold = std::pow(t, 0.25 + cfg.eps);
    int exceed = 0;
    std::vector<double> zphis;
    for (const auto& r : rep.rows)
      if (r.t == t) {
        if (r.sup_norm > threshold) ++exceed;
        zphis.push_back(r.z_phi_over_t);
      }
    GrowthCheckpoint cp;
    cp.t = t;
    const double n = static_cast<double>(zphis.size());
    cp.exceed_fraction = exceed / n;
    cp.exceed_se = std::sqrt(cp.exceed_fraction * (1.0 - cp.exceed_fraction) / n);
    cp.median_zphi_over_t = median_of(zphis);
    rep.checkpoints.push_back(cp);
  }

  if (cfg.holder_diagnostic) {
    // short fine-step run: increment scaling inside the rough regime
    const double dt_f = 1e-4;
    GridSpec gf(g.L(), g.N(), 0.0, 1.2, dt_f);
    auto tf = std::make_shared<SpectralZTables>(gf, cfg.beta, gf.N());
    const int n_lags = 7;
    std::vector<double> time_rms(n_lags, 0.0), space_rms(0);
    std::vector<double> space_lags;
    int time_count = 0;
    const int space_max_lag = std::min(16, g.N() / 4);
    for (int l = 1; l <= space_max_lag; l *= 2) space_lags.push_back(l * gf.dx());
    space_rms.assign(space_lags.size(), 0.0);
    int space_count = 0;
    for (int s = 0; s < 4; ++s) {
      NoisePath path(hash_combine(seed_base, 0x401de7ULL) + static_cast<std::uint64_t>(s), gf);
      SpectralZ z(tf, 0);
      const std::int64_t burn = gf.time_index(1.0);
      std::vector<Field> history;
      Field cur(gf);
      for (std::int64_t k = 0; k < burn + (1 << n_lags); ++k) {
        z.step(path, k);
        if (k >= burn) {
          z.node_field_into(cur);
          history.push_back(cur);
        }
      }
      // time increments at dyadic lags, pooled over nodes
      for (int m = 0; m < n_lags; ++m) {
        const int lag = 1 << m;
        double acc = 0.0;
        int cnt = 0;
        for (std::size_t b = 0; b + lag < history.size(); b += lag) {
          for (int i = 0; i < gf.N(); ++i) {
            const double d = history[b + lag][i] - history[b][i];
            acc += d * d;
            ++cnt;
          }
        }
        time_rms[static_cast<std::size_t>(m)] += acc / cnt;
      }
      ++time_count;
      // space increments at the final snapshot
      const Field& zs = history.back();
      for (std::size_t li = 0; li < space_lags.size(); ++li) {
        const int lag = 1 << li;
        double acc = 0.0;
        int cnt = 0;
        for (int i = 0; i + lag < gf.N(); ++i) {
          const double d = zs[i + lag] - zs[i];
          acc += d * d;
          ++cnt;
        }
        space_rms[li] += acc / cnt;
      }
      ++space_count;
    }
    std::vector<double> tl, tv, sl, sv;
    for (int m = 0; m < n_lags; ++m) {
      tl.push_back((1 << m) * dt_f);
      tv.push_back(std::sqrt(time_rms[static_cast<std::size_t>(m)] / time_count));
    }
    for (std::size_t li = 0; li < space_lags.size(); ++li) {
      sl.push_back(space_lags[li]);
      sv.push_back(std::sqrt(space_rms[li] / space_count));
    }
    rep.holder_slope_time = fit_loglog_slope(tl, tv);
    rep.holder_slope_space = fit_loglog_slope(sl, sv);
  }

  return rep;
}

}  // namespace acsheet
