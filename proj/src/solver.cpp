#include "acsheet/solver.hpp"

#include <algorithm>
#include <cmath>

namespace acsheet {

TriFactor::TriFactor(int n, double r) : n_(n), r_(r) {
  const double d = 1.0 + 2.0 * r;
  const double e = -r;
  cp_.resize(static_cast<std::size_t>(n));
  inv_diag_.resize(static_cast<std::size_t>(n));
  double denom = d;
  inv_diag_[0] = 1.0 / denom;
  cp_[0] = e / denom;
  for (int i = 1; i < n; ++i) {
    denom = d - e * cp_[static_cast<std::size_t>(i - 1)];
    inv_diag_[static_cast<std::size_t>(i)] = 1.0 / denom;
    cp_[static_cast<std::size_t>(i)] = e / denom;
  }
}

void TriFactor::solve(std::vector<double>& b) const {
  const double e = -r_;
  b[0] *= inv_diag_[0];
  for (int i = 1; i < n_; ++i)
    b[static_cast<std::size_t>(i)] =
        (b[static_cast<std::size_t>(i)] - e * b[static_cast<std::size_t>(i - 1)]) *
        inv_diag_[static_cast<std::size_t>(i)];
  for (int i = n_ - 2; i >= 0; --i)
    b[static_cast<std::size_t>(i)] -=
        cp_[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(i + 1)];
}

void TriFactor::apply(const std::vector<double>& x, std::vector<double>& y) const {
  const double d = 1.0 + 2.0 * r_;
  y.resize(x.size());
  for (int i = 0; i < n_; ++i) {
    const double left = i > 0 ? x[static_cast<std::size_t>(i - 1)] : 0.0;
    const double right = i + 1 < n_ ? x[static_cast<std::size_t>(i + 1)] : 0.0;
    y[static_cast<std::size_t>(i)] = d * x[static_cast<std::size_t>(i)] - r_ * (left + right);
  }
}

Field step_v(const GridSpec& g, const SolveConfig& cfg, const Field& v, const Field& z) {
  cfg.check_stability();
  if (v.size() != g.N() || z.size() != g.N()) throw GridMismatch();
  TriFactor tri(g.N(), cfg.dt / (g.dx() * g.dx()));
  Field out = v;
  for (int i = 0; i < g.N(); ++i)
    out[i] = v[i] + cfg.dt * (cfg.drift.eval(v[i] + z[i]) + cfg.beta * z[i]);
  tri.solve(out.values());
  return out;
}

SolverEngine::SolverEngine(const GridSpec& g, const SolveConfig& cfg)
    : g_(g), cfg_(cfg), tri_(g.N(), cfg.dt / (g.dx() * g.dx())) {
  cfg_.check_stability();
  if (std::abs(cfg.dt - g.dt()) > 1e-15 * g.dt())
    throw GridMismatch("config dt differs from grid dt");
  const int m = cfg_.n_modes > 0 ? cfg_.n_modes : g.N();
  ztab_ = std::make_shared<SpectralZTables>(g, cfg_.beta, m);
}

void SolverEngine::advance(SpectralZ& z, Field& z_nodes, std::span<Field> vs,
                           const NoiseSource& noise, std::span<double> row) const {
  const double dt = cfg_.dt;
  const double beta = cfg_.beta;
  for (Field& v : vs) {
    for (int i = 0; i < g_.N(); ++i) {
      const double zi = z_nodes[i];
      v[i] = v[i] + dt * (cfg_.drift.eval(v[i] + zi) + beta * zi);
    }
    tri_.solve(v.values());
  }
  noise.fill_row(z.step_index(), row);
  z.step_row(row);
  z.node_field_into(z_nodes);
}

void SolverEngine::march(SpectralZ& z, Field& z_nodes, std::span<Field> vs,
                         const NoiseSource& noise, std::int64_t n_steps,
                         const StepCallback& cb) const {
  std::vector<double> row(static_cast<std::size_t>(g_.N() + 1));
  for (std::int64_t s = 0; s < n_steps; ++s) {
    advance(z, z_nodes, vs, noise, row);
    if (cb) cb(z.step_index(), vs, z_nodes, row);
  }
}

SolveResult solve_u(const GridSpec& g, const SolveConfig& cfg, const Field& u0,
                    const NoiseSource& noise, std::int64_t k_start, std::int64_t n_steps,
                    const std::vector<double>& z0,
                    const std::vector<double>& snapshot_times) {
  SolverEngine eng(g, cfg);
  SpectralZ z = eng.make_z(k_start);
  if (!z0.empty()) {
    if (z0.size() != z.modes().size()) throw GridMismatch("z0 mode count");
    z.modes() = z0;
  }
  Field z_nodes = z.node_field();
  Field v = u0;
  v -= z_nodes;

  std::vector<std::int64_t> snap_steps;
  for (double t : snapshot_times) snap_steps.push_back(g.time_index(t));

  SolveResult res;
  Field vs_holder[1] = {std::move(v)};
  auto maybe_snapshot = [&](std::int64_t k) {
    if (std::find(snap_steps.begin(), snap_steps.end(), k) == snap_steps.end()) return;
    Snapshot s;
    s.t = k * g.dt();
    s.v = vs_holder[0];
    s.z = z_nodes;
    s.u = vs_holder[0];
    s.u += z_nodes;
    res.snapshots.push_back(std::move(s));
  };
  maybe_snapshot(k_start);

  std::vector<double> row(static_cast<std::size_t>(g.N() + 1));
  for (std::int64_t s = 0; s < n_steps; ++s) {
    eng.advance(z, z_nodes, vs_holder, noise, row);
    maybe_snapshot(z.step_index());
  }
  res.v_final = std::move(vs_holder[0]);
  res.z_final = z_nodes;
  res.z_modes_final = z.modes();
  return res;
}

ResidualSeries weak_form_residual(const GridSpec& g, const SolveConfig& cfg,
                                  const Field& u0, const NoiseSource& noise,
                                  const TestFunction& phi, std::int64_t k_start,
                                  std::int64_t n_steps) {
  SolverEngine eng(g, cfg);
  SpectralZ z = eng.make_z(k_start);
  Field z_nodes = z.node_field();
  Field v = u0;  // Z starts at zero on this window
  Field u = u0, fu(g);

  const auto& phim = phi.cell_mid_values();
  double int_u_pp = 0.0, int_fu = 0.0, noise_sum = 0.0;
  const double u0_phi = phi.pair(u0);

  ResidualSeries out;
  out.t.reserve(static_cast<std::size_t>(n_steps));
  out.r.reserve(static_cast<std::size_t>(n_steps));

  Field vs_holder[1] = {std::move(v)};
  std::vector<double> row(static_cast<std::size_t>(g.N() + 1));
  for (std::int64_t s = 0; s < n_steps; ++s) {
    // left-endpoint quadrature of the time integrals
    for (int i = 0; i < g.N(); ++i) {
      u[i] = vs_holder[0][i] + z_nodes[i];
      fu[i] = cfg.drift.eval(u[i]);
    }
    int_u_pp += cfg.dt * phi.pair_dd(u);
    int_fu += cfg.dt * phi.pair(fu);
    eng.advance(z, z_nodes, vs_holder, noise, row);
    for (int j = 0; j <= g.N(); ++j)
      noise_sum += phim[static_cast<std::size_t>(j)] * row[static_cast<std::size_t>(j)];
    for (int i = 0; i < g.N(); ++i) u[i] = vs_holder[0][i] + z_nodes[i];
    const double r = (phi.pair(u) - u0_phi) - int_u_pp - int_fu - noise_sum;
    out.t.push_back(z.step_index() * g.dt());
    out.r.push_back(r);
    out.max_abs = std::max(out.max_abs, std::abs(r));
  }
  return out;
}

DifferenceReport difference_run(const GridSpec& g, const SolveConfig& cfg, const Field& u0,
                                const Field& v0, const NoiseSource& noise,
                                std::int64_t k_start, std::int64_t n_steps) {
  SolverEngine eng(g, cfg);
  SpectralZ z = eng.make_z(k_start);
  Field z_nodes = z.node_field();

  Field fields[2] = {u0, v0};
  fields[0] -= z_nodes;  // z_nodes is zero here, kept for clarity
  fields[1] -= z_nodes;

  DifferenceReport rep;
  const double y0 = l2_distance(fields[0], fields[1]);
  const double K = cfg.drift.K();

  std::vector<double> y_prev(static_cast<std::size_t>(g.N()));
  std::vector<double> df(static_cast<std::size_t>(g.N()));
  std::vector<double> ay(static_cast<std::size_t>(g.N()));
  std::vector<double> y_new(static_cast<std::size_t>(g.N()));
  std::vector<double> row(static_cast<std::size_t>(g.N() + 1));

  for (std::int64_t s = 0; s < n_steps; ++s) {
    for (int i = 0; i < g.N(); ++i) {
      y_prev[static_cast<std::size_t>(i)] = fields[0][i] - fields[1][i];
      const double u1 = fields[0][i] + z_nodes[i];
      const double u2 = fields[1][i] + z_nodes[i];
      df[static_cast<std::size_t>(i)] = cfg.drift.eval(u1) - cfg.drift.eval(u2);
    }
    eng.advance(z, z_nodes, fields, noise, row);
    for (int i = 0; i < g.N(); ++i)
      y_new[static_cast<std::size_t>(i)] = fields[0][i] - fields[1][i];

    // (I - dt Lap) Y_{k+1} - Y_k - dt (f(U1)-f(U2)) should vanish exactly
    eng.tri().apply(y_new, ay);
    double defect = 0.0, scale = 0.0;
    for (int i = 0; i < g.N(); ++i) {
      const std::size_t ii = static_cast<std::size_t>(i);
      defect = std::max(defect, std::abs(ay[ii] - y_prev[ii] - cfg.dt * df[ii]));
      scale = std::max(scale, std::abs(ay[ii]) + std::abs(y_prev[ii]) +
                                  cfg.dt * std::abs(df[ii]));
    }
    if (scale > 0.0) rep.max_defect_rel = std::max(rep.max_defect_rel, defect / scale);

    const double t = (z.step_index() - k_start) * g.dt();
    double ynorm = 0.0;
    for (int i = 0; i < g.N(); ++i) {
      const double d = fields[0][i] - fields[1][i];
      ynorm += d * d;
    }
    ynorm = std::sqrt(g.dx() * ynorm);
    rep.t.push_back(z.step_index() * g.dt());
    rep.diff_l2.push_back(ynorm);
    if (ynorm > std::exp(K * t) * y0 * (1.0 + 1e-10)) rep.gronwall_ok = false;
  }
  return rep;
}

double gl_energy(const Field& u, const DriftPolynomial& f) {
  const auto& a = f.coefficients();
  const double dx = u.dx();
  double grad = 0.0, pot = 0.0;
  double prev = 0.0;
  for (int i = 0; i < u.size(); ++i) {
    const double d = (u[i] - prev) / dx;
    grad += d * d;
    prev = u[i];
  }
  grad += (0.0 - prev) / dx * (0.0 - prev) / dx;
  for (int i = 0; i < u.size(); ++i) {
    double F = 0.0;  // antiderivative of f with F(0)=0
    for (std::size_t q = a.size(); q-- > 0;) F = F * u[i] + a[q] / (q + 1.0);
    F *= u[i];
    pot += F;
  }
  return dx * (0.5 * grad - pot);
}

}  // namespace acsheet
