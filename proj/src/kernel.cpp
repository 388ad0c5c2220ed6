#include "acsheet/kernel.hpp"

#include <algorithm>
#include <cmath>

namespace acsheet {

namespace {

constexpr double kPi = 3.14159265358979323846264338328;

void check_time(double t) {
  if (!(t > 0.0)) throw NonpositiveTime();
}

// adaptive Simpson on [a,b]
double simpson_rec(const auto& f, double a, double fa, double b, double fb, double m,
                   double fm, double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return simpson_rec(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         simpson_rec(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

double adaptive_simpson(const auto& f, double a, double b, double tol, int depth = 24) {
  if (!(b > a)) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a), fb = f(b), fm = f(m);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_rec(f, a, fa, b, fb, m, fm, whole, tol, depth);
}

// 8-point Gauss-Legendre nodes/weights on [-1,1]
constexpr double kGL8X[8] = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                             -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                             0.7966664774136267,  0.9602898564975363};
constexpr double kGL8W[8] = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                             0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                             0.2223810344533745, 0.1012285362903763};

}  // namespace

double kernel_images(const KernelParams& params, double t, double x, double y) {
  check_time(t);
  if (y < x) std::swap(x, y);  // the series is symmetric; fix the summation order
  const double L = params.L;
  const double pref = 1.0 / std::sqrt(4.0 * kPi * t);
  // stop once the closest possible image of band n is below tol in absolute value
  const double tol_term = params.tol / pref;
  double sum = 0.0;
  for (int n = 0; n < params.max_terms; ++n) {
    bool significant = false;
    for (int sgn = (n == 0 ? 0 : -1); sgn <= 1; sgn += 2) {
      const double shift = 2.0 * (sgn == 0 ? 0 : sgn * n) * L;
      const double d1 = shift + y - x;
      const double d2 = shift + y + x;
      const double t1 = std::exp(-d1 * d1 / (4.0 * t));
      const double t2 = std::exp(-d2 * d2 / (4.0 * t));
      sum += t1 - t2;
      if (t1 > tol_term || t2 > tol_term) significant = true;
      if (n == 0) break;
    }
    if (n > 0 && !significant) break;
  }
  return std::exp(-params.beta * t) * pref * sum;
}

double kernel_spectral(const KernelParams& params, double t, double x, double y) {
  check_time(t);
  const double L = params.L;
  const double a = kPi * kPi * t / (L * L);  // lambda_n t = a n^2
  double sum = 0.0;
  for (int n = 1; n <= params.max_terms; ++n) {
    const double decay = std::exp(-a * n * n);
    sum += decay * std::sin(n * kPi * x / L) * std::sin(n * kPi * y / L);
    // tail bound: sum_{m>n} e^{-a m^2} <= e^{-a n^2} / (2 a n)
    if ((2.0 / L) * decay / (2.0 * a * n) < 0.5 * params.tol && n >= 3) break;
  }
  return std::exp(-params.beta * t) * (2.0 / L) * sum;
}

double kernel_value(const KernelParams& params, double t, double x, double y) {
  const double t_star = params.L * params.L / (kPi * kPi);
  return t < t_star ? kernel_images(params, t, x, y) : kernel_spectral(params, t, x, y);
}

double kernel_mass(const KernelParams& params, double t, double x) {
  check_time(t);
  const double L = params.L;
  const double t_star = L * L / (kPi * kPi);
  if (t < t_star) {
    const double s = std::sqrt(4.0 * t);
    double sum = 0.0;
    for (int n = 0; n < params.max_terms; ++n) {
      double band = 0.0;
      for (int sgn = (n == 0 ? 0 : -1); sgn <= 1; sgn += 2) {
        const double shift = 2.0 * (sgn == 0 ? 0 : sgn * n) * L;
        const double a1 = 0.5 * (std::erf((shift + L - x) / s) - std::erf((shift - x) / s));
        const double a2 = 0.5 * (std::erf((shift + L + x) / s) - std::erf((shift + x) / s));
        band = std::max({band, std::abs(a1), std::abs(a2)});
        sum += a1 - a2;
        if (n == 0) break;
      }
      if (n >= 2 && band < params.tol) break;
    }
    return std::exp(-params.beta * t) * sum;
  }
  const double a = kPi * kPi * t / (L * L);
  double sum = 0.0;
  for (int n = 1; n <= params.max_terms; n += 2) {
    const double decay = std::exp(-a * n * n);
    sum += decay * std::sin(n * kPi * x / L) * (4.0 / (n * kPi));
    if (decay / (2.0 * a * n) < 0.25 * params.tol && n >= 3) break;
  }
  return std::exp(-params.beta * t) * sum;
}

double chapman_kolmogorov_defect(const KernelParams& params, double s, double t, double x,
                                 double y, int n_quad) {
  check_time(s);
  check_time(t);
  const double h = params.L / n_quad;
  double acc = 0.0;
  for (int i = 0; i <= n_quad; ++i) {
    const double z = i * h;
    const double f = kernel_value(params, s, x, z) * kernel_value(params, t, z, y);
    const double w = (i == 0 || i == n_quad) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    acc += w * f;
  }
  return acc * h / 3.0 - kernel_value(params, s + t, x, y);
}

double kernel_slice_lp(const KernelParams& params, double p, double u, double x,
                       double rel_tol) {
  check_time(u);
  const double L = params.L;
  const double w = std::sqrt(4.0 * u);
  const auto f = [&](double y) { return std::pow(kernel_value(params, u, x, y), p); };

  // graded panels: the integrand is a width-w spike at y = x
  std::vector<double> cuts = {0.0, x - 8.0 * w, x - w, x + w, x + 8.0 * w, L};
  std::sort(cuts.begin(), cuts.end());
  for (double& c : cuts) c = std::clamp(c, 0.0, L);

  // scale for the absolute Simpson tolerance: peak value times spike width
  const double peak = std::pow(1.0 / std::sqrt(4.0 * kPi * u), p);
  const double scale = std::max(peak * w / std::sqrt(p), 1e-300);

  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (cuts[i + 1] - cuts[i] < 1e-15 * L) continue;
    total += adaptive_simpson(f, cuts[i], cuts[i + 1], rel_tol * scale / 4.0);
  }
  return total;
}

double kernel_spacetime_lp(const KernelParams& params, double p, double t, double x,
                           double rel_tol) {
  check_time(t);
  // substitute u = t - s: I = int_0^t (int G_u^p dy) du with an integrable
  // u^{(1-p)/2} singularity at u = 0; geometric panels + closed-form tail
  const int levels = 34;
  double upper = t;
  double acc = 0.0;
  for (int m = 0; m < levels; ++m) {
    const double lower = 0.5 * upper;
    const double c = 0.5 * (upper + lower), r = 0.5 * (upper - lower);
    for (int q = 0; q < 8; ++q) {
      const double u = c + r * kGL8X[q];
      acc += r * kGL8W[q] * kernel_slice_lp(params, p, u, x, rel_tol);
    }
    upper = lower;
  }
  // below `upper` the boundary images are invisible: free-space closed form
  //   int_0^a C_p u^{(1-p)/2} du,  C_p = (4 pi u)^{(1-p)/2} p^{-1/2} e^{-p beta u}
  const double a = upper;
  const double tail = std::pow(4.0 * kPi, 0.5 * (1.0 - p)) / std::sqrt(p) *
                      std::pow(a, 0.5 * (3.0 - p)) * 2.0 / (3.0 - p);
  return acc + tail;
}

GreenBoundConfig default_green_bound_config() {
  GreenBoundConfig cfg;
  cfg.t_fit = {0.002, 0.0032, 0.005, 0.008, 0.0126, 0.02};
  cfg.t_stable = {0.05, 0.1, 0.2, 0.4, 0.7, 1.0};
  return cfg;
}

GreenBoundReport green_bound_report(const KernelParams& params, double p, double gamma,
                                    double x, const GreenBoundConfig& cfg) {
  if (!(p > 0.0) || p > 2.5) throw ExponentOutOfRange();
  if (gamma < 0.0 || gamma >= std::min(1.0, 3.0 - p)) throw ExponentOutOfRange();

  GreenBoundReport rep;
  rep.p = p;
  rep.gamma = gamma;
  rep.x = x;
  rep.slope_target = 0.5 * (3.0 - p - gamma);

  std::vector<double> ts = cfg.t_fit;
  ts.insert(ts.end(), cfg.t_stable.begin(), cfg.t_stable.end());
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());

  const double edge = std::pow(std::min(x, params.L - x), gamma);
  for (double t : ts) {
    GreenBoundRow row;
    row.t = t;
    row.integral = kernel_spacetime_lp(params, p, t, x, cfg.quad_rel_tol);
    row.ratio = row.integral / (edge * std::pow(t, rep.slope_target));
    rep.rows.push_back(row);
  }

  // slope over the scaling window
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int nfit = 0;
  for (const auto& row : rep.rows) {
    if (std::find(cfg.t_fit.begin(), cfg.t_fit.end(), row.t) == cfg.t_fit.end()) continue;
    const double lx = std::log(row.t), ly = std::log(row.integral);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++nfit;
  }
  rep.slope = (nfit * sxy - sx * sy) / (nfit * sxx - sx * sx);

  // running max of the ratio; drift of that max across the stability window
  double running = 0.0, window_lo = 0.0, window_hi = 0.0;
  const double w0 = *std::min_element(cfg.t_stable.begin(), cfg.t_stable.end());
  bool in_window = false;
  for (const auto& row : rep.rows) {
    running = std::max(running, row.ratio);
    if (row.t >= w0 * (1.0 - 1e-12)) {
      if (!in_window) {
        window_lo = running;
        in_window = true;
      }
      window_hi = running;
    }
  }
  rep.k_hat = running;
  rep.k_hat_drift = window_lo > 0.0 ? window_hi / window_lo - 1.0 : 0.0;

  rep.pass = std::abs(rep.slope - rep.slope_target) <= cfg.slope_tol &&
             rep.k_hat_drift <= cfg.stability_tol && std::isfinite(rep.k_hat);
  return rep;
}

}  // namespace acsheet
