#include "acsheet/inequality.hpp"

#include <cmath>
#include <limits>

namespace acsheet {

namespace {

constexpr double kPi = 3.14159265358979323846264338328;

double simpson_rec(const std::function<double(double)>& f, double a, double fa, double b,
                   double fb, double m, double fm, double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return simpson_rec(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         simpson_rec(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

double ipow(double v, int e) {
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= v;
  return r;
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
  if (!(b > a)) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a), fb = f(b), fm = f(m);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_rec(f, a, fa, b, fb, m, fm, whole, tol, 30);
}

SampleFunction SampleFunction::sine_series(double L, std::vector<double> amplitudes) {
  return SampleFunction(Kind::Sine, L, std::move(amplitudes));
}

SampleFunction SampleFunction::x_times_poly(double L, std::vector<double> poly_coeffs) {
  return SampleFunction(Kind::XPoly, L, std::move(poly_coeffs));
}

double SampleFunction::value(double x) const {
  if (kind_ == Kind::Sine) {
    double s = 0.0;
    for (std::size_t n = 0; n < a_.size(); ++n)
      s += a_[n] * std::sin((n + 1) * kPi * x / L_);
    return s;
  }
  double p = 0.0;
  for (std::size_t i = a_.size(); i-- > 0;) p = p * x + a_[i];
  return x * p;
}

double SampleFunction::derivative(double x) const {
  if (kind_ == Kind::Sine) {
    double s = 0.0;
    for (std::size_t n = 0; n < a_.size(); ++n) {
      const double w = (n + 1) * kPi / L_;
      s += a_[n] * w * std::cos(w * x);
    }
    return s;
  }
  // (x p)' = p + x p'
  double p = 0.0;
  for (std::size_t i = a_.size(); i-- > 0;) p = p * x + a_[i];
  double dp = 0.0;
  for (std::size_t i = a_.size(); i-- > 1;) dp = dp * x + i * a_[i];
  return p + x * dp;
}

double SampleFunction::second_derivative(double x) const {
  if (kind_ == Kind::Sine) {
    double s = 0.0;
    for (std::size_t n = 0; n < a_.size(); ++n) {
      const double w = (n + 1) * kPi / L_;
      s -= a_[n] * w * w * std::sin(w * x);
    }
    return s;
  }
  // (x p)'' = 2 p' + x p''
  double dp = 0.0;
  for (std::size_t i = a_.size(); i-- > 1;) dp = dp * x + i * a_[i];
  double ddp = 0.0;
  for (std::size_t i = a_.size(); i-- > 2;)
    ddp = ddp * x + static_cast<double>(i) * (i - 1) * a_[i];
  return 2.0 * dp + x * ddp;
}

IneqResult poincare_lp_check(const SampleFunction& v, double p, double tol) {
  if (std::abs(v.value(0.0)) > 1e-12) throw BoundaryConditionViolated();
  const double L = v.L();
  const double vp = integrate([&](double x) { return std::pow(std::abs(v.value(x)), p); },
                              0.0, L, 1e-9);
  const double dvp = integrate(
      [&](double x) { return std::pow(std::abs(v.derivative(x)), p); }, 0.0, L, 1e-9);
  IneqResult r;
  r.lhs = std::pow(vp, 1.0 / p);
  r.rhs = L * std::pow(dvp, 1.0 / p);
  r.margin = r.rhs - r.lhs;
  r.pass = r.lhs <= r.rhs + tol;
  return r;
}

OddPowerResult odd_power_check(const SampleFunction& v, int p, double tol) {
  if (std::abs(v.value(0.0)) > 1e-12 ||
      (v.vanishes_at_right() ? false : std::abs(v.value(v.L())) > 1e-12))
    throw BoundaryConditionViolated();
  const double L = v.L();
  const double norm_pow =
      integrate([&](double x) { return ipow(v.value(x), 2 * p); }, 0.0, L, 1e-9);
  const double bound = -((2.0 * p - 1.0) / (p * p * L)) * norm_pow;

  OddPowerResult out;
  out.laplacian_form.lhs = integrate(
      [&](double x) { return v.second_derivative(x) * ipow(v.value(x), 2 * p - 1); },
      0.0, L, 1e-9);
  out.laplacian_form.rhs = bound;
  out.laplacian_form.margin = bound - out.laplacian_form.lhs;
  out.laplacian_form.pass = out.laplacian_form.lhs <= bound + tol;

  out.gradient_form.lhs = integrate(
      [&](double x) {
        const double dv = v.derivative(x);
        return -dv * (2.0 * p - 1.0) * ipow(v.value(x), 2 * p - 2) * dv;
      },
      0.0, L, 1e-9);
  out.gradient_form.rhs = bound;
  out.gradient_form.margin = bound - out.gradient_form.lhs;
  out.gradient_form.pass = out.gradient_form.lhs <= bound + tol;

  out.pass = out.laplacian_form.pass && out.gradient_form.pass;
  return out;
}

DerivativeBoundResult derivative_bound_check(const std::function<double(double)>& u0,
                                             double lipschitz,
                                             const std::vector<double>& t_list,
                                             int x_points, double tol,
                                             double sweep_center) {
  DerivativeBoundResult out;
  out.bound = 2.0 * lipschitz;
  double per_t_min = std::numeric_limits<double>::infinity();
  double per_t_max = 0.0;
  for (double t : t_list) {
    if (!(t > 0.0)) throw NonpositiveTime();
    const double sd = std::sqrt(2.0 * t);  // kernel std dev for u_t = u_xx
    double tmax = 0.0;
    for (int i = 0; i < x_points; ++i) {
      // sweep x across +-4 kernel widths so the extremes are visible at all t
      const double x = sweep_center + (-4.0 + 8.0 * i / (x_points - 1.0)) * sd;
      const double val = integrate(
          [&](double y) {
            const double arg = (x - y) * (x - y) / (4.0 * t);
            const double pt = std::exp(-arg) / std::sqrt(4.0 * kPi * t);
            return u0(y) * (-(x - y) / (2.0 * t)) * pt;
          },
          x - 12.0 * sd, x + 12.0 * sd, 1e-10);
      tmax = std::max(tmax, std::abs(val));
      out.max_value = std::max(out.max_value, std::abs(val));
    }
    per_t_min = std::min(per_t_min, tmax);
    per_t_max = std::max(per_t_max, tmax);
  }
  // below quadrature noise the ratio is meaningless
  out.t_uniformity = per_t_max < 1e-9 ? 0.0 : per_t_max / per_t_min - 1.0;
  out.pass = out.max_value <= out.bound + tol && out.t_uniformity <= 0.10;
  return out;
}

}  // namespace acsheet
