#include "acsheet/drift.hpp"

#include <cmath>

namespace acsheet {

namespace {

double horner(const std::vector<double>& c, double v) noexcept {
  double r = 0.0;
  for (std::size_t i = c.size(); i-- > 0;) r = r * v + c[i];
  return r;
}

// Cauchy root bound: all real roots of the polynomial lie in |v| <= bound.
double cauchy_radius(const std::vector<double>& c) {
  const double lead = std::abs(c.back());
  double m = 0.0;
  for (std::size_t i = 0; i + 1 < c.size(); ++i) m = std::max(m, std::abs(c[i]) / lead);
  return 1.0 + m;
}

// max of a polynomial with negative leading coefficient and even degree,
// searched on [-R, R] with step h and one parabolic refinement
double grid_max(const std::vector<double>& c, double R, double h) {
  double best = horner(c, -R);
  double best_v = -R;
  for (double v = -R; v <= R; v += h) {
    const double f = horner(c, v);
    if (f > best) {
      best = f;
      best_v = v;
    }
  }
  // refine around the best grid point
  double lo = best_v - h, hi = best_v + h;
  for (int it = 0; it < 80; ++it) {
    const double m1 = lo + (hi - lo) / 3.0;
    const double m2 = hi - (hi - lo) / 3.0;
    if (horner(c, m1) < horner(c, m2))
      lo = m1;
    else
      hi = m2;
  }
  return std::max(best, horner(c, 0.5 * (lo + hi)));
}

}  // namespace

DriftPolynomial::DriftPolynomial(std::vector<double> coefficients)
    : coeff_(std::move(coefficients)) {
  if (coeff_.empty() || coeff_.size() % 2 != 0) throw EvenDegree();
  if (!(coeff_.back() < 0.0)) throw NonnegativeLeadingCoefficient();

  const int deg = degree();

  // derivative coefficients
  std::vector<double> dc(static_cast<std::size_t>(deg));
  for (int i = 1; i <= deg; ++i) dc[static_cast<std::size_t>(i - 1)] = i * coeff_[static_cast<std::size_t>(i)];

  // f' has even degree and negative leading coefficient, so its maximum lies
  // inside the Cauchy radius
  const double r_deriv = cauchy_radius(dc);
  K_ = std::max(0.0, grid_max(dc, r_deriv, 1e-3));

  // coercivity: pick c1 = |lead|/2, then c0 = max_v (f(v) v + c1 v^{2p});
  // that polynomial has leading coefficient lead + c1 = -|lead|/2 < 0
  c1_ = 0.5 * std::abs(coeff_.back());
  std::vector<double> g(coeff_.size() + 1, 0.0);
  for (std::size_t i = 0; i < coeff_.size(); ++i) g[i + 1] = coeff_[i];
  g.back() += c1_;
  const double r_g = cauchy_radius(g);
  c0_ = std::max(0.0, grid_max(g, r_g, 1e-3));

  // growth: |f(v)| <= (sum |a_i|) max(|v|^{2p-1}, 1)
  double s = 0.0;
  for (double a : coeff_) s += std::abs(a);
  k1_ = s;
  k0_ = s;

  core_radius_ = std::max(r_deriv, r_g);
}

double DriftPolynomial::eval(double v) const noexcept { return horner(coeff_, v); }

double DriftPolynomial::eval_prime(double v) const noexcept {
  double r = 0.0;
  for (std::size_t i = coeff_.size(); i-- > 1;) r = r * v + i * coeff_[i];
  return r;
}

DriftPolynomial make_drift(const std::vector<double>& coefficients) {
  return DriftPolynomial(coefficients);
}

DriftPolynomial cubic_drift() { return DriftPolynomial({0.0, 1.0, 0.0, -1.0}); }

}  // namespace acsheet
