#include "acsheet/field.hpp"

#include <cmath>

#include "acsheet/errors.hpp"

namespace acsheet {

double Field::l2_norm() const {
  double s = 0.0;
  for (double x : v_) s += x * x;
  return std::sqrt(dx_ * s);
}

double Field::lq_norm_pow(double q) const {
  double s = 0.0;
  for (double x : v_) s += std::pow(std::abs(x), q);
  return dx_ * s;
}

double Field::lq_norm(double q) const { return std::pow(lq_norm_pow(q), 1.0 / q); }

double Field::sup_norm() const {
  double m = 0.0;
  for (double x : v_) m = std::max(m, std::abs(x));
  return m;
}

double Field::h1_seminorm() const {
  double s = 0.0;
  double prev = 0.0;
  for (double x : v_) {
    const double d = (x - prev) / dx_;
    s += d * d;
    prev = x;
  }
  const double d = (0.0 - prev) / dx_;
  s += d * d;
  return std::sqrt(dx_ * s);
}

Field& Field::operator+=(const Field& o) {
  if (o.size() != size()) throw GridMismatch();
  for (std::size_t i = 0; i < v_.size(); ++i) v_[i] += o.v_[i];
  return *this;
}

Field& Field::operator-=(const Field& o) {
  if (o.size() != size()) throw GridMismatch();
  for (std::size_t i = 0; i < v_.size(); ++i) v_[i] -= o.v_[i];
  return *this;
}

Field& Field::operator*=(double a) {
  for (double& x : v_) x *= a;
  return *this;
}

double l2_distance(const Field& a, const Field& b) {
  if (a.size() != b.size()) throw GridMismatch();
  double s = 0.0;
  for (int i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(a.dx() * s);
}

Field sine_profile(const GridSpec& g, const std::vector<double>& amplitudes) {
  Field f(g);
  const double pi = 3.14159265358979323846264338328;
  for (int i = 1; i <= g.N(); ++i) {
    double s = 0.0;
    for (std::size_t n = 0; n < amplitudes.size(); ++n)
      s += amplitudes[n] * std::sin((n + 1) * pi * g.node(i) / g.L());
    f[i - 1] = s;
  }
  return f;
}

Field flat_profile(const GridSpec& g, double value) {
  Field f(g);
  for (int i = 0; i < g.N(); ++i) f[i] = value;
  return f;
}

}  // namespace acsheet
