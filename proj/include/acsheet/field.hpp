#pragma once

#include <cstddef>
#include <vector>

#include "acsheet/grid.hpp"

namespace acsheet {

// Spatial profile on the interior nodes of a grid, with Dirichlet zeros
// implied at both endpoints.
class Field {
 public:
  Field() = default;
  Field(int n_interior, double dx) : v_(static_cast<std::size_t>(n_interior), 0.0), dx_(dx) {}
  explicit Field(const GridSpec& g) : Field(g.N(), g.dx()) {}

  int size() const noexcept { return static_cast<int>(v_.size()); }
  double dx() const noexcept { return dx_; }
  double domain_length() const noexcept { return dx_ * (size() + 1); }

  double& operator[](int i) noexcept { return v_[static_cast<std::size_t>(i)]; }
  double operator[](int i) const noexcept { return v_[static_cast<std::size_t>(i)]; }

  std::vector<double>& values() noexcept { return v_; }
  const std::vector<double>& values() const noexcept { return v_; }

  double l2_norm() const;
  // (dx * sum |u_i|^q)^(1/q)
  double lq_norm(double q) const;
  double lq_norm_pow(double q) const;  // dx * sum |u_i|^q
  double sup_norm() const;
  // discrete H^1 seminorm including the boundary gaps
  double h1_seminorm() const;

  Field& operator+=(const Field& o);
  Field& operator-=(const Field& o);
  Field& operator*=(double a);

  friend Field operator+(Field a, const Field& b) { return a += b; }
  friend Field operator-(Field a, const Field& b) { return a -= b; }
  friend Field operator*(double a, Field f) { return f *= a; }

 private:
  std::vector<double> v_;
  double dx_ = 0.0;
};

// L2 distance between two fields on the same grid
double l2_distance(const Field& a, const Field& b);

// sum of sine modes: sum_n amp[n-1] * sin(n pi x / L) at the interior nodes
Field sine_profile(const GridSpec& g, const std::vector<double>& amplitudes);

// constant value at every interior node
Field flat_profile(const GridSpec& g, double value);

}  // namespace acsheet
