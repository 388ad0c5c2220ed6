#pragma once

#include <cstdint>
#include <vector>

#include "acsheet/errors.hpp"

namespace acsheet {

// Uniform space-time discretization of [0,L] x [t0,t1].
//
// Space: N interior nodes x_i = i*dx, i=1..N, with dx = L/(N+1); the N+1
// cells [j*dx,(j+1)*dx], j=0..N, carry the white-noise increments. Time:
// M = (t1-t0)/dt steps; noise time cells are indexed by a signed absolute
// index k (cell [k*dt,(k+1)*dt]), so windows with negative start times and
// overlapping windows across experiments address the same cells.
class GridSpec {
 public:
  GridSpec(double L, int N, double t0, double t1, double dt);

  double L() const noexcept { return L_; }
  int N() const noexcept { return N_; }
  double dx() const noexcept { return dx_; }
  double t0() const noexcept { return t0_; }
  double t1() const noexcept { return t1_; }
  double dt() const noexcept { return dt_; }
  std::int64_t M() const noexcept { return M_; }

  int cells() const noexcept { return N_ + 1; }

  // interior node position, i = 1..N
  double node(int i) const noexcept { return i * dx_; }
  // space-cell midpoint, j = 0..N
  double cell_mid(int j) const noexcept { return (j + 0.5) * dx_; }

  // continuum Dirichlet eigenvalue (n*pi/L)^2, n = 1..N
  double lambda(int n) const { return lambda_.at(static_cast<std::size_t>(n - 1)); }
  // eigenvalue of the 3-point finite-difference Laplacian, same eigenvectors
  double lambda_fd(int n) const;

  // signed absolute time index of a grid time; throws if t/dt is not integral
  std::int64_t time_index(double t) const;

 private:
  double L_, dx_, t0_, t1_, dt_;
  int N_;
  std::int64_t M_;
  std::vector<double> lambda_;
};

// Construction helper named after its role in configs.
GridSpec make_grid(double L, int N, double t0, double t1, double dt);

}  // namespace acsheet
