#include "acsheet/grid.hpp"

#include <cmath>

namespace acsheet {

GridSpec::GridSpec(double L, int N, double t0, double t1, double dt)
    : L_(L), t0_(t0), t1_(t1), dt_(dt), N_(N) {
  if (N < 2 || L <= 0.0) throw DegenerateGrid();
  if (dt <= 0.0 || !(t0 < t1)) throw DegenerateGrid("DegenerateGrid: bad time window");
  dx_ = L / (N + 1);

  const double steps = (t1 - t0) / dt;
  const double rounded = std::round(steps);
  if (rounded < 1.0 || std::abs(steps - rounded) > 1e-9 * std::max(1.0, std::abs(steps)))
    throw NonIntegralStepCount();
  M_ = static_cast<std::int64_t>(rounded);

  lambda_.resize(static_cast<std::size_t>(N));
  const double pi = 3.14159265358979323846264338328;
  for (int n = 1; n <= N; ++n) {
    const double w = n * pi / L;
    lambda_[static_cast<std::size_t>(n - 1)] = w * w;
  }
}

double GridSpec::lambda_fd(int n) const {
  const double pi = 3.14159265358979323846264338328;
  return 2.0 / (dx_ * dx_) * (1.0 - std::cos(n * pi * dx_ / L_));
}

std::int64_t GridSpec::time_index(double t) const {
  const double steps = t / dt_;
  const double rounded = std::round(steps);
  if (std::abs(steps - rounded) > 1e-9 * std::max(1.0, std::abs(steps)))
    throw NonIntegralShift();
  return static_cast<std::int64_t>(rounded);
}

GridSpec make_grid(double L, int N, double t0, double t1, double dt) {
  return GridSpec(L, N, t0, t1, dt);
}

}  // namespace acsheet
