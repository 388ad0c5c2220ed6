#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "acsheet/drift.hpp"
#include "acsheet/field.hpp"
#include "acsheet/grid.hpp"
#include "acsheet/noise.hpp"
#include "acsheet/stoch_conv.hpp"
#include "acsheet/test_function.hpp"

namespace acsheet {

// Semi-implicit scheme for the decomposed equation: implicit 3-point
// diffusion, explicit drift, with the rough component advanced spectrally.
struct SolveConfig {
  double beta = 0.0;
  double dt = 1e-4;
  DriftPolynomial drift = cubic_drift();
  int n_modes = 0;  // modes carried by Z; 0 means all N

  void check_stability() const {
    if (dt * drift.K() >= 1.0) throw StabilityGuardViolated();
  }
};

// Constant tridiagonal factorization of (I - r * Lap_h), Dirichlet.
class TriFactor {
 public:
  TriFactor(int n, double r);
  void solve(std::vector<double>& b) const;              // in place
  void apply(const std::vector<double>& x, std::vector<double>& y) const;
  double r() const noexcept { return r_; }

 private:
  int n_;
  double r_;
  std::vector<double> cp_;        // modified super-diagonal
  std::vector<double> inv_diag_;  // 1 / denominators
};

// One semi-implicit step: solves (I - dt Lap_h) V' = V + dt [f(V+Z) + beta Z].
Field step_v(const GridSpec& g, const SolveConfig& cfg, const Field& v, const Field& z);

// March driver: one Z path and any number of V fields advancing in lockstep.
class SolverEngine {
 public:
  SolverEngine(const GridSpec& g, const SolveConfig& cfg);

  const GridSpec& grid() const noexcept { return g_; }
  const SolveConfig& config() const noexcept { return cfg_; }
  std::shared_ptr<const SpectralZTables> z_tables() const noexcept { return ztab_; }

  // fresh Z state starting at absolute step k (modes all zero)
  SpectralZ make_z(std::int64_t k_start) const { return SpectralZ(ztab_, k_start); }

  // advance everything one step; `row` receives the consumed noise increments
  void advance(SpectralZ& z, Field& z_nodes, std::span<Field> vs,
               const NoiseSource& noise, std::span<double> row) const;

  // advance n_steps; callback (may be empty) runs after every step with the
  // just-consumed row still valid
  using StepCallback = std::function<void(std::int64_t k_done, std::span<const Field> vs,
                                          const Field& z_nodes, std::span<const double> row)>;
  void march(SpectralZ& z, Field& z_nodes, std::span<Field> vs, const NoiseSource& noise,
             std::int64_t n_steps, const StepCallback& cb = nullptr) const;

  const TriFactor& tri() const noexcept { return tri_; }

 private:
  GridSpec g_;
  SolveConfig cfg_;
  TriFactor tri_;
  std::shared_ptr<const SpectralZTables> ztab_;
};

// ---------------------------------------------------------------------------
// Whole-trajectory conveniences

struct Snapshot {
  double t;
  Field u, v, z;
};

struct SolveResult {
  std::vector<Snapshot> snapshots;
  Field v_final, z_final;
  std::vector<double> z_modes_final;
};

// Evolve U = V + Z from U(t_start) = u0 over n_steps grid steps starting at
// absolute step k_start. z0 (mode coefficients) gives Z at the window start;
// empty means Z = 0 there. Snapshots at the requested absolute times.
SolveResult solve_u(const GridSpec& g, const SolveConfig& cfg, const Field& u0,
                    const NoiseSource& noise, std::int64_t k_start, std::int64_t n_steps,
                    const std::vector<double>& z0 = {},
                    const std::vector<double>& snapshot_times = {});

// Weak-form residual of the trajectory against a test function:
//   R(t) = (U(t)-u0, phi) - int (U, phi'') - int (f(U), phi) - sum phi xi
struct ResidualSeries {
  std::vector<double> t;
  std::vector<double> r;
  double max_abs = 0.0;
};

ResidualSeries weak_form_residual(const GridSpec& g, const SolveConfig& cfg,
                                  const Field& u0, const NoiseSource& noise,
                                  const TestFunction& phi, std::int64_t k_start,
                                  std::int64_t n_steps);

// Two trajectories under one noise: the increments cancel exactly in the
// difference scheme. Reports the worst relative cancellation defect and the
// difference-norm history.
struct DifferenceReport {
  double max_defect_rel = 0.0;
  std::vector<double> t;
  std::vector<double> diff_l2;
  bool gronwall_ok = true;  // |Y(t)| <= e^{K t} |Y(0)| along the run
};

DifferenceReport difference_run(const GridSpec& g, const SolveConfig& cfg, const Field& u0,
                                const Field& v0, const NoiseSource& noise,
                                std::int64_t k_start, std::int64_t n_steps);

// discrete Ginzburg-Landau energy  int [ (u_x)^2/2 - F(u) ],  F' = f
double gl_energy(const Field& u, const DriftPolynomial& f);

}  // namespace acsheet
