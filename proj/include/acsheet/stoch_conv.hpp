#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "acsheet/field.hpp"
#include "acsheet/grid.hpp"
#include "acsheet/kernel.hpp"
#include "acsheet/noise.hpp"
#include "acsheet/test_function.hpp"

namespace acsheet {

// Shared per-(grid,beta,n_modes) tables for the spectral evolution of the
// stochastic convolution: cell-average mode projections of the noise,
// node synthesis, and the exact per-step decay/gain factors.
struct SpectralZTables {
  SpectralZTables(const GridSpec& g, double beta, int n_modes);

  int n_modes;
  int cells;
  int n_nodes;
  double dt, dx, L, beta;
  std::vector<double> proj;   // n_modes x cells: (1/dx) int_cell e_n
  std::vector<double> synth;  // n_nodes x n_modes: e_n(x_i)
  std::vector<double> decay;  // e^{-(beta+lambda_n) dt}
  std::vector<double> gain;   // (1 - e^{-(beta+lambda_n) dt}) / ((beta+lambda_n) dt)
  std::vector<double> mu;     // beta + lambda_n
};

// Per-mode Ornstein-Uhlenbeck state of Z_beta, advanced by an exponential
// integrator that is exact per step for noise held constant on each cell.
// The mode projections consume the same cell increments as the kernel
// quadrature below, so the two routes are coupled pathwise.
class SpectralZ {
 public:
  SpectralZ(std::shared_ptr<const SpectralZTables> tables, std::int64_t k_start);
  SpectralZ(const GridSpec& g, double beta, int n_modes, std::int64_t k_start);

  // advance one time step, consuming noise row k; k must equal step_index()
  void step(const NoiseSource& noise, std::int64_t k);
  void step(const NoiseSource& noise) { step(noise, k_); }
  // advance from an externally fetched increment row (callers that also need
  // the raw increments fetch once and share)
  void step_row(std::span<const double> row);

  std::int64_t step_index() const noexcept { return k_; }

  const std::vector<double>& modes() const noexcept { return z_; }
  std::vector<double>& modes() noexcept { return z_; }

  // Z(t, x) at arbitrary x by continuum synthesis
  double value_at(double x) const;
  // Z at the interior nodes
  void node_field_into(Field& out) const;
  Field node_field() const;

  const SpectralZTables& tables() const noexcept { return *tables_; }

 private:
  std::shared_ptr<const SpectralZTables> tables_;
  std::vector<double> z_;
  std::vector<double> row_;  // noise row buffer
  std::int64_t k_;
};

// Direct midpoint discretization of the kernel form of Z: the independent
// oracle for the spectral route. Sums G_{beta, t-(k+1/2)dt}(x, y_j) xi(k,j)
// over all cells with k in [k_start, t/dt).
double z_kernel_quadrature(const NoiseSource& noise, const GridSpec& g, double beta,
                           double t, double x, std::int64_t k_start = 0,
                           const KernelParams* kernel_override = nullptr);

// Batch evaluator with the same semantics (kernel expanded in the sine basis
// to machine precision); use for many (t,x) points on one path. Evaluation
// times are declared up front so each noise row keeps only the modes that
// survive the kernel decay at its closest declared lag.
class ZKernelBatch {
 public:
  ZKernelBatch(const NoiseSource& noise, const GridSpec& g, double beta,
               std::int64_t k_start, const std::vector<double>& eval_times);
  double value(double t, double x) const;  // t must be one of eval_times

 private:
  const GridSpec& g_;
  double beta_;
  std::int64_t k_start_, k_end_;
  std::vector<std::size_t> offset_;  // per-row start into s_
  std::vector<double> s_;            // ragged rows of mode sums
};

// ---------------------------------------------------------------------------
// Growth diagnostics

struct ZDiagnosticsRow {
  std::uint64_t seed;
  double t;
  double sup_norm;      // sup_x Z(t,x) over the grid nodes (signed sup)
  double z_phi_over_t;  // |Z^phi(t)| / t
  double l2_norm;
  double l2p_norm;
};

struct GrowthCheckpoint {
  double t;
  double exceed_fraction;  // #{ sup Z(t) > t^{1/4+eps} } / ensemble
  double exceed_se;        // binomial standard error
  double median_zphi_over_t;
};

struct GrowthReport {
  std::vector<ZDiagnosticsRow> rows;
  std::vector<GrowthCheckpoint> checkpoints;
  // Hoelder increment scaling of Z, fitted log-log slopes (informational)
  double holder_slope_time = 0.0;
  double holder_slope_space = 0.0;
};

struct GrowthConfig {
  double beta = 0.0;
  double eps = 0.05;
  double t_max = 100.0;
  std::vector<double> checkpoints = {1, 2, 4, 8, 10, 16, 32, 64, 100};
  int ensemble = 100;
  double q = 4.0;  // extra L^q norm recorded (2p for the default cubic)
  std::vector<double> phi_modes = {1.0};
  bool holder_diagnostic = true;
};

GrowthReport growth_report(const GridSpec& g, const GrowthConfig& cfg,
                           std::uint64_t seed_base);

}  // namespace acsheet
