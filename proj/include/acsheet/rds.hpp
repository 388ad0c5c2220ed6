#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "acsheet/field.hpp"
#include "acsheet/grid.hpp"
#include "acsheet/projector.hpp"
#include "acsheet/solver.hpp"

namespace acsheet {

// Z state approximating its stationary law at absolute step k_start: a fresh
// path is marched over a spin-up window ending at k_start, using the same
// two-sided noise, so overlapping pullback windows stay pathwise consistent.
SpectralZ spun_up_z(const SolverEngine& eng, const NoiseSource& noise,
                    std::int64_t k_start, double spin_up_time);

// ---------------------------------------------------------------------------
// Pullback attraction

struct PullbackRow {
  double horizon;
  double diameter;        // L2 diameter of the time-0 image of the start set
  double semidist_prev;   // Hausdorff semidistance to the previous image
};

struct PullbackReport {
  std::vector<PullbackRow> rows;
  std::vector<Field> last_images;  // time-0 images at the largest horizon
  bool diameters_non_increasing = true;
};

// Evolves every u0 in `starts` from time -horizon to 0 under one noise path.
PullbackReport pullback_experiment(const GridSpec& g, const SolveConfig& cfg,
                                   const std::vector<Field>& starts,
                                   const std::vector<double>& horizons,
                                   std::uint64_t seed, double spin_up,
                                   double norm_cap = 100.0);

// ---------------------------------------------------------------------------
// Absorbing radius in L^{2p}

struct AbsorbReport {
  double q = 4.0;                     // the L^q = L^{2p} power used
  double r_hat = 0.0;                 // max over ensemble of window sup |V|_q^q
  std::vector<double> u0_norms;
  std::vector<double> window_sups;    // per u0: sup over [T/2, T] of |V|_q^q
  std::vector<double> entry_times;    // first t with |V|_q^q <= r_hat
  double spread = 0.0;                // max/min - 1 of window sups
  std::vector<double> temper_shift;   // tau values
  std::vector<double> temper_value;   // r_hat(theta_tau omega) e^{-eps tau}
  bool temper_decreasing = true;
  std::vector<double> beta_values;    // optional beta scan
  std::vector<double> beta_radii;
  double beta_stable = -1.0;          // smallest beta with <10% change to next
};

struct AbsorbConfig {
  std::vector<double> u0_norms = {1.0, 10.0, 100.0};
  double T = 6.0;
  double sample_every = 0.01;
  double eps_temper = 0.1;
  std::vector<double> temper_shifts = {0.0, 20.0, 40.0, 60.0};
  double temper_u0_norm = 10.0;
  std::vector<double> beta_sweep = {};
  double beta_threshold = 0.25;  // coercivity guard on cfg.beta
  double aux_dt = 1e-4;          // step for the moderate-data side runs
  int threads = 1;
};

AbsorbReport absorbing_radius(const GridSpec& g, const SolveConfig& cfg,
                              const AbsorbConfig& acfg, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Squeezing estimation

struct SqueezeRow {
  int m;
  double delta_hat;     // geometric median of the contraction ratios
  double se_log;        // standard error of log delta_hat
  double c_mean;        // mean of the log residuals
  bool verdict;         // E[c] < ln(1/delta)
};

struct SqueezeReport {
  std::vector<SqueezeRow> rows;
  bool delta_decreasing = true;  // in m, up to 2 SE
  double gronwall_max_rho = 0.0; // max full-space ratio (m = 0 control)
};

struct SqueezeConfig {
  std::vector<int> m_list = {4, 8, 16, 32};
  int windows = 32;
  double pair_separation = 1.0;
  double spin_up = 1.0;
};

SqueezeReport squeezing_estimate(const GridSpec& g, const SolveConfig& cfg,
                                 const SqueezeConfig& scfg, std::uint64_t seed);

// Exact modal contraction of the difference dynamics for a linear drift
// f(u) = -a u, evaluated in log domain at a step size fine enough that the
// scheme's per-mode rate matches the continuum one.
struct LinearSqueezeRow {
  int m;
  double log_delta_hat;  // scheme contraction over one unit window
  double log_oracle;     // -(a + lambda^h_{m+1})
};

std::vector<LinearSqueezeRow> linear_squeezing_oracle(const GridSpec& g, double a,
                                                      const std::vector<int>& m_list,
                                                      double dt_cap);

// ---------------------------------------------------------------------------
// Box-counting dimension

struct BoxCountRow {
  double eps;
  long count;
};

struct DimensionEstimate {
  double dimension = 0.0;
  std::vector<BoxCountRow> rows;
  int window_size = 0;  // scales used by the fit
};

DimensionEstimate box_counting_dimension(const std::vector<std::vector<double>>& points,
                                         int max_levels = 12,
                                         double occupancy_cap = 0.25);

// Pullback images at time 0 of random initial data in an L2 ball, projected
// onto the leading modes: the computable stand-in for the attractor sample.
std::vector<std::vector<double>> attractor_cloud(const GridSpec& g, const SolveConfig& cfg,
                                                 int n_samples, double ball_radius,
                                                 double horizon, double spin_up,
                                                 int m_embed, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Determining modes

struct ModesForwardRow {
  int m;
  double p_below_time = -1.0;     // first time |P diff| < tol (-1: never)
  double full_below_time = -1.0;  // first time |diff| < tol
  double final_p_diff = 0.0;
  double final_full_diff = 0.0;
  bool applicable = true;         // false for m = 0
  bool criterion_ok = false;      // P below tol implies full below tol by T
};

struct ModesForwardReport {
  double T;
  double tol;
  std::vector<ModesForwardRow> rows;
  int m_star = -1;  // smallest m with the criterion effective
};

ModesForwardReport determining_modes_forward(const GridSpec& g, const SolveConfig& cfg,
                                             const Field& u0, const Field& v0,
                                             const std::vector<int>& m_list, double T,
                                             double tol, std::uint64_t seed);

struct ModesPullbackRow {
  int m;
  double horizon;
  double r;  // evaluation time
  double p_diff;
  double full_diff;
};

struct ModesPullbackReport {
  double tol;
  std::vector<ModesPullbackRow> rows;
  bool criterion_ok = false;  // at the largest horizon, diffs < tol at all r
};

ModesPullbackReport determining_modes_pullback(const GridSpec& g, const SolveConfig& cfg,
                                               const Field& u0, const Field& v0,
                                               const std::vector<int>& m_list,
                                               const std::vector<double>& horizons,
                                               const std::vector<double>& r_times,
                                               double tol, double spin_up,
                                               std::uint64_t seed);

}  // namespace acsheet
