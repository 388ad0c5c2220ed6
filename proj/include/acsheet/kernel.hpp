#pragma once

#include <vector>

#include "acsheet/errors.hpp"

namespace acsheet {

// Damped Dirichlet heat kernel G_{beta,t}(x,y) on (0,L) for u_t = u_xx - beta u.
struct KernelParams {
  double L = 1.0;
  double beta = 0.0;
  double tol = 1e-13;   // absolute series truncation tolerance
  int max_terms = 4096;
};

// Image-charge series: fast for small t (Gaussian decay of the images).
double kernel_images(const KernelParams& params, double t, double x, double y);

// Eigenfunction series: fast for large t (eigenvalue decay).
double kernel_spectral(const KernelParams& params, double t, double x, double y);

// Automatic switchover at t* = L^2 / pi^2 by truncation cost.
double kernel_value(const KernelParams& params, double t, double x, double y);

// total mass  int_0^L G_{beta,t}(x,y) dy  (closed forms per series)
double kernel_mass(const KernelParams& params, double t, double x);

// int_0^L G_s(x,z) G_t(z,y) dz - G_{s+t}(x,y), composite-Simpson quadrature
double chapman_kolmogorov_defect(const KernelParams& params, double s, double t, double x,
                                 double y, int n_quad = 2048);

// ---------------------------------------------------------------------------
// Space-time integral diagnostics for  int_0^t int_0^L G^p ds dy.
// The scaling exponent (3-p-gamma)/2 governs the small-t regime; the reported
// constant is the largest observed ratio integral / ((x ^ (L-x))^gamma t^expo).

struct GreenBoundRow {
  double t = 0.0;
  double integral = 0.0;
  double ratio = 0.0;  // integral / ((x^(L-x))^gamma * t^{(3-p-gamma)/2})
};

struct GreenBoundReport {
  double p = 0.0;
  double gamma = 0.0;
  double x = 0.0;
  std::vector<GreenBoundRow> rows;      // one per requested t, ascending
  double slope = 0.0;                   // log-log fit over the scaling window
  double slope_target = 0.0;            // (3-p-gamma)/2
  double k_hat = 0.0;                   // max ratio over all t
  double k_hat_drift = 0.0;             // relative growth of the running max
                                        // across the stability window
  bool pass = false;
};

struct GreenBoundConfig {
  std::vector<double> t_fit;     // small-t window for the slope fit
  std::vector<double> t_stable;  // window for constant stability
  double slope_tol = 0.05;
  double stability_tol = 0.10;
  double quad_rel_tol = 1e-5;    // per-slice space-quadrature tolerance
  int time_panels = 34;          // geometric time panels down to the singularity
};

GreenBoundConfig default_green_bound_config();

//  int_0^L G_{beta,u}(x,y)^p dy  (graded adaptive quadrature)
double kernel_slice_lp(const KernelParams& params, double p, double u, double x,
                       double rel_tol = 1e-6);

//  int_0^t int_0^L G_{beta,t-s}(x,y)^p dy ds
double kernel_spacetime_lp(const KernelParams& params, double p, double t, double x,
                           double rel_tol = 1e-6);

GreenBoundReport green_bound_report(const KernelParams& params, double p, double gamma,
                                    double x, const GreenBoundConfig& cfg);

}  // namespace acsheet
