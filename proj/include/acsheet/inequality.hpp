#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "acsheet/errors.hpp"

namespace acsheet {

// Closed-form sample function on [0,L] with exact derivatives, from one of
// two families: finite sine series (vanishing at both ends) or x times a
// polynomial (vanishing at 0 only).
class SampleFunction {
 public:
  static SampleFunction sine_series(double L, std::vector<double> amplitudes);
  static SampleFunction x_times_poly(double L, std::vector<double> poly_coeffs);

  double L() const noexcept { return L_; }
  bool vanishes_at_right() const noexcept { return kind_ == Kind::Sine; }

  double value(double x) const;
  double derivative(double x) const;
  double second_derivative(double x) const;

 private:
  enum class Kind { Sine, XPoly };
  Kind kind_;
  double L_;
  std::vector<double> a_;

  SampleFunction(Kind k, double L, std::vector<double> a)
      : kind_(k), L_(L), a_(std::move(a)) {}
};

// adaptive Simpson quadrature to absolute tolerance
double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol = 1e-9);

struct IneqResult {
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;  // rhs - lhs (positive: inequality satisfied)
  bool pass = false;
};

//  |v|_{L^p} <= L |Dv|_{L^p}  for v(0) = 0, p >= 1
IneqResult poincare_lp_check(const SampleFunction& v, double p, double tol = 1e-7);

//  int v'' v^{2p-1} <= -((2p-1)/(p^2 L)) |v|_{2p}^{2p}  for v(0)=v(L)=0
// also checks the gradient form -int v' (v^{2p-1})' against the same bound
struct OddPowerResult {
  IneqResult laplacian_form;
  IneqResult gradient_form;
  bool pass = false;
};
OddPowerResult odd_power_check(const SampleFunction& v, int p, double tol = 1e-7);

// |int u0(y) d/dx p_t(x,y) dy| <= 2 Lambda for Lipschitz u0 on R, with p_t
// the free-space kernel of u_t = u_xx; checked on an x-sweep scaled to the
// kernel width at each t.
struct DerivativeBoundResult {
  double max_value = 0.0;       // max |integral| over the (x,t) sweep
  double bound = 0.0;           // 2 * Lambda
  double t_uniformity = 0.0;    // max_t / min_t of the per-t maxima - 1
  bool pass = false;
};

// u0 given as a callable with certified Lipschitz constant; the x sweep is
// centered where the derivative profile lives (the kink position for
// piecewise-linear data) so the per-t maxima are comparable across scales
DerivativeBoundResult derivative_bound_check(const std::function<double(double)>& u0,
                                             double lipschitz,
                                             const std::vector<double>& t_list,
                                             int x_points = 50, double tol = 1e-7,
                                             double sweep_center = 0.0);

}  // namespace acsheet
