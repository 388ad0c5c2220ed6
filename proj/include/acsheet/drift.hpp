#pragma once

#include <vector>

#include "acsheet/errors.hpp"

namespace acsheet {

// Odd-degree polynomial drift f(v) = sum a_i v^i with a_{2p-1} < 0, together
// with certified structural constants:
//   K   : f'(v) <= K for all v (one-sided derivative bound, clamped at 0)
//   c1,c0 : f(v) v <= -c1 v^{2p} + c0
//   k1,k0 : |f(v)| <= k1 |v|^{2p-1} + k0
// Certification is a dense grid search on a compact core plus leading-term
// domination outside it; the solver's stability guard consumes K.
class DriftPolynomial {
 public:
  explicit DriftPolynomial(std::vector<double> coefficients);

  double eval(double v) const noexcept;
  double eval_prime(double v) const noexcept;

  int degree() const noexcept { return static_cast<int>(coeff_.size()) - 1; }
  int p() const noexcept { return (degree() + 1) / 2; }
  const std::vector<double>& coefficients() const noexcept { return coeff_; }

  double K() const noexcept { return K_; }
  double c1() const noexcept { return c1_; }
  double c0() const noexcept { return c0_; }
  double k1() const noexcept { return k1_; }
  double k0() const noexcept { return k0_; }

  // radius of the compact core outside which the leading term dominates
  double core_radius() const noexcept { return core_radius_; }

 private:
  std::vector<double> coeff_;
  double K_ = 0.0, c1_ = 0.0, c0_ = 0.0, k1_ = 0.0, k0_ = 0.0;
  double core_radius_ = 1.0;
};

DriftPolynomial make_drift(const std::vector<double>& coefficients);

// the Allen-Cahn cubic u - u^3
DriftPolynomial cubic_drift();

}  // namespace acsheet
