#include <doctest.h>

#include <cmath>

#include "acsheet/drift.hpp"
#include "acsheet/rng.hpp"

using namespace acsheet;

TEST_SUITE_BEGIN("drift");

TEST_CASE("allen-cahn cubic constants") {
  DriftPolynomial f = cubic_drift();
  CHECK(f.p() == 2);
  CHECK(f.K() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(f.c1() == doctest::Approx(0.5));
  // max_v (v^2 - v^4/2) = 1/2 at v = +-1
  CHECK(f.c0() == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(f.eval(2.0) == doctest::Approx(-6.0));
  CHECK(f.eval(0.0) == 0.0);
}

TEST_CASE("linear drift") {
  DriftPolynomial f = make_drift({0.0, -1.0});
  CHECK(f.p() == 1);
  CHECK(f.K() == 0.0);  // f' = -1 everywhere; 0 is still a valid bound
  CHECK(f.c0() == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(f.c1() > 0.0);
  CHECK(f.eval(3.0) == doctest::Approx(-3.0));
}

TEST_CASE("construction guards") {
  CHECK_THROWS_AS(make_drift({0.0, 0.0, 0.0, 1.0}), NonnegativeLeadingCoefficient);
  CHECK_THROWS_AS(make_drift({0.0, 1.0, -1.0}), EvenDegree);
  CHECK_THROWS_AS(make_drift({}), EvenDegree);
}

TEST_CASE("derivative matches central differences") {
  DriftPolynomial f = make_drift({0.3, 1.2, -0.7, -2.0});
  SmallRng rng(3);
  const double h = 1e-6;
  for (int i = 0; i < 100; ++i) {
    const double v = rng.uniform(-3.0, 3.0);
    const double fd = (f.eval(v + h) - f.eval(v - h)) / (2.0 * h);
    CHECK(f.eval_prime(v) == doctest::Approx(fd).epsilon(1e-6));
  }
  CHECK(f.eval(0.0) == doctest::Approx(0.3));
}

TEST_CASE("certified constants hold on random drifts") {
  SmallRng rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const int p = 1 + static_cast<int>(rng.below(3));
    std::vector<double> coeffs(static_cast<std::size_t>(2 * p));
    for (auto& c : coeffs) c = rng.uniform(-2.0, 2.0);
    coeffs.back() = -std::abs(coeffs.back()) - 0.1;
    DriftPolynomial f(coeffs);

    const double R = f.core_radius() + 1.0;
    for (int i = 0; i < 10000; ++i) {
      const double v = rng.uniform(-R, R);
      CHECK(f.eval(v) * v + f.c1() * std::pow(v, 2 * p) <= f.c0() + 1e-9);
      CHECK(f.eval_prime(v) <= f.K() + 1e-9);
      CHECK(std::abs(f.eval(v)) <=
            f.k1() * std::pow(std::abs(v), 2 * p - 1) + f.k0() + 1e-9);
    }
    // one-sided Lipschitz from the derivative bound
    for (int i = 0; i < 10000; ++i) {
      const double u = rng.uniform(-R, R), v = rng.uniform(-R, R);
      CHECK((f.eval(u) - f.eval(v)) * (u - v) <= f.K() * (u - v) * (u - v) + 1e-9);
    }
  }
}

TEST_SUITE_END();
