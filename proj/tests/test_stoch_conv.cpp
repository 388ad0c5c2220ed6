#include <doctest.h>

#include <cmath>
#include <memory>

#include "acsheet/kernel.hpp"
#include "acsheet/noise.hpp"
#include "acsheet/rng.hpp"
#include "acsheet/stoch_conv.hpp"

using namespace acsheet;

TEST_SUITE_BEGIN("stoch_conv");

TEST_CASE("noise-free step is pure exponential decay") {
  GridSpec g(1.0, 15, 0.0, 1.0, 0.01);
  SpectralZ z(g, 0.0, 15, 0);
  ZeroNoise zero(g);
  for (auto& m : z.modes()) m = 1.0;
  z.step(zero, 0);
  for (int n = 1; n <= 15; ++n)
    CHECK(z.modes()[n - 1] == doctest::Approx(std::exp(-g.lambda(n) * g.dt())).epsilon(1e-14));

  CHECK_THROWS_AS(z.step(zero, 5), StepMisalignment);
}

TEST_CASE("fresh state vanishes and reconstructs zero") {
  GridSpec g(1.0, 31, 0.0, 1.0, 0.01);
  SpectralZ z(g, 0.0, 31, 0);
  CHECK(z.node_field().sup_norm() == 0.0);
  CHECK(z.value_at(0.37) == 0.0);
}

TEST_CASE("strong damping caps the stationary variance") {
  GridSpec g(1.0, 31, 0.0, 0.05, 1e-3);
  auto tab = std::make_shared<SpectralZTables>(g, 100.0, 1);
  const int n = 2000;
  double s1 = 0, s2 = 0;
  for (int m = 0; m < n; ++m) {
    NoisePath p(4000 + m, g);
    SpectralZ z(tab, 0);
    for (std::int64_t k = 0; k < g.M(); ++k) z.step(p, k);
    s1 += z.modes()[0];
    s2 += z.modes()[0] * z.modes()[0];
  }
  const double var = (s2 - s1 * s1 / n) / (n - 1);
  CHECK(var < 1.0 / (2.0 * 100.0) * 1.10);
}

TEST_CASE("kernel quadrature: zero noise, linearity, batch equivalence") {
  GridSpec g(1.0, 15, 0.0, 0.5, 0.025);
  ZeroNoise zero(g);
  CHECK(z_kernel_quadrature(zero, g, 0.0, 0.5, 0.3) == 0.0);

  NoisePath p(21, g);
  const double base = z_kernel_quadrature(p, g, 0.0, 0.5, 0.3);
  ScaledNoise doubled(p, 2.0);
  CHECK(z_kernel_quadrature(doubled, g, 0.0, 0.5, 0.3) == 2.0 * base);

  ZKernelBatch batch(p, g, 0.0, 0, {0.25, 0.5});
  for (double x : {0.2, 0.5, 0.9}) {
    CHECK(batch.value(0.5, x) ==
          doctest::Approx(z_kernel_quadrature(p, g, 0.0, 0.5, x)).epsilon(1e-9));
    CHECK(batch.value(0.25, x) ==
          doctest::Approx(z_kernel_quadrature(p, g, 0.0, 0.25, x)).epsilon(1e-9));
  }
}

TEST_CASE("reconstruction vanishes at the boundary") {
  GridSpec g(1.0, 15, 0.0, 0.1, 0.01);
  NoisePath p(61, g);
  SpectralZ z(g, 0.0, 15, 0);
  for (std::int64_t k = 0; k < g.M(); ++k) z.step(p, k);
  CHECK(z.value_at(0.0) == 0.0);                  // sin(0) exactly
  CHECK(std::abs(z.value_at(g.L())) < 1e-13);     // sin(n pi) to rounding
}

TEST_CASE("spectral linearity is exact for power-of-two scaling") {
  GridSpec g(1.0, 15, 0.0, 0.2, 0.01);
  NoisePath p(33, g);
  ScaledNoise doubled(p, 2.0);
  auto tab = std::make_shared<SpectralZTables>(g, 0.5, 15);
  SpectralZ z1(tab, 0), z2(tab, 0);
  for (std::int64_t k = 0; k < g.M(); ++k) {
    z1.step(p, k);
    z2.step(doubled, k);
  }
  for (int n = 0; n < 15; ++n) CHECK(z2.modes()[n] == 2.0 * z1.modes()[n]);
}

TEST_CASE("ensemble variance matches the kernel square integral") {
  // Ito isometry at a fixed point, oracle from the kernel quadrature
  GridSpec g(1.0, 31, 0.0, 0.1, 2e-3);
  auto tab = std::make_shared<SpectralZTables>(g, 0.0, 31);
  const double x = 0.5;
  const int n = 10000;
  double s1 = 0, s2 = 0;
  for (int m = 0; m < n; ++m) {
    NoisePath p(70000 + m, g);
    SpectralZ z(tab, 0);
    for (std::int64_t k = 0; k < g.M(); ++k) z.step(p, k);
    const double v = z.value_at(x);
    s1 += v;
    s2 += v * v;
  }
  const double var = (s2 - s1 * s1 / n) / (n - 1);
  KernelParams kp;
  kp.L = 1.0;
  const double target = kernel_spacetime_lp(kp, 2.0, 0.1, x);
  CHECK(std::abs(var / target - 1.0) < 0.05);
}

TEST_CASE("coarse step error in the resolved mode is first order") {
  // one sheet, three step sizes; mode-1 trajectory error halves with dt
  GridSpec gf(1.0, 15, 0.0, 0.5, 0.0025);
  NoisePath fine(55, gf);
  auto run_mode1 = [&](int factor) {
    GridSpec g(1.0, 15, 0.0, 0.5, 0.0025 * factor);
    CoarsenedNoise cn(fine, factor);
    auto tab = std::make_shared<SpectralZTables>(g, 0.0, 15);
    SpectralZ z(tab, 0);
    for (std::int64_t k = 0; k < g.M(); ++k) z.step(cn, k);
    return z.modes()[0];
  };
  const double exact = run_mode1(1);
  const double e4 = std::abs(run_mode1(4) - exact);
  const double e8 = std::abs(run_mode1(8) - exact);
  CHECK(e4 < e8);
  CHECK(std::log2(e8 / e4) > 0.9 * std::log2(2.0));
}

TEST_CASE("growth report structure on a short run") {
  GridSpec g(1.0, 31, 0.0, 8.0, 0.02);
  GrowthConfig gc;
  gc.ensemble = 50;
  gc.t_max = 8.0;
  gc.checkpoints = {2.0, 4.0, 8.0};
  gc.holder_diagnostic = false;
  GrowthReport rep = growth_report(g, gc, 777);
  CHECK(rep.rows.size() == 3 * 50);
  CHECK(rep.checkpoints.size() == 3);
  for (const auto& c : rep.checkpoints) {
    CHECK(c.exceed_fraction >= 0.0);
    CHECK(c.exceed_fraction <= 1.0);
    CHECK(c.median_zphi_over_t >= 0.0);
  }
  for (const auto& r : rep.rows) CHECK(std::isfinite(r.sup_norm + r.l2_norm + r.l2p_norm));

  GrowthConfig bad = gc;
  bad.ensemble = 10;
  CHECK_THROWS_AS(growth_report(g, bad, 1), EnsembleTooSmall);
}

TEST_SUITE_END();
