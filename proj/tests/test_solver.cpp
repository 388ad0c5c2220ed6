#include <doctest.h>

#include <cmath>

#include "acsheet/field.hpp"
#include "acsheet/noise.hpp"
#include "acsheet/rng.hpp"
#include "acsheet/solver.hpp"
#include "acsheet/test_function.hpp"

using namespace acsheet;

namespace {

// noise wrapper that records the largest time index ever requested
class IndexRecorder : public NoiseSource {
 public:
  explicit IndexRecorder(const NoiseSource& base) : base_(base) {}
  double dt() const noexcept override { return base_.dt(); }
  double dx() const noexcept override { return base_.dx(); }
  int cells() const noexcept override { return base_.cells(); }
  double increment(std::int64_t k, int j) const override {
    max_k = std::max(max_k, k);
    return base_.increment(k, j);
  }
  void fill_row(std::int64_t k, std::span<double> out) const override {
    max_k = std::max(max_k, k);
    base_.fill_row(k, out);
  }
  mutable std::int64_t max_k = std::numeric_limits<std::int64_t>::min();

 private:
  const NoiseSource& base_;
};

}  // namespace

TEST_SUITE_BEGIN("solver");

TEST_CASE("diffusion-only step decays the discrete eigenvector exactly") {
  GridSpec g(1.0, 128, 0.0, 1.0, 1e-4);
  SolveConfig cfg;
  cfg.dt = 1e-4;
  cfg.drift = make_drift({0.0, -1e-300});  // effectively zero drift
  Field v = sine_profile(g, {1.0});
  Field z(g);
  Field out = step_v(g, cfg, v, z);
  const double factor = 1.0 / (1.0 + cfg.dt * g.lambda_fd(1));
  for (int i = 0; i < g.N(); ++i)
    CHECK(out[i] == doctest::Approx(v[i] * factor).epsilon(1e-12));
}

TEST_CASE("zero state is a fixed point when the drift has no constant term") {
  GridSpec g(1.0, 32, 0.0, 1.0, 1e-3);
  SolveConfig cfg;
  cfg.dt = 1e-3;
  Field v(g), z(g);
  Field out = step_v(g, cfg, v, z);
  for (int i = 0; i < g.N(); ++i) CHECK(out[i] == 0.0);
}

TEST_CASE("stability guard") {
  GridSpec g(1.0, 16, 0.0, 2.0, 1.0);
  SolveConfig cfg;
  cfg.dt = 1.0;
  cfg.drift = make_drift({0.0, 2.0, 0.0, -1.0});  // K = 2
  Field v(g), z(g);
  CHECK_THROWS_AS(step_v(g, cfg, v, z), StabilityGuardViolated);
}

TEST_CASE("deterministic decay to zero below the first eigenvalue") {
  GridSpec g(1.0, 128, 0.0, 2.0, 1e-4);
  SolveConfig cfg;
  cfg.dt = 1e-4;
  ZeroNoise zero(g);
  auto res = solve_u(g, cfg, sine_profile(g, {0.5}), zero, 0, g.M());
  Field u = res.v_final;
  u += res.z_final;
  CHECK(u.l2_norm() < 1e-6);
}

TEST_CASE("linear drift matching the split leaves V identically zero") {
  // f(u) = -beta u with the same beta in the split: U coincides with Z
  GridSpec g(1.0, 32, 0.0, 0.5, 1e-3);
  SolveConfig cfg;
  cfg.dt = 1e-3;
  cfg.beta = 1.0;
  cfg.drift = make_drift({0.0, -1.0});
  NoisePath noise(3, g);
  auto res = solve_u(g, cfg, Field(g), noise, 0, g.M());
  for (int i = 0; i < g.N(); ++i) CHECK(res.v_final[i] == 0.0);
}

TEST_CASE("self-convergence under time refinement is first order") {
  // refine the step against one fixed noise density (constant per coarse cell)
  const double dt0 = 2e-3;
  GridSpec gc(1.0, 64, 0.0, 1.0, dt0);
  NoisePath coarse(62, gc);
  auto terminal = [&](int refine) {
    GridSpec g(1.0, 64, 0.0, 1.0, dt0 / refine);
    SolveConfig cfg;
    cfg.dt = g.dt();
    RefinedNoise rn(coarse, refine);
    auto res = solve_u(g, cfg, sine_profile(g, {0.5}), rn, 0, g.M());
    Field u = res.v_final;
    u += res.z_final;
    return u;
  };
  const Field u1 = terminal(1);
  const Field u2 = terminal(2);
  const Field u4 = terminal(4);
  // consecutive-difference ratio approaches 2 for an order-1 scheme
  const double ratio = l2_distance(u1, u2) / l2_distance(u2, u4);
  CHECK(ratio > 1.6);
  CHECK(ratio < 2.6);
}

TEST_CASE("adaptedness: the march never touches future noise") {
  GridSpec g(1.0, 32, 0.0, 0.1, 1e-3);
  SolveConfig cfg;
  cfg.dt = 1e-3;
  NoisePath base(8, g);
  IndexRecorder rec(base);
  auto res = solve_u(g, cfg, sine_profile(g, {1.0}), rec, 0, g.M());
  CHECK(rec.max_k == g.M() - 1);

  // materializing future rows beforehand changes nothing
  NoisePath warm(8, g);
  std::vector<double> buf(static_cast<std::size_t>(g.N() + 1));
  for (std::int64_t k = 0; k < 3 * g.M(); ++k) warm.fill_row(k, buf);
  auto res2 = solve_u(g, cfg, sine_profile(g, {1.0}), warm, 0, g.M());
  for (int i = 0; i < g.N(); ++i) {
    CHECK(res.v_final[i] == res2.v_final[i]);
    CHECK(res.z_final[i] == res2.z_final[i]);
  }
}

TEST_CASE("identical runs are bit identical") {
  GridSpec g(1.0, 48, 0.0, 0.2, 1e-3);
  SolveConfig cfg;
  cfg.dt = 1e-3;
  NoisePath n1(99, g), n2(99, g);
  auto a = solve_u(g, cfg, sine_profile(g, {0.7, -0.2}), n1, 0, g.M(), {}, {0.1, 0.2});
  auto b = solve_u(g, cfg, sine_profile(g, {0.7, -0.2}), n2, 0, g.M(), {}, {0.1, 0.2});
  for (int i = 0; i < g.N(); ++i) {
    CHECK(a.v_final[i] == b.v_final[i]);
    CHECK(a.z_final[i] == b.z_final[i]);
  }
  REQUIRE(a.snapshots.size() == 2);
  for (std::size_t s = 0; s < a.snapshots.size(); ++s)
    for (int i = 0; i < g.N(); ++i) {
      CHECK(a.snapshots[s].u[i] == b.snapshots[s].u[i]);
      CHECK(a.snapshots[s].u[i] ==
            a.snapshots[s].v[i] + a.snapshots[s].z[i]);
    }
}

TEST_CASE("cocycle identity: restart with the shifted path is exact") {
  GridSpec g(1.0, 48, 0.0, 0.2, 1e-3);
  SolveConfig cfg;
  cfg.dt = 1e-3;
  SolverEngine eng(g, cfg);
  NoisePath noise(123, g);

  // one shot over [0, 0.2]
  SpectralZ z_full = eng.make_z(0);
  Field zn_full = z_full.node_field();
  Field v_full[1] = {sine_profile(g, {0.9})};
  eng.march(z_full, zn_full, v_full, noise, g.M());

  // stop at 0.1, hand (V, Z-modes) over, continue with the shifted path
  SpectralZ z_a = eng.make_z(0);
  Field zn_a = z_a.node_field();
  Field v_a[1] = {sine_profile(g, {0.9})};
  eng.march(z_a, zn_a, v_a, noise, g.M() / 2);

  NoisePath shifted = shift(noise, 0.1);
  SpectralZ z_b = eng.make_z(0);
  z_b.modes() = z_a.modes();
  Field zn_b = z_b.node_field();
  Field v_b[1] = {v_a[0]};
  eng.march(z_b, zn_b, v_b, shifted, g.M() - g.M() / 2);

  for (int i = 0; i < g.N(); ++i) {
    CHECK(v_b[0][i] == v_full[0][i]);
    CHECK(zn_b[i] == zn_full[i]);
  }

  // zero steps: identity
  SpectralZ z_id = eng.make_z(0);
  Field zn_id = z_id.node_field();
  Field v_id[1] = {sine_profile(g, {0.9})};
  eng.march(z_id, zn_id, v_id, noise, 0);
  for (int i = 0; i < g.N(); ++i) CHECK(v_id[0][i] == sine_profile(g, {0.9})[i]);
}

TEST_CASE("noise-free energy never increases") {
  GridSpec g(1.0, 64, 0.0, 0.2, 1e-4);
  SolveConfig cfg;
  cfg.dt = 1e-4;
  SolverEngine eng(g, cfg);
  ZeroNoise zero(g);
  SpectralZ z = eng.make_z(0);
  Field zn = z.node_field();
  Field v[1] = {sine_profile(g, {0.8, 0.0, 0.3})};
  double prev = gl_energy(v[0], cfg.drift);
  std::vector<double> row(static_cast<std::size_t>(g.N() + 1));
  for (std::int64_t s = 0; s < g.M(); ++s) {
    eng.advance(z, zn, v, zero, row);
    const double e = gl_energy(v[0], cfg.drift);
    CHECK(e <= prev + 1e-8);
    prev = e;
  }
}

TEST_CASE("weak-form residual: exact zero on the null trajectory") {
  GridSpec g(1.0, 32, 0.0, 0.1, 1e-3);
  SolveConfig cfg;
  cfg.dt = 1e-3;
  ZeroNoise zero(g);
  const TestFunction phi = TestFunction::from_sine_series(g, {1.0, 0.4});
  auto rs = weak_form_residual(g, cfg, Field(g), zero, phi, 0, g.M());
  CHECK(rs.max_abs == 0.0);
}

TEST_CASE("weak-form residual shrinks with the step, noise-free") {
  GridSpec gc(1.0, 96, 0.0, 1.0, 2e-3);
  GridSpec gf(1.0, 96, 0.0, 1.0, 1e-3);
  SolveConfig cc, cf;
  cc.dt = 2e-3;
  cf.dt = 1e-3;
  ZeroNoise zero_c(gc), zero_f(gf);
  const auto rc = weak_form_residual(gc, cc, sine_profile(gc, {0.5}), zero_c,
                                     TestFunction::from_sine_series(gc, {1.0}), 0, gc.M());
  const auto rf = weak_form_residual(gf, cf, sine_profile(gf, {0.5}), zero_f,
                                     TestFunction::from_sine_series(gf, {1.0}), 0, gf.M());
  CHECK(rf.max_abs < 0.7 * rc.max_abs);
}

TEST_CASE("test function boundary guard") {
  GridSpec g(1.0, 16, 0.0, 0.1, 1e-2);
  CHECK_THROWS_AS(TestFunction::from_callables(
                      g, [](double x) { return x + 1.0; }, [](double) { return 0.0; }),
                  TestFunctionBoundaryViolation);
}

TEST_CASE("difference dynamics: identical starts stay identical") {
  GridSpec g(1.0, 48, 0.0, 0.2, 1e-3);
  SolveConfig cfg;
  cfg.dt = 1e-3;
  NoisePath noise(31, g);
  const Field u0 = sine_profile(g, {0.6, -0.1});
  auto rep = difference_run(g, cfg, u0, u0, noise, 0, g.M());
  for (double d : rep.diff_l2) CHECK(d == 0.0);
}

TEST_CASE("difference dynamics: exact cancellation and Gronwall bound") {
  GridSpec g(1.0, 128, 0.0, 0.5, 1e-4);
  SolveConfig cfg;
  cfg.dt = 1e-4;
  cfg.beta = 1.0;
  NoisePath noise(5, g);
  auto rep = difference_run(g, cfg, sine_profile(g, {0.5}), sine_profile(g, {-0.5}),
                            noise, 0, g.M());
  CHECK(rep.max_defect_rel < 1e-12);
  CHECK(rep.gronwall_ok);
  CHECK(rep.diff_l2.back() > 0.0);
  CHECK(rep.diff_l2.back() < rep.diff_l2.front());

  GridSpec g2(1.0, 32, 0.0, 0.5, 1e-4);
  CHECK_THROWS_AS(
      difference_run(g, cfg, sine_profile(g, {0.5}), sine_profile(g2, {0.5}), noise, 0, 10),
      GridMismatch);
}

TEST_SUITE_END();
