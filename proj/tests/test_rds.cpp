#include <doctest.h>

#include <cmath>

#include "acsheet/projector.hpp"
#include "acsheet/rds.hpp"
#include "acsheet/rng.hpp"

using namespace acsheet;

TEST_SUITE_BEGIN("rds");

TEST_CASE("projector algebra") {
  GridSpec g(1.0, 64, 0.0, 1.0, 1e-3);
  auto basis = std::make_shared<SineBasis>(g);
  ProjectorSpec pr(basis, 8);

  SmallRng rng(2);
  std::vector<double> amps(64);
  for (auto& a : amps) a = rng.uniform(-1.0, 1.0);
  const Field u = sine_profile(g, amps);

  const Field pu = pr.project(u);
  const Field ppu = pr.project(pu);
  const Field qu = pr.complement(u);
  for (int i = 0; i < g.N(); ++i) {
    CHECK(ppu[i] == doctest::Approx(pu[i]).epsilon(1e-12));
    CHECK(pu[i] + qu[i] == doctest::Approx(u[i]).epsilon(1e-12));
  }
  const Field pqu = pr.project(qu);
  CHECK(pqu.l2_norm() < 1e-12);

  const auto split = pr.split_norms(u);
  CHECK(split.p_norm * split.p_norm + split.q_norm * split.q_norm ==
        doctest::Approx(u.l2_norm() * u.l2_norm()).epsilon(1e-12));

  ProjectorSpec full(basis, g.N());
  const auto sf = full.split_norms(u);
  CHECK(sf.q_norm == 0.0);
  CHECK(sf.p_norm == doctest::Approx(u.l2_norm()).epsilon(1e-12));

  CHECK_THROWS_AS(ProjectorSpec(basis, g.N() + 1), GridMismatch);
}

TEST_CASE("pullback: single point has zero diameter; reruns are identical") {
  GridSpec g(1.0, 48, -2.5, 0.0, 1e-3);
  SolveConfig cfg;
  cfg.dt = 1e-3;
  cfg.beta = 1.0;

  auto single = pullback_experiment(g, cfg, {sine_profile(g, {1.0})}, {0.5, 1.0}, 7, 0.5);
  for (const auto& row : single.rows) CHECK(row.diameter == 0.0);

  std::vector<Field> starts = {sine_profile(g, {1.0}), sine_profile(g, {-1.0}),
                               sine_profile(g, {0.0, 2.0}), sine_profile(g, {2.5})};
  auto a = pullback_experiment(g, cfg, starts, {0.5, 1.0, 2.0}, 7, 0.5);
  auto b = pullback_experiment(g, cfg, starts, {0.5, 1.0, 2.0}, 7, 0.5);
  CHECK(a.rows.size() == 3);
  CHECK(a.diameters_non_increasing);
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].diameter == b.rows[i].diameter);
    CHECK(a.rows[i].semidist_prev == b.rows[i].semidist_prev);
  }
  CHECK(a.rows.back().diameter < a.rows.front().diameter);

  CHECK_THROWS_AS(
      pullback_experiment(g, cfg, {sine_profile(g, {200.0})}, {1.0}, 7, 0.5, 5.0),
      UnboundedInitialSet);
}

TEST_CASE("absorbing radius on a short window") {
  GridSpec g(1.0, 48, 0.0, 4.0, 1e-4);
  SolveConfig cfg;
  cfg.dt = 1e-4;
  cfg.beta = 1.0;
  AbsorbConfig ac;
  ac.u0_norms = {1.0, 5.0};
  ac.T = 4.0;
  ac.temper_shifts = {0.0, 20.0, 40.0};
  ac.temper_u0_norm = 2.0;
  ac.beta_sweep = {};
  ac.aux_dt = 1e-3;
  AbsorbReport rep = absorbing_radius(g, cfg, ac, 13);

  CHECK(rep.r_hat > 0.0);
  for (double e : rep.entry_times) {
    CHECK(e >= 0.0);
    CHECK(e <= 4.0);
  }
  CHECK(rep.spread < 0.05);
  CHECK(rep.temper_decreasing);

  SolveConfig low = cfg;
  low.beta = 0.1;
  CHECK_THROWS_AS(absorbing_radius(g, low, ac, 13), BetaBelowThreshold);
}

TEST_CASE("squeezing on a short chain") {
  GridSpec g(1.0, 48, 0.0, 1.0, 5e-4);
  SolveConfig cfg;
  cfg.dt = 5e-4;
  cfg.beta = 1.0;
  SqueezeConfig sc;
  sc.m_list = {2, 4, 8};
  sc.windows = 30;
  sc.spin_up = 0.5;
  SqueezeReport rep = squeezing_estimate(g, cfg, sc, 19);

  CHECK(rep.rows.size() == 3);
  CHECK(rep.delta_decreasing);
  for (const auto& r : rep.rows) {
    CHECK(r.delta_hat > 0.0);
    CHECK(r.delta_hat < 1.0);
    CHECK(r.verdict);
  }
  // full-space contraction ratio obeys the one-sided Lipschitz bound
  CHECK(rep.gronwall_max_rho <= std::exp(cfg.drift.K()));

  SqueezeConfig degen = sc;
  degen.pair_separation = 0.0;
  CHECK_THROWS_AS(squeezing_estimate(g, cfg, degen, 19), DegeneratePair);
}

TEST_CASE("linear squeezing oracle matches the closed form") {
  GridSpec g(1.0, 128, 0.0, 1.0, 1e-4);
  const auto rows = linear_squeezing_oracle(g, 1.0, {0, 1, 4, 8, 16, 32}, 1e-4);
  for (const auto& r : rows) {
    CHECK(r.log_oracle == -(1.0 + g.lambda_fd(r.m + 1)));
    CHECK(std::abs(r.log_delta_hat - r.log_oracle) <= std::log(1.1));
  }
}

TEST_CASE("box counting recovers known dimensions") {
  SmallRng rng(101);
  for (int d = 1; d <= 3; ++d) {
    std::vector<std::vector<double>> cloud(6000);
    for (auto& p : cloud) {
      p.resize(static_cast<std::size_t>(d));
      for (auto& c : p) c = rng.uniform();
    }
    const auto est = box_counting_dimension(cloud);
    CHECK(std::abs(est.dimension - d) <= 0.2);
  }

  // a degenerate cloud has zero estimated dimension
  std::vector<std::vector<double>> point(1500, std::vector<double>{0.3, 0.7});
  const auto est = box_counting_dimension(point);
  CHECK(est.dimension == 0.0);

  CHECK_THROWS_AS(box_counting_dimension({{1.0}}), InsufficientSamples);
}

TEST_CASE("attractor cloud guards and degeneracy") {
  GridSpec g(1.0, 48, -6.0, 0.0, 1e-3);
  SolveConfig cfg;
  cfg.dt = 1e-3;
  cfg.beta = 1.0;
  CHECK_THROWS_AS(attractor_cloud(g, cfg, 500, 5.0, 1.0, 0.5, 8, 3), InsufficientSamples);

  const auto cloud = attractor_cloud(g, cfg, 1000, 3.0, 5.0, 0.5, 8, 3);
  CHECK(cloud.size() == 1000);
  // pullback collapse: the cloud is near one point
  double spread = 0.0;
  for (const auto& p : cloud)
    for (std::size_t c = 0; c < p.size(); ++c) spread = std::max(spread, std::abs(p[c] - cloud[0][c]));
  CHECK(spread == 0.0);  // full pathwise collapse at this horizon
  const auto est = box_counting_dimension(cloud);
  CHECK(est.dimension < 0.2);
}

TEST_CASE("determining modes: full projector and inapplicable cutoff") {
  GridSpec g(1.0, 48, 0.0, 2.0, 1e-3);
  SolveConfig cfg;
  cfg.dt = 1e-3;
  cfg.beta = 1.0;
  const Field u0 = sine_profile(g, {0.8, 0.3});
  const Field v0 = sine_profile(g, {-0.5, 0.2, -0.3});
  auto rep = determining_modes_forward(g, cfg, u0, v0, {0, 8, 48}, 2.0, 1e-6, 23);

  CHECK(rep.rows.size() == 3);
  CHECK_FALSE(rep.rows[0].applicable);  // m = 0: vacuous projector
  // m = N: the projected difference is the full difference
  CHECK(rep.rows[2].final_p_diff == rep.rows[2].final_full_diff);
  CHECK(rep.rows[2].p_below_time == rep.rows[2].full_below_time);
}

TEST_CASE("determining modes converge forward and in pullback") {
  GridSpec g(1.0, 48, 0.0, 6.0, 1e-3);
  SolveConfig cfg;
  cfg.dt = 1e-3;
  cfg.beta = 1.0;
  const Field u0 = sine_profile(g, {0.8, 0.3});
  const Field v0 = sine_profile(g, {-0.5, 0.2, -0.3});
  auto fwd = determining_modes_forward(g, cfg, u0, v0, {4, 8}, 6.0, 1e-6, 29);
  CHECK(fwd.m_star >= 0);
  for (const auto& r : fwd.rows) {
    CHECK(r.criterion_ok);
    CHECK(r.final_full_diff < 1e-6);
  }

  GridSpec gp(1.0, 48, -4.5, 0.0, 1e-3);
  auto pb = determining_modes_pullback(gp, cfg, sine_profile(gp, {0.8, 0.3}),
                                       sine_profile(gp, {-0.5, 0.2, -0.3}), {4, 8},
                                       {2.0, 4.0}, {-1.0, 0.0}, 1e-6, 0.5, 29);
  CHECK(pb.criterion_ok);
  CHECK(pb.rows.size() == 2 * 2 * 2);
  // differences at a fixed evaluation time shrink with the horizon
  double d_short = 0.0, d_long = 0.0;
  for (const auto& r : pb.rows)
    if (r.m == 4 && r.r == 0.0) (r.horizon == 2.0 ? d_short : d_long) = r.full_diff;
  CHECK(d_long <= d_short);
}

TEST_SUITE_END();
