#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "acsheet/grid.hpp"
#include "acsheet/noise.hpp"
#include "acsheet/rng.hpp"

using namespace acsheet;

namespace {

// two-sample Kolmogorov-Smirnov statistic
double ks_statistic(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] <= b[j])
      ++i;
    else
      ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / a.size() -
                             static_cast<double>(j) / b.size()));
  }
  return d;
}

}  // namespace

TEST_SUITE_BEGIN("grid_noise");

TEST_CASE("grid construction and eigenvalues") {
  GridSpec g = make_grid(1.0, 3, 0.0, 1.0, 0.5);
  CHECK(g.dx() == doctest::Approx(0.25));
  CHECK(g.M() == 2);
  CHECK(g.lambda(1) == doctest::Approx(9.8696044).epsilon(1e-6));

  GridSpec g2 = make_grid(2.0, 3, 0.0, 1.0, 0.5);
  CHECK(g2.lambda(1) == doctest::Approx(2.4674011).epsilon(1e-6));

  for (int n = 1; n < g.N(); ++n) CHECK(g.lambda(n) < g.lambda(n + 1));

  CHECK_THROWS_AS(make_grid(1.0, 3, 0.0, 1.0, 0.3), NonIntegralStepCount);
  CHECK_THROWS_AS(make_grid(1.0, 1, 0.0, 1.0, 0.5), DegenerateGrid);
  CHECK_THROWS_AS(make_grid(-1.0, 3, 0.0, 1.0, 0.5), DegenerateGrid);
}

TEST_CASE("increments are deterministic and order independent") {
  GridSpec g(1.0, 15, -2.0, 2.0, 0.125);
  NoisePath a(42, g);
  NoisePath b(42, g);

  CHECK(a.increment(3, 5) == a.increment(3, 5));
  CHECK(a.increment(-7, 0) == b.increment(-7, 0));

  // forward order vs scrambled order, cached vs uncached
  NoisePath c(42, g, 0);
  std::vector<double> fwd;
  for (int k = -4; k < 4; ++k)
    for (int j = 0; j <= g.N(); ++j) fwd.push_back(a.increment(k, j));
  SmallRng rng(1);
  std::vector<double> scrambled(fwd.size());
  std::vector<std::size_t> order(fwd.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  for (std::size_t i = order.size(); i-- > 1;) std::swap(order[i], order[rng.below(i + 1)]);
  for (std::size_t idx : order) {
    const int k = static_cast<int>(idx) / (g.N() + 1) - 4;
    const int j = static_cast<int>(idx) % (g.N() + 1);
    scrambled[idx] = c.increment(k, j);
  }
  CHECK(fwd == scrambled);

  CHECK_THROWS_AS(a.increment(0, -1), CellOutOfRange);
  CHECK_THROWS_AS(a.increment(0, g.N() + 1), CellOutOfRange);
}

TEST_CASE("increment law: mean, variance, independence") {
  GridSpec g(1.0, 15, 0.0, 1.0, 0.0625);
  const double cell_var = g.dt() * g.dx();

  // fixed cell across seeds
  const int n = 4000;
  double s1 = 0.0, s2 = 0.0;
  for (int m = 0; m < n; ++m) {
    NoisePath p(1000 + m, g, 0);
    const double xi = p.increment(2, 3);
    s1 += xi;
    s2 += xi * xi;
  }
  const double var = (s2 - s1 * s1 / n) / (n - 1);
  CHECK(std::abs(var / cell_var - 1.0) < 0.10);

  // one path, many cells
  NoisePath p(7, g);
  const int n_cells = 100000;
  double m1 = 0.0, m2 = 0.0;
  for (int i = 0; i < n_cells; ++i) {
    const double xi = p.increment(i / (g.N() + 1), i % (g.N() + 1));
    m1 += xi;
    m2 += xi * xi;
  }
  const double mean = m1 / n_cells;
  const double var2 = (m2 - n_cells * mean * mean) / (n_cells - 1);
  CHECK(std::abs(mean) < 3.5 * std::sqrt(cell_var / n_cells));
  CHECK(std::abs(var2 - cell_var) < 3.5 * cell_var * std::sqrt(2.0 / n_cells));

  // disjoint rectangles decorrelated
  const int n_pairs = 5000;
  double sa = 0, sb = 0, sab = 0, saa = 0, sbb = 0;
  for (int m = 0; m < n_pairs; ++m) {
    NoisePath q(50000 + m, g, 0);
    const double ra = q.rectangle_sum(0, 4, 0, 8);
    const double rb = q.rectangle_sum(4, 8, 8, 16);
    sa += ra;
    sb += rb;
    sab += ra * rb;
    saa += ra * ra;
    sbb += rb * rb;
  }
  const double cov = sab / n_pairs - (sa / n_pairs) * (sb / n_pairs);
  const double corr = cov / std::sqrt((saa / n_pairs - sa / n_pairs * (sa / n_pairs)) *
                                      (sbb / n_pairs - sb / n_pairs * (sb / n_pairs)));
  CHECK(std::abs(corr) < 0.05);
}

TEST_CASE("rectangle sums satisfy the isometry") {
  GridSpec g(1.0, 31, 0.0, 2.0, 0.01);
  const int j0 = 8, j1 = 24;  // [0.25, 0.75]
  const std::int64_t k1 = g.time_index(2.0);
  const double area = k1 * g.dt() * (j1 - j0) * g.dx();
  CHECK(area == doctest::Approx(1.0).epsilon(1e-12));
  const int n = 3000;
  double s1 = 0.0, s2 = 0.0;
  for (int m = 0; m < n; ++m) {
    NoisePath p(90000 + m, g);
    const double r = p.rectangle_sum(0, k1, j0, j1);
    s1 += r;
    s2 += r * r;
  }
  const double var = (s2 - s1 * s1 / n) / (n - 1);
  CHECK(std::abs(var / area - 1.0) < 0.10);
}

TEST_CASE("shift group structure") {
  GridSpec g(1.0, 7, -4.0, 4.0, 0.5);
  NoisePath p(9, g);

  NoisePath zero = shift(p, 0.0);
  CHECK(zero == p);
  for (int k = -4; k <= 4; ++k)
    for (int j = 0; j <= g.N(); ++j) CHECK(zero.increment(k, j) == p.increment(k, j));

  NoisePath two_step = shift(shift(p, 0.5), -1.5);
  NoisePath one_step = shift(p, -1.0);
  CHECK(two_step == one_step);
  for (int k = -4; k <= 4; ++k)
    for (int j = 0; j <= g.N(); ++j)
      CHECK(two_step.increment(k, j) == one_step.increment(k, j));

  // shifted cells address the original sheet at offset indices
  NoisePath s = shift(p, 2.0);
  CHECK(s.increment(0, 3) == p.increment(4, 3));

  CHECK_THROWS_AS(shift(p, 0.3), NonIntegralShift);
}

TEST_CASE("shift preserves the law (two-sample KS)") {
  GridSpec g(1.0, 15, -8.0, 8.0, 0.25);
  std::vector<double> raw, shifted;
  for (int m = 0; m < 40; ++m) {
    NoisePath p(300 + m, g);
    NoisePath q = shift(p, 3.0);
    for (int k = 0; k < 16; ++k)
      for (int j = 0; j <= g.N(); ++j) {
        raw.push_back(p.increment(k, j));
        shifted.push_back(q.increment(k + 100, j));  // disjoint window
      }
  }
  const double d = ks_statistic(raw, shifted);
  const double n = static_cast<double>(raw.size());
  // 1% level for equal sample sizes
  CHECK(d * std::sqrt(n / 2.0) < 1.628);
}

TEST_CASE("coarsened and scaled views") {
  GridSpec gf(1.0, 7, 0.0, 1.0, 0.125);
  NoisePath fine(11, gf);
  CoarsenedNoise coarse(fine, 4);
  CHECK(coarse.dt() == doctest::Approx(0.5));
  for (int j = 0; j <= gf.N(); ++j) {
    const double sum = fine.increment(4, j) + fine.increment(5, j) +
                       fine.increment(6, j) + fine.increment(7, j);
    CHECK(coarse.increment(1, j) == doctest::Approx(sum).epsilon(1e-15));
  }

  ScaledNoise doubled(fine, 2.0);
  CHECK(doubled.increment(3, 2) == 2.0 * fine.increment(3, 2));

  ZeroNoise zero(gf);
  CHECK(zero.increment(-5, 3) == 0.0);
}

TEST_SUITE_END();
