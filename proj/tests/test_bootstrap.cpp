// Wild resampling, the continuity-test bootstrap, and the grid bootstrap.

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include <threshreg/bootstrap.hpp>
#include <threshreg/grid.hpp>
#include <threshreg/rng.hpp>

#include "support/oracles.hpp"

using namespace threshreg;

namespace {

Dataset jump_data(Rng& rng, int n, double jump) {
  Eigen::MatrixXd X(n, 2);
  X.col(0).setOnes();
  Eigen::VectorXd y(n);
  for (int t = 0; t < n; ++t) {
    X(t, 1) = 2.0 + rng.normal();
    y(t) = 1.0 + 0.8 * X(t, 1) + 0.4 * rng.normal();
    if (X(t, 1) > 2.0) y(t) += jump;
  }
  return Dataset(y, X);
}

}  // namespace

TEST_CASE("wild_resample") {
  const int n = 50;
  Eigen::VectorXd fitted(n), resid(n);
  Rng rng({41, 0});
  for (int t = 0; t < n; ++t) {
    fitted(t) = rng.normal();
    resid(t) = 0.5 + rng.uniform();
  }

  SUBCASE("zero residuals reproduce the fitted values exactly") {
    const Eigen::VectorXd y =
        wild_resample(fitted, Eigen::VectorXd::Zero(n),
                      MultiplierDist::rademacher, {1, 2});
    CHECK(y == fitted);
  }

  SUBCASE("rademacher draws live on the two-point support") {
    const Eigen::VectorXd y =
        wild_resample(fitted, resid, MultiplierDist::rademacher, {1, 3});
    for (int t = 0; t < n; ++t) {
      const double d = y(t) - fitted(t);
      const bool ok = std::abs(d - resid(t)) < 1e-15 || std::abs(d + resid(t)) < 1e-15;
      CHECK(ok);
    }
  }

  SUBCASE("identical seeds reproduce, distinct seeds differ") {
    const Eigen::VectorXd a =
        wild_resample(fitted, resid, MultiplierDist::standard_normal, {9, 4});
    const Eigen::VectorXd b =
        wild_resample(fitted, resid, MultiplierDist::standard_normal, {9, 4});
    const Eigen::VectorXd c =
        wild_resample(fitted, resid, MultiplierDist::standard_normal, {9, 5});
    CHECK(a == b);
    CHECK(a != c);
  }

  SUBCASE("conditional mean is the fitted value") {
    const int reps = 10000;
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(n);
    for (int b = 0; b < reps; ++b)
      acc += wild_resample(fitted, resid, MultiplierDist::rademacher,
                           {77, static_cast<std::uint64_t>(b)});
    acc /= reps;
    for (int t = 0; t < n; ++t)
      CHECK(std::abs(acc(t) - fitted(t)) < 3.0 * resid(t) / 100.0);
  }
}

TEST_CASE("continuity bootstrap") {
  Rng rng({42, 0});
  const Dataset ds = jump_data(rng, 150, 3.0);

  SUBCASE("a strong jump is rejected with p = 0") {
    const ContinuityBootstrap cb =
        continuity_test_bootstrap(ds, 199, MultiplierDist::rademacher, {5, 0});
    CHECK(cb.B == 199);
    CHECK(cb.sample.q_n > limit_quantile(0.99));
    CHECK(cb.p_qn == 0.0);
    CHECK(cb.p_qlr == 0.0);
    CHECK(int(cb.draws_qn.size()) == cb.B);
    CHECK(int(cb.draws_qlr.size()) == cb.B);
    CHECK(cb.degenerate == 0);
  }

  SUBCASE("null data gives a p-value in the body of the distribution") {
    // Kinked truth: the null holds.
    const int n = 150;
    Rng r2({43, 0});
    Eigen::MatrixXd X(n, 2);
    X.col(0).setOnes();
    Eigen::VectorXd y(n);
    for (int t = 0; t < n; ++t) {
      X(t, 1) = 3.0 * r2.uniform();
      const double up = X(t, 1) > 1.5 ? X(t, 1) - 1.5 : 0.0;
      y(t) = 1.0 + 0.5 * X(t, 1) + 2.0 * up + 0.3 * r2.normal();
    }
    const Dataset kds(y, X);
    const ContinuityBootstrap cb =
        continuity_test_bootstrap(kds, 199, MultiplierDist::rademacher, {6, 0});
    CHECK(cb.p_qn > 0.01);
    CHECK(cb.p_qlr > 0.01);
  }

  SUBCASE("deterministic given the seed and invariant to threads") {
    const ContinuityBootstrap a =
        continuity_test_bootstrap(ds, 99, MultiplierDist::rademacher, {7, 1});
    const ContinuityBootstrap b =
        continuity_test_bootstrap(ds, 99, MultiplierDist::rademacher, {7, 1});
    const ContinuityBootstrap c = continuity_test_bootstrap(
        ds, 99, MultiplierDist::rademacher, {7, 1}, {}, {}, 4);
    CHECK(a.p_qn == b.p_qn);
    CHECK(a.p_qlr == b.p_qlr);
    CHECK(a.draws_qn == b.draws_qn);
    CHECK(a.p_qn == c.p_qn);
    CHECK(a.p_qlr == c.p_qlr);
    CHECK(a.draws_qn == c.draws_qn);
    CHECK(a.draws_qlr == c.draws_qlr);

    const ContinuityBootstrap d =
        continuity_test_bootstrap(ds, 99, MultiplierDist::rademacher, {7, 2});
    CHECK(a.draws_qn != d.draws_qn);
  }

  SUBCASE("normal multipliers also work") {
    const ContinuityBootstrap cb =
        continuity_test_bootstrap(ds, 49, MultiplierDist::standard_normal, {8, 0});
    CHECK(cb.B == 49);
    CHECK(cb.p_qn >= 0.0);
    CHECK(cb.p_qn <= 1.0);
  }

  SUBCASE("invalid replication counts") {
    CHECK_THROWS_AS(
        continuity_test_bootstrap(ds, 0, MultiplierDist::rademacher, {1, 0}),
        DomainError);
  }
}

TEST_CASE("grid bootstrap quantiles") {
  Rng rng({44, 0});
  const Dataset ds = jump_data(rng, 120, 1.5);
  const auto grid = threshold_grid(ds);
  const double gj = grid[grid.size() / 2];

  SUBCASE("B = 1 returns the single draw for every s") {
    const double lo = grid_quantile_at(ds, gj, 0.05, 1, {}, MultiplierDist::rademacher, {9, 0});
    const double hi = grid_quantile_at(ds, gj, 0.95, 1, {}, MultiplierDist::rademacher, {9, 0});
    CHECK(lo == hi);
  }

  SUBCASE("monotone in s on a fixed seed") {
    double prev = -1.0;
    for (double s : {0.10, 0.50, 0.90, 0.99}) {
      const double q = grid_quantile_at(ds, gj, s, 99, {}, MultiplierDist::rademacher, {10, 0});
      CHECK(q >= prev);
      CHECK(q >= 0.0);
      prev = q;
    }
  }

  SUBCASE("matches the order statistic of the raw draws") {
    const std::vector<double> draws =
        grid_bootstrap_draws(ds, gj, 99, {}, MultiplierDist::rademacher, {11, 0});
    REQUIRE(draws.size() == 99u);
    std::vector<double> sorted = draws;
    std::sort(sorted.begin(), sorted.end());
    const double q95 = grid_quantile_at(ds, gj, 0.95, 99, {}, MultiplierDist::rademacher, {11, 0});
    CHECK(q95 == sorted[std::size_t(std::ceil(0.95 * 99) - 1)]);
  }
}

TEST_CASE("grid bootstrap confidence set") {
  Rng rng({45, 0});
  const Dataset ds = jump_data(rng, 200, 2.0);

  GridBootstrapOptions opt;
  opt.B = 99;
  opt.seed = {12, 0};
  const GridBootstrapCi ci = grid_bootstrap_ci(ds, opt);

  SUBCASE("shape and basic contents") {
    CHECK(ci.level == 0.95);
    CHECK(ci.quantiles.B == 99);
    CHECK(ci.quantiles.gammas.size() == ci.quantiles.quantiles.size());
    CHECK(ci.sample_scaled.size() == ci.sample_curve.gammas.size());
    CHECK(ci.xi.xi_hat > 0.0);
    // The rescaled profile is zero exactly at gamma_hat.
    for (std::size_t j = 0; j < ci.sample_curve.gammas.size(); ++j)
      if (ci.sample_curve.gammas[j] == ci.gamma_hat)
        CHECK(ci.sample_scaled[j] == 0.0);
  }

  SUBCASE("gamma_hat lies inside when its quantile is positive") {
    // At gamma_hat the statistic is zero, so any positive cut keeps it.
    bool inside = false;
    for (const auto& iv : ci.intervals)
      inside = inside || (ci.gamma_hat >= iv.lo && ci.gamma_hat <= iv.hi);
    CHECK(inside);
  }

  SUBCASE("deterministic across thread counts") {
    GridBootstrapOptions o2 = opt;
    o2.threads = 3;
    const GridBootstrapCi c2 = grid_bootstrap_ci(ds, o2);
    CHECK(c2.quantiles.quantiles == ci.quantiles.quantiles);
    REQUIRE(c2.intervals.size() == ci.intervals.size());
    for (std::size_t i = 0; i < ci.intervals.size(); ++i) {
      CHECK(c2.intervals[i].lo == ci.intervals[i].lo);
      CHECK(c2.intervals[i].hi == ci.intervals[i].hi);
    }
  }

  SUBCASE("too few replications are rejected") {
    GridBootstrapOptions bad = opt;
    bad.B = 19;
    CHECK_THROWS_AS(grid_bootstrap_ci(ds, bad), DomainError);
  }

  SUBCASE("explicit quantile points are respected") {
    GridBootstrapOptions o3 = opt;
    const auto grid = threshold_grid(ds);
    o3.quantile_points = {grid.front(), ci.gamma_hat, grid.back()};
    o3.augment_with_estimates = false;
    const GridBootstrapCi c3 = grid_bootstrap_ci(ds, o3);
    REQUIRE(c3.quantiles.gammas.size() == 3u);
    CHECK(c3.quantiles.gammas[1] == ci.gamma_hat);
  }
}
