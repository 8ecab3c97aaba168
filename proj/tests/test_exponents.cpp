#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "bigelfand/exponents.hpp"
#include "oracles.hpp"

using namespace bgf::exponents;

TEST_CASE("cubic_roots against the bisection oracle") {
  const auto r = cubic_roots();
  auto f = [](double x) { return x * x * x - 8 * x + 4; };
  // bisection oracles computed on [2,3] and [0.5, 0.6]
  double lo = 2.0, hi = 3.0;
  while (hi - lo > 1e-13) {
    const double m = 0.5 * (lo + hi);
    ((f(m) > 0) == (f(hi) > 0) ? hi : lo) = m;
  }
  CHECK(r.alpha_star == doctest::Approx(0.5 * (lo + hi)).epsilon(1e-12));
  CHECK(r.alpha_star == doctest::Approx(2.53407).epsilon(1e-5));
  lo = 0.5;
  hi = 0.6;
  while (hi - lo > 1e-13) {
    const double m = 0.5 * (lo + hi);
    ((f(m) > 0) == (f(hi) > 0) ? hi : lo) = m;
  }
  CHECK(r.alpha_sharp == doctest::Approx(0.5 * (lo + hi)).epsilon(1e-12));
  CHECK(r.alpha_sharp == doctest::Approx(0.51740).epsilon(1e-4));

  // Vieta: monic cubic with zero quadratic term and constant +4
  CHECK(r.root_neg + r.alpha_sharp + r.alpha_star == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(r.root_neg * r.alpha_sharp * r.alpha_star == doctest::Approx(-4.0).epsilon(1e-12));
}

TEST_CASE("exponent table: p*, q*, cutoff dimension") {
  const auto t = exponent_table(12);
  CHECK(t.p_star > 3.0);
  CHECK(t.dim_cutoff == 12);
  CHECK(t.q_star == doctest::Approx(2.4 * t.alpha_star).epsilon(1e-12));
  CHECK(t.q_star == doctest::Approx(6.0818).epsilon(1e-4));
  CHECK(t.regular);

  // p* equals the largest root of (X - 1/2)^3 - 8(X - 1/2) + 4
  auto g = [](double x) {
    const double y = x - 0.5;
    return y * y * y - 8 * y + 4;
  };
  const double root = oracle::newton_root(
      g, [](double x) { const double y = x - 0.5; return 3 * y * y - 8; }, 3.0);
  CHECK(t.p_star == doctest::Approx(root).epsilon(1e-12));
}

TEST_CASE("delta_margin: sign structure") {
  CHECK(delta_margin(1.0) == doctest::Approx(1.0).epsilon(1e-14));
  const auto r = cubic_roots();
  CHECK(std::abs(delta_margin(r.alpha_star)) <= 1e-10);
  CHECK(std::abs(delta_margin(r.alpha_sharp)) <= 1e-10);
  CHECK(delta_margin(3.0) == doctest::Approx(2 * std::sqrt(5.0) / (3 * std::sqrt(3.0)) - 1)
                                 .epsilon(1e-12));
  CHECK(delta_margin(3.0) < 0);
  CHECK_THROWS_AS(delta_margin(0.4), std::invalid_argument);

  // shares sign with lp_coefficient away from the roots
  for (double a : {0.6, 0.9, 1.5, 2.0, 2.5, 2.8, 4.0})
    CHECK((delta_margin(a) > 0) == (lp_coefficient(a) > 0));
}

TEST_CASE("lp_coefficient values") {
  CHECK(lp_coefficient(1.0) == doctest::Approx(0.75).epsilon(1e-14));
  CHECK(lp_coefficient(2.5) == doctest::Approx(0.0234375).epsilon(1e-12));
  CHECK(std::abs(lp_coefficient(cubic_roots().alpha_star)) <= 1e-10);
  CHECK_THROWS_AS(lp_coefficient(0.5), std::invalid_argument);
}

TEST_CASE("bootstrap_chain: ratios and reachability") {
  const auto c = bootstrap_chain(5, 1.0, 2.0);
  REQUIRE(c.steps.size() >= 3);
  CHECK(c.steps[1] == doctest::Approx(5.0 / 3.0).epsilon(1e-14));
  CHECK(c.steps[2] == doctest::Approx(25.0 / 9.0).epsilon(1e-14));
  CHECK(c.reachable);

  const auto c3 = bootstrap_chain(3, 1.0, 7.0);
  CHECK(c3.reachable);  // ratio 3: ceiling 3 alpha* > 7
  CHECK_THROWS_AS(bootstrap_chain(2, 1.0, 2.0), std::invalid_argument);

  // reachability is monotone in dimension for a fixed start/target:
  // smaller N/(N-2) never widens the reachable set
  for (int n = 5; n < 12; ++n) {
    const auto lo = bootstrap_chain(n + 1, 1.0, 2.9);
    const auto hi = bootstrap_chain(n, 1.0, 2.9);
    CHECK((hi.reachable || !lo.reachable));
  }
}

TEST_CASE("hausdorff_bound: values and the regularity flag") {
  const auto b13 = hausdorff_bound(13);
  CHECK(b13.bound == doctest::Approx(0.8637).epsilon(2e-4));
  CHECK(!b13.regular);
  const auto b12 = hausdorff_bound(12);
  CHECK(b12.regular);
  CHECK(b12.dim_cutoff == 12);
  const auto b16 = hausdorff_bound(16);
  CHECK(b16.bound == doctest::Approx(16 - 4 * (cubic_roots().alpha_star + 0.5)).epsilon(1e-12));
  CHECK(b16.bound == doctest::Approx(3.8637).epsilon(1e-3));
}
