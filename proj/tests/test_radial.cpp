#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "bigelfand/fd.hpp"
#include "bigelfand/radial.hpp"
#include "oracles.hpp"

using namespace bgf;

namespace {
// the closed-form entire solution in dimension 4
double u4(double r) { return -4 * std::log(1 + r * r) + std::log(384.0); }
double du4(double r) { return -8 * r / (1 + r * r); }
double v4(double r) { return (32 + 16 * r * r) / std::pow(1 + r * r, 2); }
double dv4(double r) {
  const double s = 1 + r * r;
  return 32 * r / (s * s) - 4 * r * (32 + 16 * r * r) / (s * s * s);
}
}  // namespace

TEST_CASE("radial_field: explicit dimension-4 solution is a field fixed point") {
  const double r = 1.0;
  const num::StateVec<4> s{u4(r), du4(r), v4(r), dv4(r)};
  const auto f = radial::radial_field(4, r, s);
  // analytic derivatives of (u, u', v, v') at r = 1
  const double h = 1e-6;
  const double ddu = (du4(r + h) - du4(r - h)) / (2 * h);
  const double ddv = (dv4(r + h) - dv4(r - h)) / (2 * h);
  CHECK(f[0] == doctest::Approx(du4(r)).epsilon(1e-12));
  CHECK(f[1] == doctest::Approx(ddu).epsilon(1e-7));
  CHECK(f[2] == doctest::Approx(dv4(r)).epsilon(1e-12));
  CHECK(f[3] == doctest::Approx(ddv).epsilon(1e-7));
}

TEST_CASE("radial_field: zero state forcing") {
  const auto f = radial::radial_field(7, 2.0, {0, 0, 0, 0});
  CHECK(f[0] == 0.0);
  CHECK(f[1] == 0.0);
  CHECK(f[2] == 0.0);
  CHECK(f[3] == -1.0);  // e^0 forcing
}

TEST_CASE("radial_field: singular profile residual via the symbolic oracle") {
  // u = -4 ln r + ln 24 in N=5: Delta r^a = a(a+N-2) r^{a-2} gives
  // v = 4(N-2)/r^2 and -Delta v = 24 r^{-4} = e^u exactly
  const int N = 5;
  const double r = 2.0;
  const double u = -4 * std::log(r) + std::log(24.0);
  const double du = -4 / r;
  const double v = 4.0 * (N - 2) / (r * r);
  const double dv = -8.0 * (N - 2) / (r * r * r);
  const auto f = radial::radial_field(N, r, {u, du, v, dv});
  // u'' from the closed form: 4/r^2 ; v'' = 24 (N-2)/r^4
  CHECK(f[1] == doctest::Approx(4 / (r * r)).epsilon(1e-12));
  CHECK(f[3] == doctest::Approx(24.0 * (N - 2) / std::pow(r, 4)).epsilon(1e-12));
  CHECK_THROWS_AS(radial::radial_field(5, 0.0, {0, 0, 0, 0}), std::invalid_argument);
}

TEST_CASE("series_start: leading order and the explicit solution's Taylor data") {
  const auto s = radial::series_start(0.0, 0.0, 5, 1e-3);
  CHECK(s[0] == doctest::Approx(1e-12 / 80).epsilon(1e-6));
  CHECK(s[2] == doctest::Approx(-1e-6 / 10).epsilon(1e-6));

  // a = ln 384, beta = 32, N = 4: compare with the closed form at r0
  const double r0 = 1e-3;
  const auto e = radial::series_start(std::log(384.0), 32.0, 4, r0);
  CHECK(e[0] == doctest::Approx(u4(r0)).epsilon(1e-14));
  CHECK(e[1] == doctest::Approx(du4(r0)).epsilon(1e-10));
  CHECK(e[2] == doctest::Approx(v4(r0)).epsilon(1e-14));
  CHECK(e[3] == doctest::Approx(dv4(r0)).epsilon(1e-10));
  CHECK_THROWS_AS(radial::series_start(0, 0, 5, 0.0), std::invalid_argument);
}

TEST_CASE("series_start: self-consistency between r0 = 1e-3 and 1e-4") {
  for (double r0 : {1e-3, 1e-4}) (void)r0;
  radial::ShootConfig c1, c2;
  c1.r0 = 1e-3;
  c2.r0 = 1e-4;
  c1.integ.r_max = c2.integ.r_max = 1.0;
  const auto o1 = radial::shoot(0.0, 2.0, 5, c1);
  const auto o2 = radial::shoot(0.0, 2.0, 5, c2);
  REQUIRE(o1.profile);
  REQUIRE(o2.profile);
  const double u1 = o1.profile->interp_u(1.0);
  const double u2 = o2.profile->interp_u(1.0);
  CHECK(u1 == doctest::Approx(u2).epsilon(1e-8));
}

TEST_CASE("shoot: explicit N=4 solution reproduced within 1e-6 on [0, 10]") {
  radial::ShootConfig cfg;
  cfg.integ.r_max = 10.0;
  const auto out = radial::shoot(std::log(384.0), 32.0, 4, cfg);
  CHECK(out.kind == radial::ShootKind::global);
  REQUIRE(out.profile);
  double worst = 0.0;
  for (std::size_t i = 0; i < out.profile->size(); ++i)
    worst = std::max(worst, std::abs(out.profile->u[i] - u4(out.profile->grid[i])));
  CHECK(worst <= 1e-6);
}

TEST_CASE("shoot: large beta is global and sits under the quadratic barrier") {
  const int N = 5;
  const double beta = 100.0;
  const auto out = radial::shoot(0.0, beta, N);
  CHECK(out.kind == radial::ShootKind::global);
  REQUIRE(out.profile);
  const double beta0 = 1.5570918;  // frozen from the fixed-step oracle below
  double worst = -1e30;
  for (std::size_t i = 0; i < out.profile->size(); ++i) {
    const double bar = -(beta - beta0) * out.profile->grid[i] * out.profile->grid[i] / (2.0 * N);
    worst = std::max(worst, out.profile->u[i] - bar);
  }
  CHECK(worst <= 1e-6);
}

TEST_CASE("shoot: beta = 0 blows up at finite radius (oracle cross-check)") {
  const auto out = radial::shoot(0.0, 0.0, 5);
  CHECK(out.kind == radial::ShootKind::blowup);
  CHECK(!out.profile);
  const auto ref = oracle::rk4_radial(0.0, 0.0, 5, 50.0, 1e-4);
  CHECK(ref.blew_up);
  CHECK(out.blowup_radius == doctest::Approx(ref.blowup_radius).epsilon(1e-3));
}

TEST_CASE("find_beta0: N=5 bracket against the fixed-step RK4 oracle") {
  const auto br = radial::find_beta0(5, 1e-6);
  CHECK(br.width() <= 1e-6);
  const double ref = oracle::rk4_beta0(5, 1e-5);
  CHECK(br.mid() == doctest::Approx(ref).epsilon(2e-5));
  CHECK(br.mid() == doctest::Approx(1.5570918).epsilon(1e-5));  // regression baseline
  CHECK(br.lo > 0.0);

  // outcome flips across the bracket
  CHECK(radial::shoot(0.0, br.lo - 0.1, 5).kind == radial::ShootKind::blowup);
  CHECK(radial::shoot(0.0, br.hi + 0.1, 5).kind == radial::ShootKind::global);
}

TEST_CASE("find_beta0: positive for a spread of dimensions") {
  // regression baselines frozen from the adaptive and fixed-step routes
  const auto b6 = radial::find_beta0(6, 1e-4);
  CHECK(b6.mid() == doctest::Approx(1.5224709).epsilon(1e-3));
  CHECK(b6.lo > 0);
  const auto b12 = radial::find_beta0(12, 1e-4);
  CHECK(b12.mid() == doctest::Approx(1.4586320).epsilon(1e-3));
  CHECK(b12.lo > 0);
}

TEST_CASE("ordering: larger beta lies below") {
  const double beta0 = 1.5570918;
  const auto o1 = radial::shoot(0.0, beta0 + 1.0, 5);
  const auto o2 = radial::shoot(0.0, beta0 + 2.0, 5);
  REQUIRE(o1.profile);
  REQUIRE(o2.profile);
  for (std::size_t i = 0; i < o1.profile->size(); ++i)
    CHECK(o2.profile->u[i] <= o1.profile->u[i] + 1e-9);
}

TEST_CASE("positivity: global profiles keep v > 0 and u' <= 0") {
  for (double beta : {2.0, 3.0, 8.0}) {
    const auto out = radial::shoot(0.0, beta, 5);
    REQUIRE(out.profile);
    for (std::size_t i = 0; i < out.profile->size(); ++i) {
      CHECK(out.profile->v[i] > 0.0);
      CHECK(out.profile->du[i] <= 1e-12);
      CHECK(out.profile->dv[i] <= 1e-9);
    }
  }
}

TEST_CASE("scale_profile: identity, fixed point, and recomputation oracle") {
  const auto out = radial::shoot(0.0, 3.0, 5);
  REQUIRE(out.profile);
  const auto& p = *out.profile;

  const auto id = radial::scale_profile(p, 1.0);
  CHECK(id.u == p.u);
  CHECK(id.beta == p.beta);

  // the singular profile is a fixed point of the scaling
  std::vector<double> grid;
  for (int i = 0; i <= 200; ++i) grid.push_back(0.5 + 0.1 * i);
  const auto s = radial::singular_profile(5, grid);
  const auto s2 = radial::scale_profile(s, 2.0);
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double r = s2.grid[i];
    CHECK(s2.u[i] == doctest::Approx(-4 * std::log(r) + std::log(24.0)).epsilon(1e-12));
  }

  // scaling by 2 maps (a=0, beta) to (4 ln 2, 4 beta); verify against an
  // independent shot from the transformed data
  const auto q = radial::scale_profile(p, 2.0);
  CHECK(q.a == doctest::Approx(4 * std::log(2.0)).epsilon(1e-12));
  CHECK(q.beta == doctest::Approx(4 * 3.0).epsilon(1e-12));
  radial::ShootConfig cfg;
  cfg.integ.r_max = 20.0;
  const auto re = radial::shoot(q.a, q.beta, 5, cfg);
  REQUIRE(re.profile);
  for (double r : {0.5, 1.0, 3.0, 9.0})
    CHECK(q.interp_u(r) == doctest::Approx(re.profile->interp_u(r)).epsilon(1e-7));
  CHECK_THROWS_AS(radial::scale_profile(p, -1.0), std::invalid_argument);
}

TEST_CASE("scale_profile: equation residual is scale invariant") {
  const auto out = radial::shoot(0.0, 3.0, 5);
  REQUIRE(out.profile);
  auto residual = [](const radial::RadialProfile& p) {
    // max |Delta u + v| over interior nodes by finite differences
    const auto lap = num::radial_laplacian(p.grid, p.u, p.dim);
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < p.size(); ++i)
      worst = std::max(worst, std::abs(lap[i] + p.v[i]));
    return worst;
  };
  const double r0 = residual(*out.profile);
  for (double lam : {0.5, 2.0, 10.0}) {
    const auto q = radial::scale_profile(*out.profile, lam);
    // residual scales like lam^2 under the map; compare normalized
    CHECK(residual(q) / (lam * lam) <= r0 * (1 + 1e-9) + 1e-12);
  }
}

TEST_CASE("singular_profile: constants and residual under the discrete operator") {
  std::vector<double> grid;
  for (int i = 0; i <= 400; ++i) grid.push_back(std::pow(10.0, -1.0 + 3.0 * i / 400.0));
  const auto s5 = radial::singular_profile(5, grid);
  CHECK(s5.u[0] + 4 * std::log(grid[0]) == doctest::Approx(std::log(24.0)).epsilon(1e-12));
  const auto s13 = radial::singular_profile(13, grid);
  CHECK(s13.u[0] + 4 * std::log(grid[0]) == doctest::Approx(std::log(792.0)).epsilon(1e-12));
  CHECK_THROWS_AS(radial::singular_profile(4, grid), std::invalid_argument);

  // discrete system residual: -lap u = v and -lap v = e^u
  const auto lap_u = num::radial_laplacian(s5.grid, s5.u, 5);
  const auto lap_v = num::radial_laplacian(s5.grid, s5.v, 5);
  for (std::size_t i = 1; i + 1 < s5.size(); ++i) {
    const double scale = std::max(1.0, std::abs(s5.v[i]));
    CHECK(std::abs(lap_u[i] + s5.v[i]) / scale <= 1e-7);
    CHECK(std::abs(lap_v[i] + std::exp(s5.u[i])) / std::max(1.0, std::exp(s5.u[i])) <= 1e-6);
  }
}

TEST_CASE("vbar_limit: explicit decay and positive tail") {
  std::vector<double> grid;
  for (int i = 0; i <= 2000; ++i) grid.push_back(0.5 + 0.05 * i);
  const auto s = radial::singular_profile(5, grid);
  const auto t = radial::vbar_limit(s);  // v = 12/r^2 -> 0
  CHECK(radial::tail_limit_is_zero(t));

  const auto out = radial::shoot(0.0, 5.0, 5);
  REQUIRE(out.profile);
  const auto tp = radial::vbar_limit(*out.profile);
  CHECK(tp.estimate > 0.5);
  CHECK(!radial::tail_limit_is_zero(tp));
}

TEST_CASE("profile CSV round trip") {
  const auto out = radial::shoot(0.0, 3.0, 5);
  REQUIRE(out.profile);
  const std::string path = "/tmp/bgf_test_profile.csv";
  radial::write_profile_csv(*out.profile, path);
  const auto back = radial::read_profile_csv(path);
  REQUIRE(back.size() == out.profile->size());
  for (std::size_t i = 0; i < back.size(); i += 97) {
    CHECK(back.grid[i] == out.profile->grid[i]);
    CHECK(back.u[i] == out.profile->u[i]);
    CHECK(back.dv[i] == out.profile->dv[i]);
  }
  std::filesystem::remove(path);
}
