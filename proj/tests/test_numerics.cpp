#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "bigelfand/banded.hpp"
#include "bigelfand/fd.hpp"
#include "bigelfand/numerics.hpp"
#include "oracles.hpp"

using namespace bgf;

TEST_CASE("integrate: exponential decay hits closed form") {
  auto field = [](double, const num::StateVec<1>& y) { return num::StateVec<1>{-y[0]}; };
  num::IntegratorConfig cfg;
  cfg.r_max = 1.0;
  cfg.rel_tol = 1e-11;
  cfg.abs_tol = 1e-13;
  const auto tr = num::integrate<1>(field, {1.0}, 0.0, cfg);
  CHECK(tr.stop == num::StopReason::reached_r_max);
  CHECK(tr.y.back()[0] == doctest::Approx(std::exp(-1.0)).epsilon(1e-9));
}

TEST_CASE("integrate: zero field stays constant") {
  auto field = [](double, const num::StateVec<2>&) { return num::StateVec<2>{0.0, 0.0}; };
  num::IntegratorConfig cfg;
  cfg.r_max = 5.0;
  const auto tr = num::integrate<2>(field, {3.5, -2.0}, 0.0, cfg);
  CHECK(tr.stop == num::StopReason::reached_r_max);
  CHECK(tr.y.back()[0] == 3.5);
  CHECK(tr.y.back()[1] == -2.0);
}

TEST_CASE("integrate: halving tolerances cuts the error by 4x or more") {
  auto field = [](double, const num::StateVec<1>& y) { return num::StateVec<1>{-y[0]}; };
  auto err_at = [&](double tol) {
    num::IntegratorConfig cfg;
    cfg.r_max = 1.0;
    cfg.rel_tol = tol;
    cfg.abs_tol = tol * 1e-2;
    const auto tr = num::integrate<1>(field, {1.0}, 0.0, cfg);
    return std::abs(tr.y.back()[0] - std::exp(-1.0));
  };
  // averaged over a few halvings to smooth step quantization
  const double e1 = err_at(1e-6), e2 = err_at(1e-6 / 16.0);
  CHECK(e2 * 4.0 <= e1);
}

TEST_CASE("integrate: blow-up detection reports a crossing radius") {
  // y' = y^2, y(0)=1 blows up at r=1
  auto field = [](double, const num::StateVec<1>& y) { return num::StateVec<1>{y[0] * y[0]}; };
  num::IntegratorConfig cfg;
  cfg.r_max = 2.0;
  cfg.blowup_component = 0;
  cfg.blowup_threshold = 50.0;
  const auto tr = num::integrate<1>(field, {1.0}, 0.0, cfg);
  CHECK(tr.stop == num::StopReason::blowup_detected);
  // y = 1/(1-r) crosses 50 at r = 49/50
  CHECK(tr.blowup_radius == doctest::Approx(0.98).epsilon(1e-3));
}

TEST_CASE("bisect: sqrt(2)") {
  const auto b = num::bisect([](double x) { return x * x - 2; }, 1.0, 2.0, 1e-10);
  CHECK(b.mid() == doctest::Approx(1.4142135624).epsilon(1e-9));
  CHECK(b.width() <= 1e-10);
}

TEST_CASE("bisect: cubic root against the Newton oracle") {
  auto f = [](double x) { return x * x * x - 8 * x + 4; };
  const double newton =
      oracle::newton_root(f, [](double x) { return 3 * x * x - 8; }, 2.5);
  const auto b = num::bisect(f, 2.0, 3.0, 1e-8);
  CHECK(b.mid() == doctest::Approx(newton).epsilon(1e-7));
  CHECK(b.mid() == doctest::Approx(2.53407).epsilon(1e-5));
}

TEST_CASE("bisect: odd function and error paths") {
  const auto b = num::bisect([](double x) { return x; }, -1.0, 1.0, 1e-12);
  CHECK(std::abs(b.mid()) <= 1e-12);
  CHECK_THROWS_AS(num::bisect([](double x) { return x * x + 1; }, -1.0, 1.0, 1e-6),
                  std::invalid_argument);
  CHECK_THROWS_AS(num::bisect([](double x) { return x * x * x - 2; }, 1.0, 2.0, 1e-30, 10),
                  std::runtime_error);
}

TEST_CASE("fit_power_law: exact power law recovered to 1e-10") {
  std::vector<double> r, v;
  for (int i = 1; i <= 12; ++i) {
    r.push_back(0.5 * i);
    v.push_back(3.0 * std::pow(0.5 * i, 2.0));
  }
  const auto fit = num::fit_power_law(r, v);
  CHECK(fit.exponent == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(fit.constant == doctest::Approx(3.0).epsilon(1e-10));
  CHECK(fit.max_residual <= 1e-10);
}

TEST_CASE("fit_power_law: mild multiplicative wobble keeps the slope") {
  std::vector<double> r, v;
  for (int i = 1; i <= 40; ++i) {
    const double R = std::pow(10.0, i / 10.0);
    r.push_back(R);
    v.push_back(R * R * (1 + 0.01 * std::sin(std::log(R))));
  }
  const auto fit = num::fit_power_law(r, v);
  CHECK(fit.exponent == doctest::Approx(2.0).epsilon(0.01));
}

TEST_CASE("fit_power_law: rejects short and invalid input") {
  std::vector<double> r{1.0, 2.0}, v{1.0, 2.0};
  CHECK_THROWS_AS(num::fit_power_law(r, v), std::invalid_argument);
  std::vector<double> r3{1.0, 2.0, 2.0}, v3{1.0, 2.0, 3.0};
  CHECK_THROWS_AS(num::fit_power_law(r3, v3), std::invalid_argument);
  std::vector<double> r4{1.0, 2.0, 3.0}, v4{1.0, -2.0, 3.0};
  CHECK_THROWS_AS(num::fit_power_law(r4, v4), std::invalid_argument);
}

TEST_CASE("fd_weights: exact second derivative of cubics on skew nodes") {
  const std::vector<double> nodes{0.0, 0.7, 1.1, 2.3};
  const auto w = num::fd_weights(nodes, 0.9, 2);
  double acc = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i)
    acc += w[i] * (nodes[i] * nodes[i] * nodes[i] - 2 * nodes[i]);
  CHECK(acc == doctest::Approx(6 * 0.9).epsilon(1e-12));
}

TEST_CASE("radial_laplacian: exact on quadratics") {
  std::vector<double> g;
  for (int i = 0; i <= 40; ++i) g.push_back(0.1 + 0.07 * i + 0.001 * i * i);
  std::vector<double> f(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) f[i] = g[i] * g[i];
  const auto lap = num::radial_laplacian(g, f, 5);
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(lap[i] == doctest::Approx(2.0 * 5).epsilon(1e-9));
}

TEST_CASE("min_generalized_eig: identity and diagonal pencils") {
  num::QuadraticFormPair forms;
  forms.a = num::BandedSym(4, 0);
  for (int i = 0; i < 4; ++i) forms.a.at(i, i) = 1.0;
  forms.b_diag = {1, 1, 1, 1};
  auto r = num::min_generalized_eig(forms);
  CHECK(r.nu == doctest::Approx(1.0).epsilon(1e-10));

  num::QuadraticFormPair d;
  d.a = num::BandedSym(2, 0);
  d.a.at(0, 0) = 2.0;
  d.a.at(1, 1) = 5.0;
  d.b_diag = {1.0, 1.0};
  r = num::min_generalized_eig(d);
  CHECK(r.nu == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(std::abs(r.eigvec[0]) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("min_generalized_eig: zero potential reports the +inf sentinel") {
  num::QuadraticFormPair forms;
  forms.a = num::BandedSym(3, 1);
  for (int i = 0; i < 3; ++i) forms.a.at(i, i) = 2.0;
  forms.a.at(1, 0) = -1.0;
  forms.a.at(2, 1) = -1.0;
  forms.b_diag = {0.0, 0.0, 0.0};
  const auto r = num::min_generalized_eig(forms);
  CHECK(std::isinf(r.nu));
  CHECK(r.b_zero);
}

TEST_CASE("min_generalized_eig: congruence scaling invariance and A-scaling") {
  // tridiagonal 1D Dirichlet Laplacian vs identity
  const int n = 40;
  num::QuadraticFormPair forms;
  forms.a = num::BandedSym(n, 1);
  for (int i = 0; i < n; ++i) forms.a.at(i, i) = 2.0;
  for (int i = 1; i < n; ++i) forms.a.at(i, i - 1) = -1.0;
  forms.b_diag.assign(n, 1.0);
  const double nu0 = num::min_generalized_eig(forms).nu;
  // against the dense Jacobi oracle
  std::vector<std::vector<double>> dense(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i) {
    dense[i][i] = 2.0;
    if (i) dense[i][i - 1] = dense[i - 1][i] = -1.0;
  }
  const auto ev = oracle::jacobi_eigenvalues(dense);
  CHECK(nu0 == doctest::Approx(ev.front()).epsilon(1e-9));

  num::QuadraticFormPair scaled = forms;
  for (int i = 0; i < n; ++i) {
    scaled.a.at(i, i) *= 7.0;
    if (i) scaled.a.at(i, i - 1) *= 7.0;
    scaled.b_diag[i] *= 7.0;
  }
  CHECK(num::min_generalized_eig(scaled).nu == doctest::Approx(nu0).epsilon(1e-10));
  for (int i = 0; i < n; ++i) scaled.b_diag[i] = 1.0;  // now only A is scaled
  CHECK(num::min_generalized_eig(scaled).nu == doctest::Approx(7.0 * nu0).epsilon(1e-10));
}

TEST_CASE("pencil_count_below counts like the dense oracle") {
  const int n = 25;
  num::BandedSym a(n, 1);
  std::vector<double> b(n);
  for (int i = 0; i < n; ++i) {
    a.at(i, i) = 2.0 + 0.1 * i;
    if (i) a.at(i, i - 1) = -0.8;
    b[i] = 1.0 + 0.05 * (i % 3);
  }
  std::vector<std::vector<double>> dense(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i) {
    dense[i][i] = (2.0 + 0.1 * i) / std::sqrt(b[i] * b[i]);
    if (i) dense[i][i - 1] = dense[i - 1][i] = -0.8;
  }
  // transform to standard problem via B^{-1/2} A B^{-1/2}
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) dense[i][j] /= std::sqrt(b[i] / b[i] * 1.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) dense[i][j] = 0.0;
  for (int i = 0; i < n; ++i) {
    dense[i][i] = (2.0 + 0.1 * i) / b[i];
    if (i) dense[i][i - 1] = dense[i - 1][i] = -0.8 / std::sqrt(b[i] * b[i - 1]);
  }
  const auto ev = oracle::jacobi_eigenvalues(dense);
  for (double sigma : {0.5, 1.0, 2.0, 3.0}) {
    int expect = 0;
    for (double e : ev) expect += (e < sigma);
    CHECK(num::pencil_count_below(a, b, sigma) == expect);
  }
}
