// Test-only oracles, independent of the library's solver paths: fixed-step
// RK4 integration, Newton root refinement, dense Jacobi eigensolver, and
// plain quadrature. Expected values in the suites are frozen from these.
#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace oracle {

// classical fixed-step RK4 for the radial system (u, u', v, v');
// forcing lambda * e^u
struct Rk4Result {
  double r_end = 0.0;
  double u = 0.0, du = 0.0, v = 0.0, dv = 0.0;
  bool blew_up = false;
  double blowup_radius = 0.0;
};

inline Rk4Result rk4_radial(double a, double beta, int dim, double r_max, double h,
                            double lambda = 1.0, double blowup = 50.0) {
  const double N = dim;
  auto f = [&](double r, const double y[4], double dy[4]) {
    dy[0] = y[1];
    dy[1] = -y[2] - (N - 1) * y[1] / r;
    dy[2] = y[3];
    dy[3] = -lambda * std::exp(std::min(y[0], 700.0)) - (N - 1) * y[3] / r;
  };
  double r = 1e-3;
  const double ea = lambda * std::exp(a);
  double y[4] = {a - beta * r * r / (2 * N), -beta * r / N, beta - ea * r * r / (2 * N),
                 -ea * r / N};
  double k1[4], k2[4], k3[4], k4[4], yt[4];
  Rk4Result res;
  while (r < r_max) {
    const double hh = std::min(h, r_max - r);
    f(r, y, k1);
    for (int i = 0; i < 4; ++i) yt[i] = y[i] + 0.5 * hh * k1[i];
    f(r + 0.5 * hh, yt, k2);
    for (int i = 0; i < 4; ++i) yt[i] = y[i] + 0.5 * hh * k2[i];
    f(r + 0.5 * hh, yt, k3);
    for (int i = 0; i < 4; ++i) yt[i] = y[i] + hh * k3[i];
    f(r + hh, yt, k4);
    for (int i = 0; i < 4; ++i) y[i] += hh / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
    r += hh;
    if (y[0] > blowup) {
      res.blew_up = true;
      res.blowup_radius = r;
      break;
    }
  }
  res.r_end = r;
  res.u = y[0];
  res.du = y[1];
  res.v = y[2];
  res.dv = y[3];
  return res;
}

// bisection for beta0 against the fixed-step oracle: global means the shot
// reaches r_max decaying
inline double rk4_beta0(int dim, double tol, double r_max = 50.0, double h = 2e-4) {
  auto global = [&](double beta) {
    const auto r = rk4_radial(0.0, beta, dim, r_max, h);
    return !r.blew_up && r.u < -1 && r.du < 0;
  };
  double lo = 1e-3, hi = 4.0;
  if (global(lo) || !global(hi)) throw std::runtime_error("rk4_beta0: bad initial bracket");
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (global(mid) ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

inline double newton_root(std::function<double(double)> f, std::function<double(double)> df,
                          double x0, int iters = 60) {
  double x = x0;
  for (int i = 0; i < iters; ++i) x -= f(x) / df(x);
  return x;
}

// cyclic Jacobi eigensolver for small dense symmetric matrices; returns the
// eigenvalues in ascending order
inline std::vector<double> jacobi_eigenvalues(std::vector<std::vector<double>> a) {
  const std::size_t n = a.size();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += a[i][j] * a[i][j];
    if (off < 1e-24) break;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(a[p][q]) < 1e-300) continue;
        const double theta = (a[q][q] - a[p][p]) / (2 * a[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1));
        const double c = 1 / std::sqrt(t * t + 1), s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
      }
  }
  std::vector<double> ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = a[i][i];
  std::sort(ev.begin(), ev.end());
  return ev;
}

}  // namespace oracle
