// Shared numerical kernels: adaptive ODE integration, bracketed root
// finding, and log-log power-law fitting.
#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace bgf::num {

enum class StopReason { reached_r_max, blowup_detected, step_underflow };

struct IntegratorConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double h_init = 1e-4;
  double h_min = 1e-14;
  double h_max = std::numeric_limits<double>::infinity();
  double r_max = 50.0;
  double blowup_threshold = 50.0;
  // index of the state component watched for blow-up, or -1 to disable
  int blowup_component = -1;

  void validate() const {
    if (rel_tol <= 0 || abs_tol <= 0) throw std::invalid_argument("integrate: tolerances must be positive");
    if (h_min > h_init) throw std::invalid_argument("integrate: h_min must not exceed h_init");
    if (r_max <= 0) throw std::invalid_argument("integrate: r_max must be positive");
    if (blowup_threshold <= 0) throw std::invalid_argument("integrate: blowup_threshold must be positive");
  }
};

template <std::size_t M>
using StateVec = std::array<double, M>;

template <std::size_t M>
struct Trajectory {
  std::vector<double> r;
  std::vector<StateVec<M>> y;
  StopReason stop = StopReason::reached_r_max;
  double blowup_radius = 0.0;  // set when stop == blowup_detected
  std::size_t n_accepted = 0;
  std::size_t n_rejected = 0;
};

// Dormand-Prince 5(4) with FSAL and PI step-size control. The trajectory
// holds every accepted node; local error per step is kept within
// rel_tol*|y| + abs_tol componentwise.
template <std::size_t M, class Field>
Trajectory<M> integrate(Field&& field, StateVec<M> y0, double r0, const IntegratorConfig& cfg) {
  cfg.validate();
  if (r0 < 0) throw std::invalid_argument("integrate: r0 must be nonnegative");
  for (double c : y0)
    if (!std::isfinite(c)) throw std::invalid_argument("integrate: nonfinite initial state");

  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                          e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  Trajectory<M> out;
  double r = r0;
  StateVec<M> y = y0;
  StateVec<M> k1 = field(r, y);
  out.r.push_back(r);
  out.y.push_back(y);

  double h = std::min(cfg.h_init, std::min(cfg.h_max, cfg.r_max - r0));
  double err_prev = 1e-4;
  StateVec<M> k2, k3, k4, k5, k6, k7, yt, ynew;

  auto stage = [&](double rr, const StateVec<M>& yy) { return field(rr, yy); };

  while (r < cfg.r_max) {
    h = std::min(h, cfg.r_max - r);
    if (h < cfg.h_min) {
      out.stop = StopReason::step_underflow;
      return out;
    }
    for (std::size_t i = 0; i < M; ++i) yt[i] = y[i] + h * a21 * k1[i];
    k2 = stage(r + c2 * h, yt);
    for (std::size_t i = 0; i < M; ++i) yt[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    k3 = stage(r + c3 * h, yt);
    for (std::size_t i = 0; i < M; ++i) yt[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    k4 = stage(r + c4 * h, yt);
    for (std::size_t i = 0; i < M; ++i)
      yt[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    k5 = stage(r + c5 * h, yt);
    for (std::size_t i = 0; i < M; ++i)
      yt[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    k6 = stage(r + h, yt);
    for (std::size_t i = 0; i < M; ++i)
      ynew[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
    k7 = stage(r + h, ynew);

    double err = 0.0;
    bool finite = true;
    for (std::size_t i = 0; i < M; ++i) {
      if (!std::isfinite(ynew[i])) { finite = false; break; }
      const double le = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      const double sc = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      err += (le / sc) * (le / sc);
    }
    err = finite ? std::sqrt(err / M) : std::numeric_limits<double>::infinity();

    if (err <= 1.0) {
      r += h;
      const StateVec<M> yprev = y;
      y = ynew;
      out.r.push_back(r);
      out.y.push_back(y);
      ++out.n_accepted;
      if (cfg.blowup_component >= 0 && y[cfg.blowup_component] > cfg.blowup_threshold) {
        out.stop = StopReason::blowup_detected;
        // refine the crossing radius inside the step by bisection on the
        // Hermite interpolant of the watched component
        const int ic = cfg.blowup_component;
        const double u0 = yprev[ic], u1 = y[ic], d0 = k1[ic], d1 = k7[ic];
        double lo = 0.0, hi = 1.0;
        for (int it = 0; it < 60; ++it) {
          const double t = 0.5 * (lo + hi);
          const double h00 = (1 + 2 * t) * (1 - t) * (1 - t), h10 = t * (1 - t) * (1 - t);
          const double h01 = t * t * (3 - 2 * t), h11 = t * t * (t - 1);
          const double ut = h00 * u0 + h10 * h * d0 + h01 * u1 + h11 * h * d1;
          (ut > cfg.blowup_threshold ? hi : lo) = t;
        }
        out.blowup_radius = (r - h) + 0.5 * (lo + hi) * h;
        return out;
      }
      k1 = k7;  // FSAL
      const double fac = 0.9 * std::pow(err > 0 ? err : 1e-16, -0.2) * std::pow(err_prev, 0.08);
      h *= std::clamp(fac, 0.2, 6.0);
      h = std::min(h, cfg.h_max);
      err_prev = std::max(err, 1e-16);
    } else {
      ++out.n_rejected;
      if (finite) {
        h *= std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.9);
      } else {
        h *= 0.25;
      }
    }
  }
  out.stop = StopReason::reached_r_max;
  return out;
}

// Cubic Hermite evaluation of (value, derivative) data on [x0, x1].
inline double hermite(double x0, double f0, double d0, double x1, double f1, double d1, double x) {
  const double h = x1 - x0, t = (x - x0) / h;
  const double h00 = (1 + 2 * t) * (1 - t) * (1 - t), h10 = t * (1 - t) * (1 - t);
  const double h01 = t * t * (3 - 2 * t), h11 = t * t * (t - 1);
  return h00 * f0 + h10 * h * d0 + h01 * f1 + h11 * h * d1;
}

struct Bracket {
  double lo = 0.0;
  double hi = 0.0;
  int iterations = 0;
  double mid() const { return 0.5 * (lo + hi); }
  double width() const { return hi - lo; }
};

// Bisection on a scalar function with a sign change on [lo, hi].
template <class F>
Bracket bisect(F&& f, double lo, double hi, double tol, int max_iter = 200) {
  if (!(lo < hi)) throw std::invalid_argument("bisect: need lo < hi");
  double flo = f(lo), fhi = f(hi);
  if (flo == 0.0) return {lo, lo, 0};
  if (fhi == 0.0) return {hi, hi, 0};
  if ((flo > 0) == (fhi > 0)) throw std::invalid_argument("bisect: no sign change at endpoints");
  Bracket b{lo, hi, 0};
  while (b.width() > tol) {
    if (b.iterations++ >= max_iter) throw std::runtime_error("bisect: max_iter exhausted");
    const double mid = b.mid();
    const double fm = f(mid);
    if (fm == 0.0) return {mid, mid, b.iterations};
    if ((fm > 0) == (fhi > 0)) { b.hi = mid; fhi = fm; }
    else { b.lo = mid; flo = fm; }
  }
  return b;
}

// Monotone-predicate variant: pred must differ at the endpoints; returns the
// bracket across which the predicate flips.
template <class P>
Bracket bisect_predicate(P&& pred, double lo, double hi, double tol, int max_iter = 200) {
  if (!(lo < hi)) throw std::invalid_argument("bisect: need lo < hi");
  const bool plo = pred(lo), phi = pred(hi);
  if (plo == phi) throw std::invalid_argument("bisect: predicate equal at endpoints");
  Bracket b{lo, hi, 0};
  while (b.width() > tol) {
    if (b.iterations++ >= max_iter) throw std::runtime_error("bisect: max_iter exhausted");
    const double mid = b.mid();
    if (pred(mid) == phi) b.hi = mid;
    else b.lo = mid;
  }
  return b;
}

struct PowerFit {
  double constant = 0.0;   // C in C * R^e
  double exponent = 0.0;
  double max_residual = 0.0;  // max |log(value) - log(fit)|
  std::size_t n_points = 0;
};

PowerFit fit_power_law(std::span<const double> radii, std::span<const double> values);

}  // namespace bgf::num
