#include "bigelfand/ball.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "bigelfand/fd.hpp"
#include "bigelfand/spectrum.hpp"
#include "json.hpp"

namespace bgf::ball {

namespace {

double surface_area(int dim) { return 2.0 * std::pow(M_PI, dim / 2.0) / std::tgamma(dim / 2.0); }

num::Trajectory<4> integrate_ball(double a, double beta, double lambda, int dim,
                                  const BallConfig& cfg) {
  const auto y0 = radial::series_start(a, beta, dim, cfg.r0, lambda);
  auto field = [dim, lambda](double r, const num::StateVec<4>& s) {
    return radial::radial_field(dim, r, s, lambda);
  };
  return num::integrate<4>(field, y0, cfg.r0, cfg.integ);
}

}  // namespace

std::pair<double, double> ball_residual(double a, double beta, double lambda, int dim,
                                        const BallConfig& cfg) {
  const auto tr = integrate_ball(a, beta, lambda, dim, cfg);
  if (tr.stop != num::StopReason::reached_r_max)
    return {1e30, 1e30};  // integration failure dominates any Newton step
  return {tr.y.back()[0], tr.y.back()[2]};
}

void zero_load_seed(int dim, double a, double& beta, double& lambda) {
  const double N = dim;
  const double c = 1.0 / (4 * N * N) - 1.0 / (8 * N * (N + 2));  // u1(0)
  lambda = a / c;
  beta = lambda / (2 * N);
}

BallSolveResult solve_ball(double a, int dim, double beta_guess, double lambda_guess,
                           const BallConfig& cfg) {
  if (a < 0) throw std::invalid_argument("solve_ball: a must be nonnegative");
  double x[2] = {beta_guess, lambda_guess};
  BallSolveResult res;
  double best = std::numeric_limits<double>::infinity();
  for (int it = 0; it < cfg.newton_max; ++it) {
    const auto [f1, f2] = ball_residual(a, x[0], x[1], dim, cfg);
    const double fn = std::hypot(f1, f2);
    best = std::min(best, fn);
    if (fn < cfg.newton_tol) {
      res.converged = true;
      res.point.a = a;
      res.point.beta = x[0];
      res.point.lambda = x[1];
      res.point.sup_norm = a;
      res.point.residual = fn;
      return res;
    }
    double J[2][2];
    for (int j = 0; j < 2; ++j) {
      const double dx = cfg.fd_step * std::max(1.0, std::abs(x[j]));
      double xp[2] = {x[0], x[1]};
      xp[j] += dx;
      const auto [g1, g2] = ball_residual(a, xp[0], xp[1], dim, cfg);
      J[0][j] = (g1 - f1) / dx;
      J[1][j] = (g2 - f2) / dx;
    }
    const double det = J[0][0] * J[1][1] - J[0][1] * J[1][0];
    if (det == 0.0) break;
    const double s0 = (J[1][1] * f1 - J[0][1] * f2) / det;
    const double s1 = (J[0][0] * f2 - J[1][0] * f1) / det;
    x[0] -= s0;
    x[1] -= s1;
    if (x[1] <= 0) x[1] = 1e-10;
    const double jn = std::max(std::abs(J[0][0]) + std::abs(J[0][1]),
                               std::abs(J[1][0]) + std::abs(J[1][1]));
    res.jacobian_condition = jn * jn / std::max(std::abs(det), 1e-300);
  }
  res.point.a = a;
  res.point.beta = x[0];
  res.point.lambda = x[1];
  res.point.sup_norm = a;
  res.point.residual = best;
  return res;
}

radial::RadialProfile ball_profile(const BranchPoint& pt, int dim, const BallConfig& cfg) {
  radial::ShootConfig sc;
  sc.r0 = cfg.r0;
  sc.lambda = pt.lambda;
  sc.integ = cfg.integ;
  sc.integ.blowup_component = -1;
  sc.nodes_linear = cfg.nodes_profile;
  auto out = radial::shoot(pt.a, pt.beta, dim, sc);
  if (!out.profile) throw std::runtime_error("ball_profile: integration failed");
  return *std::move(out.profile);
}

namespace {

struct Tangent {
  double a = 0, beta = 0, lambda = 0;
};

// null direction of the 2x3 boundary-residual Jacobian, normalized in the
// (a, lambda) metric, oriented along the previous tangent
Tangent branch_tangent(int dim, const BallConfig& cfg, const BranchPoint& p, const Tangent* prev) {
  double g1[3], g2[3];
  const double x[3] = {p.a, p.beta, p.lambda};
  const auto [f1, f2] = ball_residual(x[0], x[1], x[2], dim, cfg);
  for (int j = 0; j < 3; ++j) {
    const double dx = cfg.fd_step * std::max(1.0, std::abs(x[j]));
    double xp[3] = {x[0], x[1], x[2]};
    xp[j] += dx;
    const auto [h1, h2] = ball_residual(xp[0], xp[1], xp[2], dim, cfg);
    g1[j] = (h1 - f1) / dx;
    g2[j] = (h2 - f2) / dx;
  }
  Tangent t;
  t.a = g1[1] * g2[2] - g1[2] * g2[1];
  t.beta = g1[2] * g2[0] - g1[0] * g2[2];
  t.lambda = g1[0] * g2[1] - g1[1] * g2[0];
  double nrm = std::hypot(t.a, t.lambda);
  if (nrm == 0.0) nrm = std::sqrt(t.a * t.a + t.beta * t.beta + t.lambda * t.lambda);
  t.a /= nrm;
  t.beta /= nrm;
  t.lambda /= nrm;
  if (prev) {
    const double dot = t.a * prev->a + t.lambda * prev->lambda + t.beta * prev->beta;
    if (dot < 0) {
      t.a = -t.a;
      t.beta = -t.beta;
      t.lambda = -t.lambda;
    }
  } else if (t.a < 0) {
    t.a = -t.a;
    t.beta = -t.beta;
    t.lambda = -t.lambda;
  }
  return t;
}

// corrector: Newton on (F1, F2, t.(x - x_pred)) = 0
bool arclength_correct(int dim, const BallConfig& cfg, const Tangent& t, const double pred[3],
                       double x[3], double* resid) {
  for (int it = 0; it < cfg.newton_max; ++it) {
    const auto [f1, f2] = ball_residual(x[0], x[1], x[2], dim, cfg);
    const double f3 =
        t.a * (x[0] - pred[0]) + t.beta * (x[1] - pred[1]) + t.lambda * (x[2] - pred[2]);
    const double fn = std::sqrt(f1 * f1 + f2 * f2 + f3 * f3);
    if (fn < cfg.newton_tol) {
      *resid = std::hypot(f1, f2);
      return true;
    }
    double J[3][3];
    for (int j = 0; j < 3; ++j) {
      const double dx = cfg.fd_step * std::max(1.0, std::abs(x[j]));
      double xp[3] = {x[0], x[1], x[2]};
      xp[j] += dx;
      const auto [h1, h2] = ball_residual(xp[0], xp[1], xp[2], dim, cfg);
      J[0][j] = (h1 - f1) / dx;
      J[1][j] = (h2 - f2) / dx;
    }
    J[2][0] = t.a;
    J[2][1] = t.beta;
    J[2][2] = t.lambda;
    // solve 3x3 by Cramer
    const double F[3] = {f1, f2, f3};
    auto det3 = [](const double m[3][3]) {
      return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
             m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
             m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    };
    const double d = det3(J);
    if (d == 0.0 || !std::isfinite(d)) return false;
    double s[3];
    for (int j = 0; j < 3; ++j) {
      double Jc[3][3];
      std::copy(&J[0][0], &J[0][0] + 9, &Jc[0][0]);
      for (int i = 0; i < 3; ++i) Jc[i][j] = F[i];
      s[j] = det3(Jc) / d;
    }
    for (int j = 0; j < 3; ++j) x[j] -= s[j];
    if (x[2] <= 0) x[2] = 1e-10;
    if (x[0] < 0) x[0] = 1e-10;
  }
  return false;
}

}  // namespace

Branch continue_branch(int dim, double a_max, double ds, const BallConfig& cfg,
                       bool with_morse_index) {
  if (ds <= 0) throw std::invalid_argument("continue_branch: ds must be positive");
  Branch br;
  br.dim = dim;

  // seed two points near the zero-load limit
  double a0 = std::min(0.05, 0.2 * a_max);
  double beta, lambda;
  zero_load_seed(dim, a0, beta, lambda);
  auto s0 = solve_ball(a0, dim, beta, lambda, cfg);
  if (!s0.converged) throw std::runtime_error("continue_branch: seed solve failed");
  br.points.push_back(s0.point);

  Tangent t = branch_tangent(dim, cfg, s0.point, nullptr);
  double step = ds;
  double prev_tl = t.lambda;
  int stall = 0;

  while (br.points.back().a < a_max && br.points.size() < 20000) {
    const auto& last = br.points.back();
    double x[3] = {last.a + step * t.a, last.beta + step * t.beta, last.lambda + step * t.lambda};
    const double pred[3] = {x[0], x[1], x[2]};
    double resid = 0.0;
    if (!arclength_correct(dim, cfg, t, pred, x, &resid)) {
      step *= 0.5;
      if (step < 1e-6 * ds) throw std::runtime_error("continue_branch: continuation stall");
      ++stall;
      continue;
    }
    stall = 0;
    BranchPoint pt;
    pt.a = x[0];
    pt.beta = x[1];
    pt.lambda = x[2];
    pt.sup_norm = x[0];
    pt.residual = resid;
    br.points.push_back(pt);

    Tangent tn = branch_tangent(dim, cfg, pt, &t);
    if (tn.lambda * prev_tl < 0 && br.points.size() >= 2) {
      // fold between the last two points: bisection on the tangent's
      // lambda component along the secant parameter
      const BranchPoint p0 = br.points[br.points.size() - 2];
      const BranchPoint p1 = br.points.back();
      double lo = 0.0, hi = 1.0;
      BranchPoint fold = (std::abs(prev_tl) < std::abs(tn.lambda)) ? p0 : p1;
      for (int itf = 0; itf < 40; ++itf) {
        const double mid = 0.5 * (lo + hi);
        double xm[3] = {p0.a + mid * (p1.a - p0.a), p0.beta + mid * (p1.beta - p0.beta),
                        p0.lambda + mid * (p1.lambda - p0.lambda)};
        // project back to the branch with the secant direction as constraint
        Tangent sec;
        const double dn = std::hypot(p1.a - p0.a, p1.lambda - p0.lambda);
        sec.a = (p1.a - p0.a) / dn;
        sec.beta = (p1.beta - p0.beta) / dn;
        sec.lambda = (p1.lambda - p0.lambda) / dn;
        const double predm[3] = {xm[0], xm[1], xm[2]};
        double rm;
        if (!arclength_correct(dim, cfg, sec, predm, xm, &rm)) break;
        BranchPoint pm;
        pm.a = xm[0];
        pm.beta = xm[1];
        pm.lambda = xm[2];
        pm.sup_norm = xm[0];
        pm.residual = rm;
        const Tangent tm = branch_tangent(dim, cfg, pm, &t);
        if ((tm.lambda > 0) == (prev_tl > 0)) lo = mid;
        else hi = mid;
        fold = pm;
        if ((hi - lo) * std::abs(p1.lambda - p0.lambda) < 1e-7 * std::max(1.0, std::abs(fold.lambda)))
          break;
      }
      fold.is_fold = true;
      br.points.insert(br.points.end() - 1, fold);
      br.folds.push_back(br.points.size() - 2);
    }
    prev_tl = tn.lambda;
    t = tn;
    // agreeable step growth
    step = std::min(step * 1.3, ds);
  }

  br.lambda_star = 0.0;
  for (const auto& p : br.points) br.lambda_star = std::max(br.lambda_star, p.lambda);

  if (with_morse_index) {
    for (auto& p : br.points) {
      const auto prof = ball_profile(p, dim, cfg);
      p.morse_index = spectrum::morse_index_navier(prof, p.lambda, cfg.k_max_index).index;
    }
  }
  return br;
}

RegularityChainReport regularity_chain_audit(const BranchPoint& pt, int dim, double alpha,
                                             const BallConfig& cfg) {
  const auto roots = [] {
    double a = 2.5;
    for (int i = 0; i < 60; ++i) {
      const double f = a * a * a - 8 * a + 4;
      a -= f / (3 * a * a - 8);
    }
    return a;
  }();
  if (!(alpha > 0.5 && alpha < roots))
    throw std::invalid_argument("regularity_chain_audit: alpha outside (1/2, alpha*)");

  // rescale to unit coefficient: U(y) = u(y/mu) on the ball of radius
  // mu = lambda^{1/4}; V = v/sqrt(lambda)
  const double mu = std::pow(pt.lambda, 0.25);
  const auto prof = ball_profile(pt, dim, cfg);
  const double N = dim;
  const double omega = surface_area(dim);

  const std::size_t n = prof.size();
  std::vector<double> s(n), U(n), V(n);
  for (std::size_t i = 0; i < n; ++i) {
    s[i] = mu * prof.grid[i];
    U[i] = prof.u[i];
    V[i] = prof.v[i] / std::sqrt(pt.lambda);
  }
  const auto w = num::trapezoid_weights(s);
  auto integral = [&](auto&& f) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += w[i] * std::pow(s[i], N - 1) * f(U[i], V[i]);
    return omega * acc;
  };

  RegularityChainReport rep;
  rep.alpha = alpha;
  // (1): int e^{U/2} (e^{aU/2} - 1)^2 <= a/4 int (e^{aU} - 1) V
  rep.lhs1 = integral([&](double u, double) {
    const double t = std::exp(alpha * u / 2) - 1;
    return std::exp(u / 2) * t * t;
  });
  rep.rhs1 = alpha / 4 * integral([&](double u, double v) { return (std::exp(alpha * u) - 1) * v; });
  // (2): int e^{U/2} V^{2a} <= a^2/(2a-1) int e^U V^{2a-1}
  rep.lhs2 = integral([&](double u, double v) {
    return std::exp(u / 2) * std::pow(std::max(v, 0.0), 2 * alpha);
  });
  rep.rhs2 = alpha * alpha / (2 * alpha - 1) *
             integral([&](double u, double v) {
               return std::exp(u) * std::pow(std::max(v, 0.0), 2 * alpha - 1);
             });
  // (3): (1 - a^3/(8a-4)) (int e^{(2a+1)U/2})^{a/(2a+1)} <= 2 |Omega|^{a/(2a+1)}
  const double coef = 1.0 - alpha * alpha * alpha / (8 * alpha - 4);
  const double I = integral([&](double u, double) { return std::exp((2 * alpha + 1) * u / 2); });
  const double vol = omega / N * std::pow(mu, N);
  rep.lhs3 = coef * std::pow(I, alpha / (2 * alpha + 1));
  rep.rhs3 = 2.0 * std::pow(vol, alpha / (2 * alpha + 1));
  rep.holds1 = rep.lhs1 <= rep.rhs1;
  rep.holds2 = rep.lhs2 <= rep.rhs2;
  rep.holds3 = rep.lhs3 <= rep.rhs3;
  rep.slack_min = std::min({(rep.rhs1 - rep.lhs1) / std::max(rep.rhs1, 1e-300),
                            (rep.rhs2 - rep.lhs2) / std::max(rep.rhs2, 1e-300),
                            (rep.rhs3 - rep.lhs3) / std::max(rep.rhs3, 1e-300)});
  return rep;
}

double CutoffFunction::psi(double s) const {
  if (s < r) return a - b * s * s;
  return std::pow(s, 1.0 - dim / 2.0);
}

double CutoffFunction::dpsi(double s) const {
  if (s < r) return -2 * b * s;
  return (1.0 - dim / 2.0) * std::pow(s, -dim / 2.0);
}

double CutoffFunction::lap_psi(double s) const {
  if (s < r) return -2.0 * dim * b;
  const double e = 1.0 - dim / 2.0;
  return e * (e + dim - 2) * std::pow(s, e - 2);
}

namespace {
// quintic ramp: 1 on [0,1], 0 beyond 2, C^2 in between
double zeta(double t) {
  if (t <= 1) return 1.0;
  if (t >= 2) return 0.0;
  const double s = t - 1;
  return 1.0 - s * s * s * (10 - 15 * s + 6 * s * s);
}
double dzeta(double t) {
  if (t <= 1 || t >= 2) return 0.0;
  const double s = t - 1;
  return -s * s * (30 - 60 * s + 30 * s * s);
}
double ddzeta(double t) {
  if (t <= 1 || t >= 2) return 0.0;
  const double s = t - 1;
  return -s * (60 - 180 * s + 120 * s * s);
}
}  // namespace

double CutoffFunction::energy() const {
  // int |lap(psi zeta(|x|/R0))|^2 dx by composite quadrature over the three
  // regions; the inner two have closed-form integrands
  const double omega = surface_area(dim);
  const double N = dim;
  // region 1: |x| < r, lap = -2Nb
  const double e1 = omega * std::pow(2 * N * b, 2) * std::pow(r, N) / N;
  // region 2: r < |x| < R0 (zeta = 1 there)
  const double c = std::pow((N / 2.0 - 1), 2);
  // integrand c^2 s^{2(e-2)} s^{N-1} with e = 1 - N/2: exponent = -3
  const double e2 = omega * c * c * 0.5 * (1.0 / (r * r) - 1.0 / (R0 * R0));
  // region 3: R0 <= |x| <= 2R0, numerically
  double e3 = 0.0;
  const int nq = 2000;
  for (int i = 0; i < nq; ++i) {
    const double s = R0 + (i + 0.5) * R0 / nq;
    const double t = s / R0;
    const double lap_phi = lap_psi(s) * zeta(t) + 2 * dpsi(s) * dzeta(t) / R0 +
                           psi(s) * (ddzeta(t) / (R0 * R0) + (N - 1) / s * dzeta(t) / R0);
    e3 += lap_phi * lap_phi * std::pow(s, N - 1) * (R0 / nq);
  }
  e3 *= omega;
  return e1 + e2 + e3;
}

CutoffFunction capacitary_cutoff(double r, double R0, int dim) {
  if (!(r > 0 && r < R0)) throw std::invalid_argument("capacitary_cutoff: need 0 < r < R0");
  CutoffFunction f;
  f.r = r;
  f.R0 = R0;
  f.dim = dim;
  f.a = (dim + 2) / 4.0 * std::pow(r, 1.0 - dim / 2.0);
  f.b = (dim - 2) / 4.0 * std::pow(r, -1.0 - dim / 2.0);
  return f;
}

L1GrowthReport l1_growth_audit(const radial::RadialProfile& p, std::span<const double> radii,
                               bool annulus_mode) {
  const double N = p.dim;
  const double omega = surface_area(p.dim);
  const double rmax = p.grid.back();
  std::vector<double> vals;
  std::vector<double> rs;
  const auto w = num::trapezoid_weights(p.grid);
  for (double R : radii) {
    const double lo = annulus_mode ? R : 0.0;
    const double hi = annulus_mode ? 2 * R : R;
    if (hi > rmax * 1.0000001)
      throw std::invalid_argument("l1_growth_audit: radius exceeds profile range");
    double acc = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (p.grid[i] < lo || p.grid[i] > hi) continue;
      acc += w[i] * std::pow(p.grid[i], N - 1) * p.v[i];
    }
    vals.push_back(omega * acc);
    rs.push_back(R);
  }
  L1GrowthReport rep;
  rep.fit = num::fit_power_law(rs, vals);
  for (std::size_t i = 0; i < rs.size(); ++i)
    rep.sup_ratio = std::max(rep.sup_ratio, vals[i] / std::pow(rs[i], N - 2));
  return rep;
}

void write_branch_csv(const Branch& b, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("write_branch_csv: cannot open " + path);
  f << "a,lambda,beta,sup_norm,morse_index,is_fold\n";
  char buf[200];
  for (const auto& p : b.points) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%d,%d\n", p.a, p.lambda, p.beta,
                  p.sup_norm, p.morse_index, p.is_fold ? 1 : 0);
    f << buf;
  }
}

std::string branch_summary_json(const Branch& b) {
  nlohmann::json j;
  j["dim"] = b.dim;
  j["lambda_star"] = b.lambda_star;
  j["n_points"] = b.points.size();
  auto folds = nlohmann::json::array();
  for (auto i : b.folds)
    folds.push_back({{"index", i}, {"a", b.points[i].a}, {"lambda", b.points[i].lambda}});
  j["folds"] = folds;
  return j.dump(2);
}

}  // namespace bgf::ball
