#include "bigelfand/radial.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace bgf::radial {

namespace {

// resample trajectory data (value + derivative known at accepted nodes) onto
// a target grid by cubic Hermite interpolation
double resample_one(const num::Trajectory<4>& tr, int comp, int dcomp, int dim, double lambda,
                    double r, std::size_t& hint) {
  const auto& rs = tr.r;
  while (hint + 2 < rs.size() && rs[hint + 1] < r) ++hint;
  const std::size_t i = hint;
  const auto state_d = [&](std::size_t k) {
    // derivative of component comp at node k
    if (dcomp >= 0) return tr.y[k][dcomp];
    // comp is du (1) or dv (3): derivative comes from the field
    const auto f = radial_field(dim, rs[k], tr.y[k], lambda);
    return f[comp];
  };
  return num::hermite(rs[i], tr.y[i][comp], state_d(i), rs[i + 1], tr.y[i + 1][comp], state_d(i + 1), r);
}

std::vector<double> build_output_grid(double r0, double r_end, int nodes_linear, int nodes_per_decade) {
  std::vector<double> g;
  const double split = std::min(1.0, r_end);
  const int nl = std::max(8, nodes_linear);
  for (int i = 0; i < nl; ++i) g.push_back(r0 + (split - r0) * i / static_cast<double>(nl));
  if (r_end > 1.0) {
    const double decades = std::log10(r_end);
    const int ng = std::max(4, static_cast<int>(decades * nodes_per_decade));
    for (int i = 0; i <= ng; ++i) g.push_back(std::pow(10.0, decades * i / static_cast<double>(ng)));
  } else {
    g.push_back(split);
  }
  return g;
}

}  // namespace

std::size_t RadialProfile::locate(double r) const {
  auto it = std::upper_bound(grid.begin(), grid.end(), r);
  if (it == grid.begin()) return 0;
  std::size_t i = static_cast<std::size_t>(it - grid.begin()) - 1;
  return std::min(i, grid.size() - 2);
}

double RadialProfile::interp_u(double r) const {
  const std::size_t i = locate(r);
  return num::hermite(grid[i], u[i], du[i], grid[i + 1], u[i + 1], du[i + 1], r);
}

double RadialProfile::interp_v(double r) const {
  const std::size_t i = locate(r);
  return num::hermite(grid[i], v[i], dv[i], grid[i + 1], v[i + 1], dv[i + 1], r);
}

num::StateVec<4> radial_field(int dim, double r, const num::StateVec<4>& s, double lambda) {
  if (r <= 0) throw std::invalid_argument("radial_field: r must be positive (use series_start at 0)");
  const double eu = lambda * std::exp(std::min(s[0], 700.0));
  return {s[1], -s[2] - (dim - 1) * s[1] / r, s[3], -eu - (dim - 1) * s[3] / r};
}

num::StateVec<4> series_start(double a, double beta, int dim, double r0, double lambda) {
  if (r0 <= 0) throw std::invalid_argument("series_start: r0 must be positive");
  const double N = dim;
  const double ea = lambda * std::exp(a);
  const double r2 = r0 * r0, r3 = r2 * r0, r4 = r2 * r2;
  return {a - beta * r2 / (2 * N) + ea * r4 / (8 * N * (N + 2)),
          -beta * r0 / N + ea * r3 / (2 * N * (N + 2)),
          beta - ea * r2 / (2 * N) + ea * beta * r4 / (8 * N * (N + 2)),
          -ea * r0 / N + ea * beta * r3 / (2 * N * (N + 2))};
}

ShootOutcome shoot(double a, double beta, int dim, const ShootConfig& cfg) {
  if (dim < 1) throw std::invalid_argument("shoot: dim must be >= 1");
  const auto y0 = series_start(a, beta, dim, cfg.r0, cfg.lambda);
  const double lambda = cfg.lambda;
  auto field = [dim, lambda](double r, const num::StateVec<4>& s) {
    return radial_field(dim, r, s, lambda);
  };
  const auto tr = num::integrate<4>(field, y0, cfg.r0, cfg.integ);

  ShootOutcome out;
  out.stop = tr.stop;
  out.u_end = tr.y.back()[0];
  out.du_end = tr.y.back()[1];

  if (tr.stop == num::StopReason::blowup_detected) {
    out.kind = ShootKind::blowup;
    out.blowup_radius = tr.blowup_radius;
    return out;
  }
  if (tr.stop == num::StopReason::step_underflow) {
    // a singularity the threshold test did not catch: blow-up only if u was
    // still climbing at failure
    out.kind = (out.du_end > 0) ? ShootKind::blowup : ShootKind::undetermined;
    out.blowup_radius = tr.r.back();
    if (out.kind == ShootKind::blowup) return out;
  } else {
    out.kind = (out.u_end < -1.0 && out.du_end < 0.0) ? ShootKind::global : ShootKind::undetermined;
  }

  RadialProfile p;
  p.dim = dim;
  p.a = a;
  p.beta = beta;
  p.grid = build_output_grid(cfg.r0, tr.r.back(), cfg.nodes_linear, cfg.nodes_per_decade);
  p.u.resize(p.grid.size());
  p.du.resize(p.grid.size());
  p.v.resize(p.grid.size());
  p.dv.resize(p.grid.size());
  std::size_t h0 = 0, h1 = 0, h2 = 0, h3 = 0;
  for (std::size_t i = 0; i < p.grid.size(); ++i) {
    const double r = std::min(p.grid[i], tr.r.back());
    p.grid[i] = r;
    p.u[i] = resample_one(tr, 0, 1, dim, lambda, r, h0);
    p.du[i] = resample_one(tr, 1, -1, dim, lambda, r, h1);
    p.v[i] = resample_one(tr, 2, 3, dim, lambda, r, h2);
    p.dv[i] = resample_one(tr, 3, -1, dim, lambda, r, h3);
  }
  out.profile = std::move(p);
  return out;
}

num::Bracket find_beta0(int dim, double tol, const ShootConfig& cfg) {
  if (dim < 5) throw std::invalid_argument("find_beta0: dim must be >= 5");
  auto is_global = [&](double beta) {
    ShootConfig c = cfg;
    auto out = shoot(0.0, beta, dim, c);
    if (out.kind == ShootKind::undetermined) {
      // retry with tighter tolerances before accepting the tie-break
      c.integ.rel_tol *= 1e-2;
      c.integ.abs_tol *= 1e-2;
      out = shoot(0.0, beta, dim, c);
    }
    return out.kind == ShootKind::global;
  };
  double lo = 1e-3, hi = 4.0;
  if (is_global(lo)) throw std::runtime_error("find_beta0: lower endpoint already global");
  int guard = 0;
  while (!is_global(hi)) {
    hi *= 2.0;
    if (++guard > 8) throw std::runtime_error("find_beta0: no global outcome found");
  }
  return num::bisect_predicate(is_global, lo, hi, tol);
}

RadialProfile scale_profile(const RadialProfile& p, double lam) {
  if (lam <= 0) throw std::invalid_argument("scale_profile: lam must be positive");
  RadialProfile q;
  q.dim = p.dim;
  q.a = p.a + 4 * std::log(lam);
  q.beta = lam * lam * p.beta;
  const std::size_t n = p.size();
  q.grid.resize(n);
  q.u.resize(n);
  q.du.resize(n);
  q.v.resize(n);
  q.dv.resize(n);
  const double l2 = lam * lam, l3 = l2 * lam;
  for (std::size_t i = 0; i < n; ++i) {
    q.grid[i] = p.grid[i] / lam;
    q.u[i] = p.u[i] + 4 * std::log(lam);
    q.du[i] = lam * p.du[i];
    q.v[i] = l2 * p.v[i];
    q.dv[i] = l3 * p.dv[i];
  }
  return q;
}

RadialProfile singular_profile(int dim, std::vector<double> grid) {
  if (dim <= 4) throw std::invalid_argument("singular_profile: dim must be >= 5");
  if (grid.empty() || grid.front() <= 0)
    throw std::invalid_argument("singular_profile: grid must exclude 0");
  const double N = dim;
  const double K = 8 * (N - 2) * (N - 4);
  RadialProfile p;
  p.dim = dim;
  p.a = std::numeric_limits<double>::infinity();
  p.beta = std::numeric_limits<double>::infinity();
  p.grid = std::move(grid);
  const std::size_t n = p.grid.size();
  p.u.resize(n);
  p.du.resize(n);
  p.v.resize(n);
  p.dv.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = p.grid[i];
    p.u[i] = -4 * std::log(r) + std::log(K);
    p.du[i] = -4 / r;
    p.v[i] = 4 * (N - 2) / (r * r);
    p.dv[i] = -8 * (N - 2) / (r * r * r);
  }
  return p;
}

TailLimit vbar_limit(const RadialProfile& p) {
  if (p.size() < 8) throw std::invalid_argument("vbar_limit: profile too short");
  const double R = p.grid.back();
  const double x0 = p.interp_v(R / 4), x1 = p.interp_v(R / 2), x2 = p.interp_v(R);
  const double d1 = x2 - x1, d0 = x1 - x0;
  TailLimit t;
  if (std::abs(d1 - d0) < 1e-300) {
    t.estimate = x2;
    t.uncertainty = std::abs(d1);
    return t;
  }
  t.estimate = x2 - d1 * d1 / (d1 - d0);
  t.uncertainty = std::abs(x2 - t.estimate);
  return t;
}

bool tail_limit_is_zero(const TailLimit& t) {
  return std::abs(t.estimate) <= 5.0 * t.uncertainty + 1e-12;
}

void write_profile_csv(const RadialProfile& p, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("write_profile_csv: cannot open " + path);
  f << "r,u,du,v,dv\n";
  char buf[160];
  for (std::size_t i = 0; i < p.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", p.grid[i], p.u[i], p.du[i],
                  p.v[i], p.dv[i]);
    f << buf;
  }
}

RadialProfile read_profile_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("read_profile_csv: cannot open " + path);
  std::string line;
  std::getline(f, line);  // header
  RadialProfile p;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    double vals[5];
    char comma;
    for (int k = 0; k < 5; ++k) {
      ss >> vals[k];
      if (k < 4) ss >> comma;
    }
    p.grid.push_back(vals[0]);
    p.u.push_back(vals[1]);
    p.du.push_back(vals[2]);
    p.v.push_back(vals[3]);
    p.dv.push_back(vals[4]);
  }
  return p;
}

}  // namespace bgf::radial
