#include "bigelfand/nonradial.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "json.hpp"

namespace bgf::nonradial {

void AnisotropicQuadratic::validate(int dim) const {
  if (static_cast<int>(alphas.size()) != dim)
    throw std::invalid_argument("AnisotropicQuadratic: coefficient count must equal dim");
  for (double a : alphas)
    if (!(a > 1.0 + dim / 2.0))
      throw std::invalid_argument("AnisotropicQuadratic: every alpha_i must exceed 1 + N/2");
  for (double c : center)
    if (c != 0.0) throw std::invalid_argument("grid path requires x0 = 0");
}

Supersolution supersolution_pair(std::span<const double> x, int dim) {
  if (dim < 5) throw std::invalid_argument("supersolution_pair: dim must be >= 5");
  double r2 = 0.0;
  for (double c : x) r2 += c * c;
  const double N = dim, s = 1.0 + r2;
  Supersolution out;
  out.Z = std::pow(s, 2.0 - N / 2.0);
  out.W = std::pow(s, 1.0 - N / 2.0);
  out.neg_lap_W = N * (N - 2) * std::pow(s, -1.0 - N / 2.0);
  out.neg_lap_Z = (N - 4) * (N + 2 * r2) * std::pow(s, -N / 2.0);
  return out;
}

namespace {

double surface_area(int dim) { return 2.0 * std::pow(M_PI, dim / 2.0) / std::tgamma(dim / 2.0); }

// nodal fields of the quadratic, the supersolutions, and the matched
// boundary data, in flat axis-major order
struct GridFields {
  std::vector<double> p, Z, W, gz, gw, r2;
};

GridFields build_fields(const AnisotropicQuadratic& q, const kernels::Box& box) {
  const std::int64_t total = box.total();
  GridFields f;
  f.p.resize(total);
  f.Z.resize(total);
  f.W.resize(total);
  f.gz.resize(total);
  f.gw.resize(total);
  f.r2.resize(total);
  const int dim = box.dim;
  const double N = dim;
  const double h = box.h();

  double mass = 1.0;
  for (double a : q.alphas) mass *= std::sqrt(M_PI / a);
  const double cw = mass / ((N - 2) * surface_area(dim));
  const double cz = cw / (2 * (N - 4));

  int c[16];
  std::vector<double> x(dim);
  for (std::int64_t i = 0; i < total; ++i) {
    box.coords(i, c);
    double r2 = 0.0, pv = 0.0;
    for (int d = 0; d < dim; ++d) {
      x[d] = c[d] * h;
      r2 += x[d] * x[d];
      pv += q.alphas[d] * x[d] * x[d];
    }
    f.r2[i] = r2;
    f.p[i] = pv;
    const double s = 1.0 + r2;
    f.Z[i] = std::pow(s, 2.0 - N / 2.0);
    f.W[i] = std::pow(s, 1.0 - N / 2.0);
    const double r = std::sqrt(r2);
    f.gz[i] = r > 0 ? std::min(f.Z[i], cz * std::pow(r, 4.0 - N)) : f.Z[i];
    f.gw[i] = r > 0 ? std::min(f.W[i], cw * std::pow(r, 2.0 - N)) : f.W[i];
  }
  return f;
}

}  // namespace

FieldPair monotone_iterate(const AnisotropicQuadratic& q, const kernels::Box& box,
                           const IterateConfig& cfg) {
  q.validate(box.dim);
  if (box.n < 9) throw std::invalid_argument("monotone_iterate: need at least 9 nodes per axis");

  const std::int64_t total = box.total();
  const auto f = build_fields(q, box);

  FieldPair out;
  out.grid = box;
  out.z = f.Z;
  out.w = f.W;
  // Dirichlet faces carry the matched far-field data throughout
  for (std::int64_t i = 0; i < total; ++i) {
    if (box.is_dirichlet(i)) {
      out.z[i] = f.gz[i];
      out.w[i] = f.gw[i];
    }
  }

  std::vector<double> src(total), zn(total), wn(total);
  double change = std::numeric_limits<double>::infinity();
  for (int outer = 0; outer < cfg.max_outer && change > cfg.tol; ++outer) {
    const std::int64_t n64 = total;
#pragma omp parallel for schedule(static) if (cfg.cg.parallel)
    for (std::int64_t i = 0; i < n64; ++i) src[i] = std::exp(-f.p[i] + out.z[i]);
    wn = out.w;  // warm start
    zn = out.z;
    const auto rw = kernels::cg_poisson(box, src, wn, cfg.cg);
    const auto rz = kernels::cg_poisson(box, out.w, zn, cfg.cg);
    if (!rw.converged || !rz.converged)
      throw std::runtime_error("monotone_iterate: CG failed to converge");
    change = 0.0;
    double jump = 0.0;
    for (std::int64_t i = 0; i < total; ++i) {
      change = std::max(change, std::abs(zn[i] - out.z[i]));
      change = std::max(change, std::abs(wn[i] - out.w[i]));
      jump = std::max(jump, zn[i] - out.z[i]);
      jump = std::max(jump, wn[i] - out.w[i]);
    }
    out.mono_violation = std::max(out.mono_violation, jump);
    out.z.swap(zn);
    out.w.swap(wn);
    out.iteration_count = outer + 1;
  }
  if (out.mono_violation > 1e-9)
    throw std::runtime_error("monotone_iterate: monotonicity violation beyond discretization slack");

  // coupled residual and the sandwich
  std::vector<double> tmp(total);
  kernels::neg_laplacian_apply_serial(box, out.z, tmp);
  for (std::int64_t i = 0; i < total; ++i)
    if (!box.is_dirichlet(i)) out.residual_z = std::max(out.residual_z, std::abs(tmp[i] - out.w[i]));
  kernels::neg_laplacian_apply_serial(box, out.w, tmp);
  for (std::int64_t i = 0; i < total; ++i)
    if (!box.is_dirichlet(i))
      out.residual_w =
          std::max(out.residual_w, std::abs(tmp[i] - std::exp(-f.p[i] + out.z[i])));
  for (std::int64_t i = 0; i < total; ++i) {
    if (out.z[i] < -1e-12 || out.z[i] > f.Z[i] + 1e-12 || out.w[i] < -1e-12 ||
        out.w[i] > f.W[i] + 1e-12)
      out.sandwich_ok = false;
  }
  return out;
}

double RadialReference::interp_z(double rr) const {
  auto it = std::upper_bound(r.begin(), r.end(), rr);
  std::size_t i = it == r.begin() ? 0 : static_cast<std::size_t>(it - r.begin()) - 1;
  i = std::min(i, r.size() - 2);
  return num::hermite(r[i], z[i], dz[i], r[i + 1], z[i + 1], dz[i + 1], rr);
}

double RadialReference::interp_w(double rr) const {
  auto it = std::upper_bound(r.begin(), r.end(), rr);
  std::size_t i = it == r.begin() ? 0 : static_cast<std::size_t>(it - r.begin()) - 1;
  i = std::min(i, r.size() - 2);
  return num::hermite(r[i], w[i], dw[i], r[i + 1], w[i + 1], dw[i + 1], rr);
}

RadialReference radial_reference(double alpha, int dim, double r_max) {
  if (!(alpha > 1.0 + dim / 2.0))
    throw std::invalid_argument("radial_reference: alpha must exceed 1 + N/2");
  const double N = dim;
  const double r0 = 1e-4;

  auto field = [&](double r, const num::StateVec<4>& s) -> num::StateVec<4> {
    const double src = std::exp(-alpha * r * r + s[0]);
    return {s[1], -s[2] - (N - 1) * s[1] / r, s[3], -src - (N - 1) * s[3] / r};
  };
  num::IntegratorConfig icfg;
  icfg.rel_tol = 1e-11;
  icfg.abs_tol = 1e-13;
  icfg.h_init = 1e-4;
  icfg.h_max = 0.05;
  icfg.r_max = r_max;
  icfg.blowup_component = -1;

  auto shoot_once = [&](double z0, double w0) {
    const double s0 = std::exp(z0);
    const num::StateVec<4> y0 = {z0 - w0 * r0 * r0 / (2 * N), -w0 * r0 / N,
                                 w0 - s0 * r0 * r0 / (2 * N), -s0 * r0 / N};
    return num::integrate<4>(field, y0, r0, icfg);
  };
  // decay conditions kill the constant modes of w and z at r_max
  auto boundary_miss = [&](double z0, double w0, double* F) {
    const auto tr = shoot_once(z0, w0);
    const auto& e = tr.y.back();
    F[0] = e[3] + (N - 2) * e[2] / r_max;
    F[1] = e[1] + (N - 4) * e[0] / r_max;
    return tr;
  };

  double x[2] = {0.3, 0.3};
  num::Trajectory<4> last;
  bool ok = false;
  for (int it = 0; it < 60; ++it) {
    double F[2];
    last = boundary_miss(x[0], x[1], F);
    if (std::hypot(F[0], F[1]) < 1e-13) {
      ok = true;
      break;
    }
    double J[2][2];
    for (int j = 0; j < 2; ++j) {
      const double dx = 1e-8;
      double xp[2] = {x[0], x[1]};
      xp[j] += dx;
      double Fp[2];
      boundary_miss(xp[0], xp[1], Fp);
      J[0][j] = (Fp[0] - F[0]) / dx;
      J[1][j] = (Fp[1] - F[1]) / dx;
    }
    const double det = J[0][0] * J[1][1] - J[0][1] * J[1][0];
    if (det == 0.0) break;
    x[0] -= (J[1][1] * F[0] - J[0][1] * F[1]) / det;
    x[1] -= (J[0][0] * F[1] - J[1][0] * F[0]) / det;
  }
  if (!ok) throw std::runtime_error("radial_reference: shooting did not converge");

  RadialReference ref;
  ref.z0 = x[0];
  ref.w0 = x[1];
  for (std::size_t i = 0; i < last.r.size(); ++i) {
    ref.r.push_back(last.r[i]);
    ref.z.push_back(last.y[i][0]);
    ref.dz.push_back(last.y[i][1]);
    ref.w.push_back(last.y[i][2]);
    ref.dw.push_back(last.y[i][3]);
  }
  return ref;
}

AssembledU assemble_u(const FieldPair& field, const AnisotropicQuadratic& q) {
  const auto& box = field.grid;
  const std::int64_t total = box.total();
  const double N = box.dim;
  const double c_hr = N * N * (N - 4) * (N - 4) / 16.0;
  AssembledU out;
  out.u.resize(total);
  out.stable_everywhere = true;

  const double h = box.h();
  int c[16];
  double worst_radius = 0.0;
  const double shell_lo = 0.8 * box.length;
  for (std::int64_t i = 0; i < total; ++i) {
    box.coords(i, c);
    double r2 = 0.0, pv = 0.0;
    for (int d = 0; d < box.dim; ++d) {
      const double x = c[d] * h;
      r2 += x * x;
      pv += q.alphas[d] * x * x;
    }
    out.u[i] = -pv + field.z[i];
    const double r = std::sqrt(r2);
    if (r >= shell_lo)
      out.tail_sup = std::max(out.tail_sup, std::abs(field.z[i]) * std::pow(r, N - 4.0));
    if (r > 0) {
      const bool holds = std::exp(1.0 - pv) <= c_hr / (r2 * r2);
      if (!holds) {
        out.stable_everywhere = false;
        worst_radius = std::max(worst_radius, r);
      }
    }
  }
  out.hardy_radius = worst_radius;
  return out;
}

namespace {

// symmetric direction orbits on the unit sphere: axes, normalized pair
// diagonals, the full diagonal; orbit weights chosen for degree-5 exactness
struct SphereRule {
  std::vector<std::vector<double>> dirs;
  std::vector<double> wts;
};

SphereRule sphere_rule(int dim) {
  SphereRule rule;
  const double N = dim;
  // sphere moment of theta_1^2 theta_2^2 and the per-orbit values; matching
  // it (with positive weights summing to 1) gives degree-5 exactness, since
  // sum theta_i^4 + sum_{i != j} theta_i^2 theta_j^2 = 1 fixes the fourth
  // moment automatically
  const double m22 = 1.0 / (N * (N + 2));
  const double p22 = 1.0 / (2.0 * N * (N - 1));  // pair-diagonal orbit
  const double d22 = 1.0 / (N * N);              // full-diagonal orbit
  // weights: wa (axes, orbit value 0), wp, wd with wp p22 + wd d22 = m22
  auto wa_of = [&](double wd) { return 1.0 - wd - (m22 - d22 * wd) / p22; };
  // feasible wd interval: wa >= 0 and wp >= 0
  double wd_lo = 0.0, wd_hi = m22 / d22;
  if (wa_of(wd_lo) < 0) {
    // wa(wd) is affine; solve wa(wd) = 0
    const double slope = wa_of(1.0) - wa_of(0.0);
    wd_lo = -wa_of(0.0) / slope;
  }
  const double best_wd = 0.5 * (wd_lo + std::min(wd_hi, 1.0));
  const double wp = (m22 - d22 * best_wd) / p22;
  const double wa = 1.0 - wp - best_wd;
  if (wa < 0 || wp < 0) throw std::runtime_error("sphere_rule: no positive weights for this dim");

  auto push_orbit = [&](const std::vector<std::vector<double>>& pts, double orbit_weight) {
    const double per = orbit_weight / pts.size();
    for (const auto& p : pts) {
      rule.dirs.push_back(p);
      rule.wts.push_back(per);
    }
  };
  // axes: +-e_i
  std::vector<std::vector<double>> axes;
  for (int d = 0; d < dim; ++d)
    for (int s : {-1, 1}) {
      std::vector<double> v(dim, 0.0);
      v[d] = s;
      axes.push_back(v);
    }
  // pair diagonals: (+-e_i +- e_j)/sqrt(2)
  std::vector<std::vector<double>> pairs;
  for (int i = 0; i < dim; ++i)
    for (int j = i + 1; j < dim; ++j)
      for (int si : {-1, 1})
        for (int sj : {-1, 1}) {
          std::vector<double> v(dim, 0.0);
          v[i] = si / std::sqrt(2.0);
          v[j] = sj / std::sqrt(2.0);
          pairs.push_back(v);
        }
  // full diagonals: (+-1, ..., +-1)/sqrt(N)
  std::vector<std::vector<double>> diags;
  for (int mask = 0; mask < (1 << dim); ++mask) {
    std::vector<double> v(dim);
    for (int d = 0; d < dim; ++d) v[d] = ((mask >> d) & 1 ? 1.0 : -1.0) / std::sqrt(N);
    diags.push_back(v);
  }
  push_orbit(axes, wa);
  push_orbit(pairs, wp);
  push_orbit(diags, best_wd);
  return rule;
}

// multilinear interpolation with reflection folding into the positive orthant
double interp_grid(const kernels::Box& box, std::span<const double> f,
                   std::span<const double> x) {
  const int dim = box.dim;
  const double h = box.h();
  int base[16];
  double frac[16];
  for (int d = 0; d < dim; ++d) {
    double xa = std::abs(x[d]) / h;
    xa = std::min(xa, static_cast<double>(box.n - 1) - 1e-12);
    base[d] = static_cast<int>(xa);
    frac[d] = xa - base[d];
  }
  double acc = 0.0;
  for (int corner = 0; corner < (1 << dim); ++corner) {
    double wgt = 1.0;
    std::int64_t idx = 0;
    for (int d = 0; d < dim; ++d) {
      const int bit = (corner >> d) & 1;
      wgt *= bit ? frac[d] : 1.0 - frac[d];
      idx = idx * box.n + std::min(base[d] + bit, box.n - 1);
    }
    acc += wgt * f[idx];
  }
  return acc;
}

}  // namespace

SphericalAverage spherical_average(const FieldPair& field, const AnisotropicQuadratic& q,
                                   std::span<const double> radii) {
  const auto& box = field.grid;
  const auto rule = sphere_rule(box.dim);
  double alpha_sum = 0.0;
  for (double a : q.alphas) alpha_sum += a;

  SphericalAverage out;
  std::vector<double> x(box.dim);
  for (double r : radii) {
    if (r > box.length) throw std::invalid_argument("spherical_average: radius outside grid");
    double ubar = 0.0, wbar = 0.0, eubar = 0.0;
    for (std::size_t k = 0; k < rule.dirs.size(); ++k) {
      for (int d = 0; d < box.dim; ++d) x[d] = r * rule.dirs[k][d];
      const double z = interp_grid(box, field.z, x);
      const double w = interp_grid(box, field.w, x);
      const double u = -q(x) + z;
      ubar += rule.wts[k] * u;
      wbar += rule.wts[k] * w;
      eubar += rule.wts[k] * std::exp(u);
    }
    out.radii.push_back(r);
    out.u_bar.push_back(ubar);
    out.v_bar.push_back(2 * alpha_sum + wbar);  // v = -lap u = 2 sum alpha + w
    out.exp_u_bar.push_back(std::exp(ubar));
    out.avg_exp_u.push_back(eubar);
    if (std::exp(ubar) > eubar * (1 + 1e-12)) out.jensen_ok = false;
  }
  return out;
}

void write_field(const FieldPair& f, const AnisotropicQuadratic& q, const std::string& base_path) {
  {
    std::ofstream bin(base_path + ".bin", std::ios::binary);
    if (!bin) throw std::runtime_error("write_field: cannot open " + base_path + ".bin");
    bin.write(reinterpret_cast<const char*>(f.z.data()),
              static_cast<std::streamsize>(f.z.size() * sizeof(double)));
    bin.write(reinterpret_cast<const char*>(f.w.data()),
              static_cast<std::streamsize>(f.w.size() * sizeof(double)));
  }
  nlohmann::json j;
  j["dim"] = f.grid.dim;
  j["nodes_per_axis"] = f.grid.n;
  j["box_length"] = f.grid.length;
  j["alphas"] = q.alphas;
  j["order"] = "axis-major, z block then w block, float64";
  j["iterations"] = f.iteration_count;
  j["residual_z"] = f.residual_z;
  j["residual_w"] = f.residual_w;
  std::ofstream side(base_path + ".json");
  side << j.dump(2) << "\n";
}

void write_axis_slice_csv(const FieldPair& f, const AnisotropicQuadratic& q,
                          const std::string& path) {
  std::ofstream csv(path);
  if (!csv) throw std::runtime_error("write_axis_slice_csv: cannot open " + path);
  csv << "x,z,w,u\n";
  const double h = f.grid.h();
  std::vector<double> x(f.grid.dim, 0.0);
  char buf[160];
  for (int i = 0; i < f.grid.n; ++i) {
    const std::int64_t idx = static_cast<std::int64_t>(i) * f.grid.stride(0);
    x[0] = i * h;
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", x[0], f.z[idx], f.w[idx],
                  -q(x) + f.z[idx]);
    csv << buf;
  }
}

}  // namespace bgf::nonradial
