#include "bigelfand/audit.hpp"

#include <algorithm>
#include <cmath>

#include "bigelfand/fd.hpp"
#include "json.hpp"

namespace bgf::audit {

namespace {

double surface_area(int dim) { return 2.0 * std::pow(M_PI, dim / 2.0) / std::tgamma(dim / 2.0); }

// C^2 ramp: 1 for t <= 1, 0 for t >= 2
double ramp(double t) {
  if (t <= 1) return 1.0;
  if (t >= 2) return 0.0;
  const double s = t - 1;
  return 1.0 - s * s * s * (10 - 15 * s + 6 * s * s);
}
double dramp(double t) {
  if (t <= 1 || t >= 2) return 0.0;
  const double s = t - 1;
  return -30 * s * s * (1 - s) * (1 - s);
}

double annulus_integral(const radial::RadialProfile& p, double R, auto&& f) {
  const auto w = num::trapezoid_weights(p.grid);
  const double N = p.dim;
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double r = p.grid[i];
    if (r < R || r > 2 * R) continue;
    acc += w[i] * std::pow(r, N - 1) * f(i);
  }
  return surface_area(p.dim) * acc;
}

}  // namespace

EstimateReport capacitary_audit(const radial::RadialProfile& p, double p_val,
                                std::span<const double> radii) {
  for (double R : radii)
    if (2 * R > p.grid.back() * 1.0000001)
      throw std::invalid_argument("capacitary_audit: radius outside grid");
  std::vector<double> vals;
  for (double R : radii)
    vals.push_back(
        annulus_integral(p, R, [&](std::size_t i) { return std::exp(p_val * p.u[i]); }));
  EstimateReport rep;
  rep.estimate_id = "capacitary_p";
  rep.fit = num::fit_power_law(radii, vals);
  rep.tolerance = 0.1;
  const double bound = p.dim - 4 * p_val;
  // the bound is an upper growth bound: fitted exponent at most N-4p up to
  // tolerance (sharp at the borderline profile, smaller above it)
  rep.passed = rep.fit->exponent <= bound + rep.tolerance;
  rep.note = "bound exponent N-4p = " + std::to_string(bound);
  return rep;
}

EstimateReport capacitary_audit_v(const radial::RadialProfile& p, double q_val,
                                  std::span<const double> radii) {
  std::vector<double> vals;
  for (double R : radii)
    vals.push_back(annulus_integral(
        p, R, [&](std::size_t i) { return std::pow(std::max(p.v[i], 0.0), q_val); }));
  EstimateReport rep;
  rep.estimate_id = "l1ev";
  rep.fit = num::fit_power_law(radii, vals);
  rep.tolerance = 0.1;
  const double bound = p.dim - 2 * q_val;
  rep.passed = rep.fit->exponent <= bound + rep.tolerance;
  rep.note = "bound exponent N-2q = " + std::to_string(bound);
  return rep;
}

EstimateReport pointwise_lower_bound(const radial::RadialProfile& p,
                                     const spectrum::StabilityVerdict& verdict) {
  if (verdict.status != spectrum::Stability::stable)
    throw std::invalid_argument("pointwise_lower_bound: profile not verified stable");
  EstimateReport rep;
  rep.estimate_id = "ogps";
  double mn = std::numeric_limits<double>::infinity();
  double loc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double m = p.v[i] - std::sqrt(2.0) * std::exp(p.u[i] / 2);
    if (m < mn) {
      mn = m;
      loc = p.grid[i];
    }
  }
  rep.min_margin = mn;
  rep.margin_location = loc;
  rep.tolerance = 1e-10;
  rep.passed = mn >= -rep.tolerance;
  return rep;
}

KatoReport kato_check(const radial::RadialProfile& p) {
  const std::size_t n = p.size();
  std::vector<double> wfun(n);
  for (std::size_t i = 0; i < n; ++i)
    wfun[i] = std::sqrt(2.0) * std::exp(p.u[i] / 2) - p.v[i];
  const auto lap = num::radial_laplacian(p.grid, wfun, p.dim);

  KatoReport rep;
  rep.min_margin = std::numeric_limits<double>::infinity();
  double scale = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (wfun[i] <= 0) continue;
    ++rep.positive_nodes;
    const double rhs = std::exp(p.u[i] / 2) * wfun[i] / std::sqrt(2.0);
    const double m = lap[i] - rhs;
    scale = std::max(scale, std::abs(rhs));
    if (m < rep.min_margin) {
      rep.min_margin = m;
      rep.location = p.grid[i];
    }
  }
  if (rep.positive_nodes == 0) {
    rep.vacuous = true;
    rep.passed = true;
    rep.min_margin = 0.0;
    return rep;
  }
  const double tol = 1e-5 * std::max(1.0, scale);
  rep.passed = rep.min_margin >= -tol;
  rep.non_solution = !rep.passed;
  return rep;
}

LiouvilleReport liouville_decay(const radial::RadialProfile& p) {
  LiouvilleReport rep;
  const double N = p.dim;
  rep.singular_constant = 8 * (N - 2) * (N - 4);
  const double R = p.grid.back();
  auto g = [&](double r) { return std::pow(r, 4.0) * std::exp(p.interp_u(r)); };
  const double x0 = g(R / 4), x1 = g(R / 2), x2 = g(R);
  rep.value_at_rmax = x2;
  const double d1 = x2 - x1, d0 = x1 - x0;
  rep.extrapolated = std::abs(d1 - d0) > 1e-300 ? x2 - d1 * d1 / (d1 - d0) : x2;
  rep.limit_zero = std::abs(rep.extrapolated) < 1e-8 && x2 < 1e-8;
  return rep;
}

LemmaFeReport lemma_fe_audit(const radial::RadialProfile& p, double alpha, double cutoff_radius) {
  if (alpha <= 0.5) throw std::invalid_argument("lemma_fe_audit: alpha must exceed 1/2");
  if (2 * cutoff_radius > p.grid.back() * 1.0000001)
    throw std::invalid_argument("lemma_fe_audit: cutoff support outside grid");
  LemmaFeReport rep;
  rep.alpha = alpha;
  rep.cutoff_radius = cutoff_radius;
  const double N = p.dim;
  const double omega = surface_area(p.dim);
  const auto w = num::trapezoid_weights(p.grid);
  for (double v : p.v)
    if (v <= 0) rep.v_positive = false;

  double X2 = 0, A2 = 0, B2 = 0, Y2 = 0, C2 = 0, D2 = 0, I_v2 = 0, I_euv = 0, X2id = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double r = p.grid[i];
    const double wi = w[i] * std::pow(r, N - 1) * omega;
    const double t = r / cutoff_radius;
    const double phi = ramp(t), dphi = dramp(t) / cutoff_radius;
    if (phi == 0.0 && dphi == 0.0) continue;
    const double v = std::max(p.v[i], 1e-300);
    const double va = std::pow(v, alpha);
    const double dva = alpha * std::pow(v, alpha - 1) * p.dv[i];
    const double eu = std::exp(p.u[i]);
    // inequality (1) pieces
    const double grad_vaphi = dva * phi + va * dphi;
    X2 += wi * grad_vaphi * grad_vaphi;
    A2 += wi * va * va * dphi * dphi;
    B2 += wi * eu * std::pow(v, 2 * alpha - 1) * phi * phi;
    // inequality (2) pieces
    const double ea2 = std::exp(alpha * p.u[i] / 2);
    const double grad_eaphi = ea2 * (alpha / 2 * p.du[i] * phi + dphi);
    Y2 += wi * grad_eaphi * grad_eaphi;
    C2 += wi * ea2 * ea2 * v * phi * phi;
    D2 += wi * ea2 * ea2 * dphi * dphi;
    // alpha = 1 identity pieces
    I_v2 += wi * v * v * dphi * dphi;
    I_euv += wi * eu * v * phi * phi;
    const double gvphi = p.dv[i] * phi + p.v[i] * dphi;
    X2id += wi * gvphi * gvphi;
  }
  rep.lhs1 = std::sqrt(2 * alpha - 1) / alpha * std::sqrt(X2);
  rep.rhs1_main = std::sqrt(B2);
  rep.rhs1_grad = std::sqrt(A2);
  rep.c1_required = rep.rhs1_grad > 0 ? std::max(0.0, (rep.lhs1 - rep.rhs1_main) / rep.rhs1_grad) : 0.0;
  rep.lhs2 = 2.0 / std::sqrt(alpha) * std::sqrt(Y2);
  rep.rhs2_main = std::sqrt(C2);
  rep.rhs2_grad = std::sqrt(D2);
  rep.c2_required = rep.rhs2_grad > 0 ? std::max(0.0, (rep.lhs2 - rep.rhs2_main) / rep.rhs2_grad) : 0.0;
  if (std::abs(alpha - 1.0) < 1e-14)
    rep.identity_defect = std::abs(X2id - I_v2 - I_euv) / std::max(X2id, 1e-300);
  return rep;
}

std::string report_to_json_line(const EstimateReport& r) {
  nlohmann::json j;
  j["estimate_id"] = r.estimate_id;
  if (r.fit) {
    j["fit"] = {{"constant", r.fit->constant},
                {"exponent", r.fit->exponent},
                {"max_residual", r.fit->max_residual},
                {"n_points", r.fit->n_points}};
  }
  if (r.min_margin) j["min_margin"] = *r.min_margin;
  if (r.margin_location) j["margin_location"] = *r.margin_location;
  j["tolerance"] = r.tolerance;
  j["passed"] = r.passed;
  j["inputs"] = r.inputs;
  if (!r.note.empty()) j["note"] = r.note;
  return j.dump();
}

}  // namespace bgf::audit
