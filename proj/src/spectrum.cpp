#include "bigelfand/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bigelfand/fd.hpp"
#include "json.hpp"

namespace bgf::spectrum {

using num::BandedSym;
using num::QuadraticFormPair;

num::QuadraticFormPair assemble_mode_forms(const radial::RadialProfile& p, int mode_k, double rho,
                                           double R, Bc bc, double potential_scale) {
  if (mode_k < 0) throw std::invalid_argument("assemble_mode_forms: mode_k must be >= 0");
  if (!(rho < R)) throw std::invalid_argument("assemble_mode_forms: need rho < R");
  if (rho > p.grid.front() && rho < p.grid.front() * 0.999)
    throw std::invalid_argument("assemble_mode_forms: interval outside grid");
  const auto lo = std::lower_bound(p.grid.begin(), p.grid.end(), rho);
  const auto hi = std::upper_bound(p.grid.begin(), p.grid.end(), R);
  const int i0 = static_cast<int>(lo - p.grid.begin());
  const int i1 = static_cast<int>(hi - p.grid.begin()) - 1;
  const int m = i1 - i0 + 1;
  if (m < 8) throw std::invalid_argument("assemble_mode_forms: interval covers too few grid nodes");

  const double N = p.dim;
  const double mu = static_cast<double>(mode_k) * (mode_k + N - 2);
  std::span<const double> g(p.grid.data() + i0, static_cast<std::size_t>(m));
  const auto w = num::trapezoid_weights(g);

  // constrained nodes: right end always; left end unless (origin_regular, k=0)
  const bool left_fixed = !(bc == Bc::origin_regular && mode_k == 0);
  const int u0 = left_fixed ? 1 : 0;  // first unknown (local index)
  const int u1 = m - 2;               // last unknown
  const int nu = u1 - u0 + 1;
  if (nu < 3) throw std::invalid_argument("assemble_mode_forms: too few unknowns");

  // rows of the discrete operator Delta_k at every local node
  struct Row {
    int j0, len;
    double c[4];
  };
  std::vector<Row> rows(m);
  for (int i = 0; i < m; ++i) {
    const bool end = (i == 0 || i == m - 1);
    const int len = end ? 4 : 3;
    const int j0 = (i == 0) ? 0 : (i == m - 1 ? m - 4 : i - 1);
    std::span<const double> nodes(g.data() + j0, static_cast<std::size_t>(len));
    const auto w2 = num::fd_weights(nodes, g[i], 2);
    const auto w1 = num::fd_weights(nodes, g[i], 1);
    Row r{j0, len, {0, 0, 0, 0}};
    for (int k = 0; k < len; ++k) r.c[k] = w2[k] + (N - 1) / g[i] * w1[k];
    // diagonal centrifugal term
    for (int k = 0; k < len; ++k)
      if (j0 + k == i) r.c[k] -= mu / (g[i] * g[i]);
    rows[i] = r;
  }

  QuadraticFormPair forms;
  forms.a = BandedSym(nu, 3);
  forms.b_diag.assign(nu, 0.0);
  forms.grid.assign(g.begin() + u0, g.begin() + u1 + 1);

  for (int i = 0; i < m; ++i) {
    const double wi = w[i] * std::pow(g[i], N - 1);
    const auto& r = rows[i];
    for (int kk = 0; kk < r.len; ++kk) {
      const int col_k = r.j0 + kk;
      if (col_k < u0 || col_k > u1) continue;
      for (int ll = 0; ll <= kk; ++ll) {
        const int col_l = r.j0 + ll;
        if (col_l < u0 || col_l > u1) continue;
        forms.a.add(col_k - u0, col_l - u0, wi * r.c[kk] * r.c[ll]);
      }
    }
  }
  for (int i = u0; i <= u1; ++i) {
    const double eu = potential_scale * std::exp(std::min(p.u[i0 + i], 700.0));
    forms.b_diag[i - u0] = w[i] * std::pow(g[i], N - 1) * eu;
  }
  return forms;
}

HardyRellichMargin hardy_rellich_margin(const radial::RadialProfile& p, double potential_scale) {
  if (p.dim < 5) throw std::invalid_argument("hardy_rellich_margin: dim must be >= 5");
  const double N = p.dim;
  const double c_hr = N * N * (N - 4) * (N - 4) / 16.0;
  HardyRellichMargin out;
  out.margin.resize(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double r = p.grid[i];
    out.margin[i] = c_hr / (r * r * r * r) - potential_scale * std::exp(std::min(p.u[i], 700.0));
    if (out.margin[i] < 0) out.last_negative_radius = r;
  }
  return out;
}

namespace {

double min_nu_over_modes(const radial::RadialProfile& p, double rho, double R, Bc bc, int k_max,
                         double scale, int* arg_k = nullptr,
                         std::vector<ModeSpectrum>* record = nullptr) {
  double best = std::numeric_limits<double>::infinity();
  int bk = 0;
  std::vector<ModeSpectrum> ms(static_cast<std::size_t>(k_max) + 1);
#pragma omp parallel for schedule(dynamic)
  for (int k = 0; k <= k_max; ++k) {
    const auto forms = assemble_mode_forms(p, k, rho, R, bc, scale);
    const auto eig = num::min_generalized_eig(forms);
    ModeSpectrum m;
    m.mode_k = k;
    m.mu_k = static_cast<double>(k) * (k + p.dim - 2);
    m.nu_min = eig.nu;
    m.rho = rho;
    m.R = R;
    m.bc = bc;
    ms[static_cast<std::size_t>(k)] = m;
  }
  for (int k = 0; k <= k_max; ++k) {
    if (ms[static_cast<std::size_t>(k)].nu_min < best) {
      best = ms[static_cast<std::size_t>(k)].nu_min;
      bk = k;
    }
  }
  if (arg_k) *arg_k = bk;
  if (record) *record = std::move(ms);
  return best;
}

}  // namespace

StabilityVerdict classify_stability(const radial::RadialProfile& p, const SpectrumConfig& cfg) {
  if (p.size() < 16) throw std::invalid_argument("classify_stability: profile too short");
  const double RT = std::min(cfg.truncation_radius, p.grid.back());
  StabilityVerdict v;
  v.k_scan_max = cfg.k_max;

  const auto hr = hardy_rellich_margin(p);
  v.tail_certified = hr.tail_certified_beyond(RT * 0.999);

  v.nu_min_full = min_nu_over_modes(p, p.grid.front(), RT, Bc::origin_regular, cfg.k_max, 1.0,
                                    &v.minimizing_k, &v.modes);
  const bool full_stable = v.nu_min_full >= 1.0 - cfg.tol_spec;

  if (full_stable && v.tail_certified) {
    v.status = Stability::stable;
    return v;
  }

  bool any_annulus_stable = false;
  for (double rho = cfg.rho_min; rho <= cfg.rho_max * 1.0000001; rho *= cfg.rho_factor) {
    const double nu = min_nu_over_modes(p, rho, RT, Bc::clamped_value, cfg.k_max, 1.0);
    v.annulus_scan.emplace_back(rho, nu);
    if (nu >= 1.0 - cfg.tol_spec && !any_annulus_stable) {
      any_annulus_stable = true;
      v.rho_star = rho;
    }
  }

  if (v.tail_certified && any_annulus_stable) {
    v.status = Stability::stable_outside_compact;
    return v;
  }
  if (!v.tail_certified && !any_annulus_stable && !full_stable) {
    v.status = Stability::unstable_everywhere_outside;
    v.rho_star.reset();
    return v;
  }
  throw std::runtime_error(
      "classify_stability: undetermined — tail not certifiable and truncated-domain verdict "
      "ambiguous; enlarge truncation_radius or the rho scan");
}

num::Bracket find_beta1(int dim, double tol, const radial::ShootConfig& shoot_cfg,
                        const SpectrumConfig& spec_cfg) {
  if (dim < 5) throw std::invalid_argument("find_beta1: dim must be >= 5");
  const auto b0 = radial::find_beta0(dim, 1e-7, shoot_cfg);
  auto is_stable = [&](double beta) {
    const auto out = radial::shoot(0.0, beta, dim, shoot_cfg);
    if (!out.profile) return false;
    const auto v = classify_stability(*out.profile, spec_cfg);
    return v.status == Stability::stable;
  };
  double lo = b0.hi + 1e-4;
  double hi = b0.hi + 16.0 / (std::exp(1.0) * (dim - 4)) + 0.5;
  if (is_stable(lo)) throw std::runtime_error("find_beta1: lower endpoint already stable");
  if (!is_stable(hi)) throw std::runtime_error("find_beta1: upper endpoint not stable");
  auto br = num::bisect_predicate(is_stable, lo, hi, tol);
  if (!(br.lo > b0.hi)) throw std::runtime_error("find_beta1: bracket does not exceed beta0");
  return br;
}

InterpolatedCheck interpolated_form_check(const radial::RadialProfile& p,
                                          const StabilityVerdict& verdict, double potential_scale) {
  if (verdict.status != Stability::stable)
    throw std::invalid_argument("interpolated_form_check: input not verified stable");
  const double N = p.dim;
  const auto w = num::trapezoid_weights(p.grid);
  InterpolatedCheck out;

  auto ratio_for = [&](auto&& phi, auto&& dphi) {
    double num_ = 0.0, den = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double r = p.grid[i];
      const double wr = w[i] * std::pow(r, N - 1);
      const double ph = phi(r);
      num_ += wr * std::sqrt(potential_scale) * std::exp(std::min(p.u[i] / 2, 350.0)) * ph * ph;
      den += wr * dphi(r) * dphi(r);
    }
    return den > 0 ? num_ / den : 0.0;
  };

  const double R = p.grid.back();
  for (double c : {0.02 * R, 0.05 * R, 0.1 * R, 0.2 * R, 0.4 * R}) {
    for (double width : {c * 0.3, c * 0.6, c * 1.2}) {
      auto phi = [c, width](double r) { return std::exp(-((r - c) / width) * ((r - c) / width)); };
      auto dphi = [c, width](double r) {
        const double t = (r - c) / width;
        return -2 * t / width * std::exp(-t * t);
      };
      out.worst_ratio = std::max(out.worst_ratio, ratio_for(phi, dphi));
      ++out.n_samples;
    }
  }
  return out;
}

long harmonic_multiplicity(int dim, int k) {
  if (k == 0) return 1;
  auto binom = [](long n, long r) -> long {
    if (r < 0 || r > n) return 0;
    long out = 1;
    for (long i = 0; i < r; ++i) out = out * (n - i) / (i + 1);
    return out;
  };
  return binom(dim + k - 1, k) - binom(dim + k - 3, k - 2);
}

MorseIndex morse_index_navier(const radial::RadialProfile& bp, double lambda, int k_max) {
  MorseIndex mi;
  mi.per_mode.assign(static_cast<std::size_t>(k_max) + 1, 0);
  const double eps = 1e-8;
  for (int k = 0; k <= k_max; ++k) {
    const auto forms =
        assemble_mode_forms(bp, k, bp.grid.front(), bp.grid.back(), Bc::origin_regular, lambda);
    const int below = num::pencil_count_below(forms.a, forms.b_diag, 1.0 - eps);
    const int above = num::pencil_count_below(forms.a, forms.b_diag, 1.0 + eps);
    if (above != below) mi.borderline = true;
    mi.per_mode[static_cast<std::size_t>(k)] = below;
    mi.index += below * static_cast<int>(harmonic_multiplicity(bp.dim, k));
  }
  return mi;
}

std::string verdict_to_string(Stability s) {
  switch (s) {
    case Stability::stable: return "stable";
    case Stability::stable_outside_compact: return "stable_outside_compact";
    case Stability::unstable_everywhere_outside: return "unstable_everywhere_outside";
  }
  return "?";
}

std::string spectrum_report_json(const radial::RadialProfile& p, const StabilityVerdict& v) {
  nlohmann::json j;
  j["beta"] = p.beta;
  j["dim"] = p.dim;
  auto modes = nlohmann::json::array();
  for (const auto& m : v.modes) modes.push_back({{"k", m.mode_k}, {"nu_min", m.nu_min}});
  j["modes"] = modes;
  j["verdict"] = verdict_to_string(v.status);
  if (v.rho_star) j["rho_star"] = *v.rho_star;
  else j["rho_star"] = nullptr;
  j["tail_certified"] = v.tail_certified;
  j["nu_min_full"] = v.nu_min_full;
  j["minimizing_k"] = v.minimizing_k;
  return j.dump(2);
}

}  // namespace bgf::spectrum
