// Entire-space radial solutions of the fourth-order exponential problem via
// the split system -lap u = v, -lap v = e^u: shooting, the existence
// threshold beta0, scaling, singular reference solutions, tail limits.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bigelfand/numerics.hpp"

namespace bgf::radial {

struct RadialProfile {
  int dim = 5;
  std::vector<double> grid;  // strictly increasing, starts at r0 > 0
  std::vector<double> u, du, v, dv;
  double a = 0.0;     // u(0)
  double beta = 0.0;  // v(0)

  std::size_t size() const { return grid.size(); }
  // linear index of the last node <= r
  std::size_t locate(double r) const;
  double interp_u(double r) const;
  double interp_v(double r) const;
};

enum class ShootKind { global, blowup, undetermined };

struct ShootOutcome {
  ShootKind kind = ShootKind::undetermined;
  double blowup_radius = 0.0;            // valid iff kind == blowup
  std::optional<RadialProfile> profile;  // present iff global or undetermined
  double u_end = 0.0, du_end = 0.0;
  num::StopReason stop = num::StopReason::reached_r_max;
};

struct ShootConfig {
  num::IntegratorConfig integ{};
  double r0 = 1e-3;
  // resampled output grid: uniform nodes on [r0, 1], geometric beyond
  int nodes_linear = 220;
  int nodes_per_decade = 220;
  double lambda = 1.0;  // forcing scale: -lap v = lambda e^u
  ShootConfig() {
    integ.rel_tol = 1e-10;
    integ.abs_tol = 1e-12;
    integ.h_init = 1e-4;
    integ.h_max = 0.5;
    integ.r_max = 50.0;
    integ.blowup_threshold = 50.0;
    integ.blowup_component = 0;
  }
};

// Right-hand side of the first-order system for (u, u', v, v').
num::StateVec<4> radial_field(int dim, double r, const num::StateVec<4>& s, double lambda = 1.0);

// Series initialization at a small radius r0, accurate to O(r0^6).
num::StateVec<4> series_start(double a, double beta, int dim, double r0, double lambda = 1.0);

ShootOutcome shoot(double a, double beta, int dim, const ShootConfig& cfg = {});

// Bisection for the existence threshold beta0 at the normalization a = 0:
// blow-up below, global above. Undetermined outcomes count as the blow-up
// side (conservative upper bracket).
num::Bracket find_beta0(int dim, double tol, const ShootConfig& cfg = {});

// Invariance scaling u_lam(x) = u(lam x) + 4 ln lam.
RadialProfile scale_profile(const RadialProfile& p, double lam);

// u_s = -4 ln r + ln(8(N-2)(N-4)), exact solution for dim >= 5.
RadialProfile singular_profile(int dim, std::vector<double> grid);

struct TailLimit {
  double estimate = 0.0;
  double uncertainty = 0.0;
};

// Aitken-extrapolated limit of v(r) as r -> infinity from samples at
// r_max/4, r_max/2, r_max (for radial profiles the spherical average of v
// is v itself).
TailLimit vbar_limit(const RadialProfile& p);

// Tail-tolerance test for "vbar(infinity) = 0": the Aitken estimate is
// compatible with zero when it does not exceed 5x its own uncertainty.
bool tail_limit_is_zero(const TailLimit& t);

// CSV with header r,u,du,v,dv at 17 significant digits.
void write_profile_csv(const RadialProfile& p, const std::string& path);
RadialProfile read_profile_csv(const std::string& path);

}  // namespace bgf::radial
