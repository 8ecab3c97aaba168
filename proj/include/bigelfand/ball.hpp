// Navier problem lap^2 u = lambda e^u on the unit ball: two-parameter radial
// shooting, pseudo-arclength branch continuation with fold detection, the
// extremal parameter lambda*, and quadrature audits along the branch.
#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bigelfand/numerics.hpp"
#include "bigelfand/radial.hpp"

namespace bgf::ball {

struct BranchPoint {
  double a = 0.0;       // u(0) = sup norm on the minimal branch
  double lambda = 0.0;
  double beta = 0.0;    // v(0)
  double sup_norm = 0.0;
  int morse_index = 0;
  bool is_fold = false;
  double residual = 0.0;  // |(u(1), v(1))| after Newton
};

struct Branch {
  int dim = 5;
  std::vector<BranchPoint> points;
  double lambda_star = 0.0;
  std::vector<std::size_t> folds;  // indices into points
};

struct BallConfig {
  double r0 = 1e-4;
  double newton_tol = 1e-10;
  int newton_max = 40;
  double fd_step = 1e-7;
  int k_max_index = 6;
  int nodes_profile = 600;
  num::IntegratorConfig integ{};
  BallConfig() {
    integ.rel_tol = 1e-11;
    integ.abs_tol = 1e-13;
    integ.h_init = 1e-4;
    integ.h_max = 0.02;
    integ.r_max = 1.0;
    integ.blowup_threshold = 1e6;
    integ.blowup_component = -1;
  }
};

struct BallSolveResult {
  BranchPoint point;
  bool converged = false;
  double jacobian_condition = 0.0;
};

// boundary residual F(beta, lambda) = (u(1), v(1)) for the shot from u(0)=a
std::pair<double, double> ball_residual(double a, double beta, double lambda, int dim,
                                        const BallConfig& cfg);

// Newton iteration on (beta, lambda) at fixed a; attaches no Morse index.
BallSolveResult solve_ball(double a, int dim, double beta_guess, double lambda_guess,
                           const BallConfig& cfg = {});

// small-load seed: u ~ lambda u1 with lap^2 u1 = 1, u1 = lap u1 = 0
void zero_load_seed(int dim, double a, double& beta, double& lambda);

// resampled radial profile of a converged ball solution on [r0, 1]
radial::RadialProfile ball_profile(const BranchPoint& pt, int dim, const BallConfig& cfg = {});

// Pseudo-arclength continuation in (a, lambda) from the zero-load seed.
// Folds are sign changes of the tangent's lambda component, refined by
// bisection on the tangent; the first fold fixes lambda* (max over points).
Branch continue_branch(int dim, double a_max, double ds, const BallConfig& cfg = {},
                       bool with_morse_index = true);

struct RegularityChainReport {
  double alpha = 0.0;
  // lhs <= rhs for each of the three inequalities, after domain rescaling
  // to unit coefficient
  double lhs1 = 0, rhs1 = 0, lhs2 = 0, rhs2 = 0, lhs3 = 0, rhs3 = 0;
  bool holds1 = false, holds2 = false, holds3 = false;
  double slack_min = 0.0;  // min of (rhs - lhs)/rhs over the three
};

// Audits the three integral inequalities of the L^p chain on the scaled
// problem lap^2 U = e^U over the ball of radius lambda^{1/4}.
RegularityChainReport regularity_chain_audit(const BranchPoint& pt, int dim, double alpha,
                                             const BallConfig& cfg = {});

struct CutoffFunction {
  double r = 0.0, R0 = 0.0;
  int dim = 5;
  double a = 0.0, b = 0.0;  // a - b|x|^2 inner cap coefficients
  double psi(double s) const;
  double dpsi(double s) const;
  double lap_psi(double s) const;
  // energy int |lap(psi * zeta(x/R0))|^2 over the three regions
  double energy() const;
};

// C^1 capacitary cutoff: a - b|x|^2 inside radius r, |x|^{1-N/2} outside,
// glued so value and slope match at |x| = r.
CutoffFunction capacitary_cutoff(double r, double R0, int dim);

struct L1GrowthReport {
  num::PowerFit fit;
  double sup_ratio = 0.0;  // sup over radii of integral / r^{N-2}
};

// integral of v over balls B_r(center) (radial solutions, center = origin)
// or over annuli [R, 2R] for entire profiles, fitted as a power law
L1GrowthReport l1_growth_audit(const radial::RadialProfile& p, std::span<const double> radii,
                               bool annulus_mode = false);

void write_branch_csv(const Branch& b, const std::string& path);
std::string branch_summary_json(const Branch& b);

}  // namespace bgf::ball
