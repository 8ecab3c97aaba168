// Exponents tied to the cubic X^3 - 8X + 4: its roots, the integrability
// exponent p* = alpha* + 1/2, q*(N), the partial-regularity bound N - 4p*,
// the delta(alpha) positivity window, and the bootstrap exponent chain.
#pragma once

#include <vector>

namespace bgf::exponents {

struct CubicRoots {
  double root_neg = 0.0;     // smallest root
  double alpha_sharp = 0.0;  // second largest
  double alpha_star = 0.0;   // largest
};

// Trigonometric solution of the depressed cubic plus one Newton polish step;
// reproducible to 1e-12.
CubicRoots cubic_roots();

struct ExponentTable {
  double alpha_sharp = 0.0;
  double alpha_star = 0.0;
  double p_star = 0.0;             // alpha_star + 1/2
  double q_star = 0.0;             // 2N/(N-2) alpha_star
  double hausdorff_bound = 0.0;    // N - 4 p_star (meaningful for N >= 13)
  bool regular = false;            // N < 4 p_star: extremal solution smooth
  int dim_cutoff = 0;              // largest N with N < 4 p_star
  int dim = 0;
};

ExponentTable exponent_table(int dim);

// 2 sqrt(2a-1)/(a sqrt a) - 1; positive exactly on (alpha_sharp, alpha_star).
double delta_margin(double alpha);

// 1 - a^3/(8a - 4); vanishes exactly at the cubic's roots.
double lp_coefficient(double alpha);

struct BootstrapChain {
  std::vector<double> steps;
  bool reachable = false;
};

// Geometric chain alpha, N/(N-2) alpha, ... ; target reachable iff
// alpha_target < N/(N-2) * alpha_star.
BootstrapChain bootstrap_chain(int dim, double alpha_start, double alpha_target);

struct HausdorffBound {
  double bound = 0.0;
  bool regular = false;
  int dim_cutoff = 0;
};

HausdorffBound hausdorff_bound(int dim);

}  // namespace bgf::exponents
