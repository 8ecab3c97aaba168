#include "bigelfand/exponents.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bgf::exponents {

namespace {
constexpr double kP = -8.0, kQ = 4.0;  // x^3 + kP x + kQ

double newton_polish(double x) {
  for (int it = 0; it < 4; ++it) {
    const double f = x * x * x + kP * x + kQ;
    const double df = 3 * x * x + kP;
    x -= f / df;
  }
  return x;
}
}  // namespace

CubicRoots cubic_roots() {
  // three real roots (discriminant < 0): x_k = 2 sqrt(-p/3) cos(theta/3 - 2 pi k/3)
  const double m = 2.0 * std::sqrt(-kP / 3.0);
  const double theta = std::acos(3.0 * kQ / (kP * m));
  double r[3];
  for (int k = 0; k < 3; ++k)
    r[k] = newton_polish(m * std::cos((theta - 2.0 * M_PI * k) / 3.0));
  std::sort(r, r + 3);
  return {r[0], r[1], r[2]};
}

ExponentTable exponent_table(int dim) {
  const auto roots = cubic_roots();
  ExponentTable t;
  t.dim = dim;
  t.alpha_sharp = roots.alpha_sharp;
  t.alpha_star = roots.alpha_star;
  t.p_star = roots.alpha_star + 0.5;
  t.q_star = dim > 2 ? 2.0 * dim / (dim - 2.0) * roots.alpha_star : 0.0;
  t.hausdorff_bound = dim - 4.0 * t.p_star;
  t.regular = dim < 4.0 * t.p_star;
  t.dim_cutoff = static_cast<int>(std::ceil(4.0 * t.p_star) - 1);
  return t;
}

double delta_margin(double alpha) {
  if (alpha <= 0.5) throw std::invalid_argument("delta_margin: alpha must exceed 1/2");
  return 2.0 * std::sqrt(2 * alpha - 1) / (alpha * std::sqrt(alpha)) - 1.0;
}

double lp_coefficient(double alpha) {
  if (alpha == 0.5) throw std::invalid_argument("lp_coefficient: pole at alpha = 1/2");
  if (alpha < 0.5) throw std::invalid_argument("lp_coefficient: alpha must exceed 1/2");
  return 1.0 - alpha * alpha * alpha / (8 * alpha - 4);
}

BootstrapChain bootstrap_chain(int dim, double alpha_start, double alpha_target) {
  if (dim <= 2) throw std::invalid_argument("bootstrap_chain: dim must be >= 3");
  if (alpha_start < 1) throw std::invalid_argument("bootstrap_chain: alpha_start must be >= 1");
  const double ratio = static_cast<double>(dim) / (dim - 2.0);
  const double ceiling = ratio * cubic_roots().alpha_star;
  BootstrapChain chain;
  chain.reachable = alpha_target < ceiling;
  double a = alpha_start;
  chain.steps.push_back(a);
  while (a < alpha_target && a < ceiling && chain.steps.size() < 256) {
    a *= ratio;
    chain.steps.push_back(a);
  }
  return chain;
}

HausdorffBound hausdorff_bound(int dim) {
  const auto t = exponent_table(dim);
  return {t.hausdorff_bound, t.regular, t.dim_cutoff};
}

}  // namespace bgf::exponents
