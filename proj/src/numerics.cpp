#include "bigelfand/numerics.hpp"

namespace bgf::num {

PowerFit fit_power_law(std::span<const double> radii, std::span<const double> values) {
  if (radii.size() != values.size()) throw std::invalid_argument("fit_power_law: size mismatch");
  if (radii.size() < 3) throw std::invalid_argument("fit_power_law: need at least 3 samples");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (values[i] <= 0) throw std::invalid_argument("fit_power_law: nonpositive value");
    if (i > 0 && radii[i] <= radii[i - 1])
      throw std::invalid_argument("fit_power_law: radii must be strictly increasing");
  }
  const std::size_t n = radii.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = std::log(radii[i]), y = std::log(values[i]);
    sx += x; sy += y; sxx += x * x; sxy += x * y;
  }
  const double det = n * sxx - sx * sx;
  const double slope = (n * sxy - sx * sy) / det;
  const double intercept = (sy * sxx - sx * sxy) / det;
  PowerFit fit;
  fit.exponent = slope;
  fit.constant = std::exp(intercept);
  fit.n_points = n;
  for (std::size_t i = 0; i < n; ++i) {
    const double res = std::abs(std::log(values[i]) - (intercept + slope * std::log(radii[i])));
    fit.max_residual = std::max(fit.max_residual, res);
  }
  return fit;
}

}  // namespace bgf::num
