#include "bigelfand/fd.hpp"

#include <algorithm>
#include <stdexcept>

namespace bgf::num {

std::vector<double> fd_weights(std::span<const double> x, double x0, int m) {
  const int n = static_cast<int>(x.size());
  if (n < m + 1) throw std::invalid_argument("fd_weights: too few nodes");
  std::vector<double> c(n * (m + 1), 0.0);
  auto C = [&](int i, int k) -> double& { return c[i * (m + 1) + k]; };
  double c1 = 1.0, c4 = x[0] - x0;
  C(0, 0) = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0, c5 = c4;
    c4 = x[i] - x0;
    for (int j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) C(i, k) = c1 * (k * C(i - 1, k - 1) - c5 * C(i - 1, k)) / c2;
        C(i, 0) = -c1 * c5 * C(i - 1, 0) / c2;
      }
      for (int k = mn; k >= 1; --k) C(j, k) = (c4 * C(j, k) - k * C(j, k - 1)) / c3;
      C(j, 0) = c4 * C(j, 0) / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) w[i] = C(i, m);
  return w;
}

std::vector<double> trapezoid_weights(std::span<const double> grid) {
  const std::size_t n = grid.size();
  if (n < 2) throw std::invalid_argument("trapezoid_weights: need at least 2 nodes");
  std::vector<double> w(n, 0.0);
  w[0] = 0.5 * (grid[1] - grid[0]);
  w[n - 1] = 0.5 * (grid[n - 1] - grid[n - 2]);
  for (std::size_t i = 1; i + 1 < n; ++i) w[i] = 0.5 * (grid[i + 1] - grid[i - 1]);
  return w;
}

std::vector<double> radial_laplacian(std::span<const double> grid, std::span<const double> f, int dim) {
  const int n = static_cast<int>(grid.size());
  if (n < 4) throw std::invalid_argument("radial_laplacian: need at least 4 nodes");
  if (f.size() != grid.size()) throw std::invalid_argument("radial_laplacian: size mismatch");
  std::vector<double> out(n, 0.0);
  for (int i = 0; i < n; ++i) {
    const bool end = (i == 0 || i == n - 1);
    const int kl = end ? 4 : 3;
    const int j0 = (i == 0) ? 0 : (i == n - 1 ? n - 4 : i - 1);
    std::span<const double> nodes(grid.data() + j0, kl);
    const auto w2 = fd_weights(nodes, grid[i], 2);
    const auto w1 = fd_weights(nodes, grid[i], 1);
    double s = 0.0;
    for (int k = 0; k < kl; ++k) s += (w2[k] + (dim - 1) / grid[i] * w1[k]) * f[j0 + k];
    out[i] = s;
  }
  return out;
}

}  // namespace bgf::num
