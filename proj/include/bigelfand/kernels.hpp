// Data-parallel grid kernels for the tensor-product box solver: negative
// Laplacian stencil apply, weighted reductions, and preconditioned CG.
// Every kernel has a serial reference implementation kept for testing; the
// OpenMP versions produce bitwise-identical results (elementwise updates,
// fixed-chunk deterministic reductions).
#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace bgf::kernels {

// uniform grid on the positive orthant [0, L]^dim, nodes 0..n-1 per axis;
// reflection (even symmetry) across index 0 faces, Dirichlet at index n-1
struct Box {
  int dim = 5;
  int n = 13;
  double length = 6.0;

  double h() const { return length / (n - 1); }
  std::int64_t total() const {
    std::int64_t t = 1;
    for (int d = 0; d < dim; ++d) t *= n;
    return t;
  }
  std::int64_t stride(int axis) const {
    std::int64_t s = 1;
    for (int d = axis + 1; d < dim; ++d) s *= n;
    return s;
  }
  bool is_dirichlet(std::int64_t idx) const {
    for (int d = dim - 1; d >= 0; --d) {
      if (idx % n == n - 1) return true;
      idx /= n;
    }
    return false;
  }
  // fold multiplicity: 2^(number of nonzero coordinates); makes the
  // reflected operator self-adjoint in the weighted inner product
  double fold_weight(std::int64_t idx) const {
    double w = 1.0;
    for (int d = dim - 1; d >= 0; --d) {
      if (idx % n != 0) w *= 2.0;
      idx /= n;
    }
    return w;
  }
  // coordinates of a flat index
  void coords(std::int64_t idx, int* c) const {
    for (int d = dim - 1; d >= 0; --d) {
      c[d] = static_cast<int>(idx % n);
      idx /= n;
    }
  }
};

// out = (-Laplacian) in on interior nodes; Dirichlet nodes copy their input
// (they are fixed data for the solver). Reflection at index-0 faces.
void neg_laplacian_apply_serial(const Box& box, std::span<const double> in, std::span<double> out);
void neg_laplacian_apply_omp(const Box& box, std::span<const double> in, std::span<double> out);

// deterministic weighted dot product: fixed 4096-element chunks summed
// serially, independent of thread count
double dot_weighted_serial(std::span<const double> a, std::span<const double> b,
                           std::span<const double> w);
double dot_weighted_omp(std::span<const double> a, std::span<const double> b,
                        std::span<const double> w);

// y += alpha * x on interior nodes
void axpy_serial(double alpha, std::span<const double> x, std::span<double> y);
void axpy_omp(double alpha, std::span<const double> x, std::span<double> y);

struct CgResult {
  int iterations = 0;
  double residual = 0.0;
  bool converged = false;
};

struct CgConfig {
  double tol = 1e-12;
  int max_iter = 5000;
  bool parallel = true;
};

// Solve -Laplacian u = rhs with Dirichlet data already stored in u at the
// index n-1 faces; interior entries of u are the initial guess (warm start).
// Jacobi-preconditioned CG in the fold-weighted inner product.
CgResult cg_poisson(const Box& box, std::span<const double> rhs, std::span<double> u,
                    const CgConfig& cfg);

}  // namespace bgf::kernels
