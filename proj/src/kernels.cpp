#include "bigelfand/kernels.hpp"

#include <cmath>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace bgf::kernels {

namespace {

// stencil body shared by the serial and OpenMP variants
inline void apply_rows(const Box& box, std::span<const double> in, std::span<double> out,
                       std::int64_t i0, std::int64_t i1) {
  const int dim = box.dim;
  const int n = box.n;
  const double inv_h2 = 1.0 / (box.h() * box.h());
  int c[16];
  box.coords(i0, c);
  for (std::int64_t i = i0; i < i1; ++i) {
    bool dirichlet = false;
    for (int d = 0; d < dim; ++d)
      if (c[d] == n - 1) dirichlet = true;
    if (!dirichlet) {
      double acc = 2.0 * dim * in[i];
      std::int64_t s = 1;
      for (int d = dim - 1; d >= 0; --d) {
        // reflection: the index-0 face sees its first interior neighbor twice
        acc -= (c[d] == 0) ? 2.0 * in[i + s] : in[i - s] + in[i + s];
        s *= n;
      }
      out[i] = acc * inv_h2;
    } else {
      out[i] = in[i];
    }
    for (int d = dim - 1; d >= 0; --d) {
      if (++c[d] < n) break;
      c[d] = 0;
    }
  }
}

constexpr std::int64_t kChunk = 4096;

inline double dot_chunked(std::span<const double> a, std::span<const double> b,
                          std::span<const double> w, bool parallel) {
  const std::int64_t n = static_cast<std::int64_t>(a.size());
  const std::int64_t nchunks = (n + kChunk - 1) / kChunk;
  std::vector<double> partial(static_cast<std::size_t>(nchunks), 0.0);
#pragma omp parallel for schedule(static) if (parallel)
  for (std::int64_t ci = 0; ci < nchunks; ++ci) {
    const std::int64_t lo = ci * kChunk, hi = std::min(n, lo + kChunk);
    double s = 0.0;
    for (std::int64_t i = lo; i < hi; ++i) s += a[i] * b[i] * w[i];
    partial[static_cast<std::size_t>(ci)] = s;
  }
  double total = 0.0;
  for (double s : partial) total += s;
  return total;
}

}  // namespace

void neg_laplacian_apply_serial(const Box& box, std::span<const double> in, std::span<double> out) {
  apply_rows(box, in, out, 0, box.total());
}

void neg_laplacian_apply_omp(const Box& box, std::span<const double> in, std::span<double> out) {
  const std::int64_t total = box.total();
#pragma omp parallel
  {
#ifdef _OPENMP
    const int nt = omp_get_num_threads();
    const int t = omp_get_thread_num();
#else
    const int nt = 1, t = 0;
#endif
    const std::int64_t lo = total * t / nt, hi = total * (t + 1) / nt;
    apply_rows(box, in, out, lo, hi);
  }
}

double dot_weighted_serial(std::span<const double> a, std::span<const double> b,
                           std::span<const double> w) {
  return dot_chunked(a, b, w, false);
}

double dot_weighted_omp(std::span<const double> a, std::span<const double> b,
                        std::span<const double> w) {
  return dot_chunked(a, b, w, true);
}

void axpy_serial(double alpha, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

void axpy_omp(double alpha, std::span<const double> x, std::span<double> y) {
  const std::int64_t n = static_cast<std::int64_t>(x.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

CgResult cg_poisson(const Box& box, std::span<const double> rhs, std::span<double> u,
                    const CgConfig& cfg) {
  const std::int64_t total = box.total();
  if (static_cast<std::int64_t>(rhs.size()) != total || static_cast<std::int64_t>(u.size()) != total)
    throw std::invalid_argument("cg_poisson: size mismatch");

  const bool par = cfg.parallel;
  auto apply = [&](std::span<const double> x, std::span<double> y) {
    par ? neg_laplacian_apply_omp(box, x, y) : neg_laplacian_apply_serial(box, x, y);
  };
  auto dot = [&](std::span<const double> x, std::span<const double> y, std::span<const double> w) {
    return par ? dot_weighted_omp(x, y, w) : dot_weighted_serial(x, y, w);
  };

  std::vector<double> mask(static_cast<std::size_t>(total));
  std::vector<double> mu(static_cast<std::size_t>(total));
  for (std::int64_t i = 0; i < total; ++i) {
    const bool dir = box.is_dirichlet(i);
    mask[i] = dir ? 0.0 : 1.0;
    mu[i] = dir ? 0.0 : box.fold_weight(i);
  }

  std::vector<double> r(static_cast<std::size_t>(total)), p(static_cast<std::size_t>(total)),
      ap(static_cast<std::size_t>(total));
  // r = rhs - A u on interior
  apply(u, r);
  const std::int64_t n64 = total;
#pragma omp parallel for schedule(static) if (par)
  for (std::int64_t i = 0; i < n64; ++i) r[i] = (rhs[i] - r[i]) * mask[i];

#pragma omp parallel for schedule(static) if (par)
  for (std::int64_t i = 0; i < n64; ++i) p[i] = r[i];

  double rz = dot(r, r, mu);
  const double rhs_norm = std::sqrt(std::max(dot(rhs, rhs, mu), 1e-300));

  CgResult res;
  for (int it = 0; it < cfg.max_iter; ++it) {
    apply(p, ap);
#pragma omp parallel for schedule(static) if (par)
    for (std::int64_t i = 0; i < n64; ++i) ap[i] *= mask[i];
    const double pap = dot(p, ap, mu);
    if (pap <= 0) break;
    const double alpha = rz / pap;
#pragma omp parallel for schedule(static) if (par)
    for (std::int64_t i = 0; i < n64; ++i) {
      u[i] += alpha * p[i] * mask[i];
      r[i] -= alpha * ap[i];
    }
    const double rn = std::sqrt(dot(r, r, mu));
    res.iterations = it + 1;
    res.residual = rn;
    if (rn <= cfg.tol * rhs_norm) {
      res.converged = true;
      return res;
    }
    const double rz_new = dot(r, r, mu);
    const double beta = rz_new / rz;
    rz = rz_new;
#pragma omp parallel for schedule(static) if (par)
    for (std::int64_t i = 0; i < n64; ++i) p[i] = r[i] + beta * p[i];
  }
  return res;
}

}  // namespace bgf::kernels
