// Nonradial entire solutions by monotone iteration between the ordered pair
// (0,0) and the closed-form supersolutions (Z, W) on a reflection-symmetric
// box grid, with a radial fast path when all anisotropy coefficients agree.
#pragma once

#include <span>
#include <string>
#include <vector>

#include "bigelfand/kernels.hpp"
#include "bigelfand/numerics.hpp"

namespace bgf::nonradial {

struct AnisotropicQuadratic {
  std::vector<double> center;  // x0 (the grid path requires x0 = 0)
  std::vector<double> alphas;  // each > 1 + N/2

  double operator()(std::span<const double> x) const {
    double s = 0.0;
    for (std::size_t i = 0; i < alphas.size(); ++i) {
      const double d = x[i] - (center.empty() ? 0.0 : center[i]);
      s += alphas[i] * d * d;
    }
    return s;
  }
  void validate(int dim) const;
};

struct Supersolution {
  double Z = 0.0, W = 0.0;
  double neg_lap_Z = 0.0, neg_lap_W = 0.0;
};

// Z = (1+|x|^2)^{2-N/2}, W = (1+|x|^2)^{1-N/2}; -lap W is exact, -lap Z
// dominates 2(N-4) W pointwise.
Supersolution supersolution_pair(std::span<const double> x, int dim);

struct FieldPair {
  kernels::Box grid;
  std::vector<double> z, w;  // nodal values, axis-major flat order
  int iteration_count = 0;
  double residual_z = 0.0, residual_w = 0.0;  // coupled-system residual (max norm)
  double mono_violation = 0.0;                // max positive jump between iterates
  bool sandwich_ok = true;                    // 0 <= z <= Z, 0 <= w <= W nodewise
};

struct IterateConfig {
  double tol = 1e-10;
  int max_outer = 400;
  kernels::CgConfig cg{};
};

// Monotone iteration from (Z, W) with far-field-matched Dirichlet data on
// the outer faces: w ~ cw |x|^{2-N}, z ~ cw/(2(N-4)) |x|^{4-N} with cw from
// the analytic source mass prod_i sqrt(pi/alpha_i) (the e^z correction to
// the mass is below 1% and is absorbed by the reported residual).
FieldPair monotone_iterate(const AnisotropicQuadratic& p, const kernels::Box& grid,
                           const IterateConfig& cfg = {});

struct RadialReference {
  std::vector<double> r, z, w, dz, dw;
  double z0 = 0.0, w0 = 0.0;
  double interp_z(double rr) const;
  double interp_w(double rr) const;
};

// Shooting solution of the reduced radial system z'' + (N-1)z'/r = -w,
// w'' + (N-1)w'/r = -e^{-alpha r^2} e^z with decay at r_max; the oracle for
// the equal-coefficient grid path.
RadialReference radial_reference(double alpha, int dim, double r_max);

struct AssembledU {
  std::vector<double> u;          // -p + z on the grid
  double tail_sup = 0.0;          // max over the outer shell of |u + p| |x|^{N-4}
  double hardy_radius = 0.0;      // smallest rho: e^{1-p} <= C_HR/|x|^4 for |x| > rho
  bool stable_everywhere = false; // the inequality holds at every grid node
};

AssembledU assemble_u(const FieldPair& field, const AnisotropicQuadratic& p);

struct SphericalAverage {
  std::vector<double> radii;
  std::vector<double> u_bar, v_bar, exp_u_bar, avg_exp_u;
  bool jensen_ok = true;  // e^{u_bar} <= avg(e^u) at every radius
};

// Deterministic symmetric quadrature (axis, pair-diagonal, full-diagonal
// orbits, degree-5 exact) of u and v = -lap u = 2 sum(alpha) + w over
// spheres; multilinear interpolation on the folded grid.
SphericalAverage spherical_average(const FieldPair& field, const AnisotropicQuadratic& p,
                                   std::span<const double> radii);

// flat binary of doubles in axis-major order plus a JSON sidecar
void write_field(const FieldPair& f, const AnisotropicQuadratic& p, const std::string& base_path);
// axis slice (along e1) to CSV for plotting
void write_axis_slice_csv(const FieldPair& f, const AnisotropicQuadratic& p,
                          const std::string& path);

}  // namespace bgf::nonradial
