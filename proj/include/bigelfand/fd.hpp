// Finite-difference weights on arbitrary node sets (Fornberg recursion) and
// quadrature weights for nonuniform radial grids.
#pragma once

#include <span>
#include <vector>

namespace bgf::num {

// Weights of the m-th derivative at x0 from the given nodes. Exact for
// polynomials up to degree nodes.size()-1.
std::vector<double> fd_weights(std::span<const double> nodes, double x0, int m);

// Trapezoid weights on a (possibly nonuniform) strictly increasing grid.
std::vector<double> trapezoid_weights(std::span<const double> grid);

// Discrete Laplacian of nodal radial data: f'' + (dim-1)/r f', centered
// 3-point stencils inside, one-sided 4-point at the ends.
std::vector<double> radial_laplacian(std::span<const double> grid, std::span<const double> f, int dim);

}  // namespace bgf::num
