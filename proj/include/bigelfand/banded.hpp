// Symmetric banded matrices and the smallest eigenpair of the generalized
// pencil A x = nu B x (A positive definite, B positive semidefinite).
#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

namespace bgf::num {

// Lower-triangle band storage: band[d][i] = A(i+d, i) for d = 0..hb.
class BandedSym {
 public:
  BandedSym() = default;
  BandedSym(int n, int hb) : n_(n), hb_(hb), a_((hb + 1) * n, 0.0) {}

  int size() const { return n_; }
  int half_bandwidth() const { return hb_; }

  double& at(int i, int j) {
    if (i < j) std::swap(i, j);
    return a_[(i - j) * n_ + j];
  }
  double get(int i, int j) const {
    if (i < j) std::swap(i, j);
    if (i - j > hb_) return 0.0;
    return a_[(i - j) * n_ + j];
  }
  void add(int i, int j, double v) { at(i, j) += v; }

  // y = A x
  void multiply(std::span<const double> x, std::span<double> y) const;

  double max_abs_diag() const;

 private:
  int n_ = 0, hb_ = 0;
  std::vector<double> a_;
};

// Energy/potential form pair on a radial grid. Both forms are symmetric by
// construction; b is diagonal (nodal quadrature of a pointwise potential).
struct QuadraticFormPair {
  BandedSym a;
  std::vector<double> b_diag;
  std::vector<double> grid;
};

struct EigResult {
  double nu = 0.0;                   // +inf sentinel when B is numerically zero
  std::vector<double> eigvec;
  bool b_zero = false;
};

// Number of pencil eigenvalues below sigma, by the inertia of A - sigma B
// (LDL^T pivot signs). Valid for B positive semidefinite.
int pencil_count_below(const BandedSym& a, std::span<const double> b_diag, double sigma);

// Smallest generalized eigenvalue on the range of B: Sturm bisection for the
// value, shifted inverse iteration for the vector. Deterministic.
EigResult min_generalized_eig(const QuadraticFormPair& forms);

// Factor A - sigma*B once and solve (A - sigma*B) x = rhs. Used by the
// inverse iteration; exposed for reuse.
class BandedLdlt {
 public:
  BandedLdlt(const BandedSym& a, std::span<const double> b_diag, double sigma);
  void solve(std::span<double> x) const;  // in place
  int negative_pivots() const { return neg_; }

 private:
  int n_ = 0, hb_ = 0;
  std::vector<double> l_;  // unit lower band
  std::vector<double> d_;
  int neg_ = 0;
};

}  // namespace bgf::num
