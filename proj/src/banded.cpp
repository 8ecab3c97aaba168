#include "bigelfand/banded.hpp"

#include <algorithm>
#include <cmath>

namespace bgf::num {

void BandedSym::multiply(std::span<const double> x, std::span<double> y) const {
  for (int i = 0; i < n_; ++i) {
    double s = a_[i] * x[i];
    for (int d = 1; d <= hb_; ++d) {
      if (i - d >= 0) s += a_[d * n_ + (i - d)] * x[i - d];
      if (i + d < n_) s += a_[d * n_ + i] * x[i + d];
    }
    y[i] = s;
  }
}

double BandedSym::max_abs_diag() const {
  double m = 0.0;
  for (int i = 0; i < n_; ++i) m = std::max(m, std::abs(a_[i]));
  return m;
}

BandedLdlt::BandedLdlt(const BandedSym& a, std::span<const double> b_diag, double sigma)
    : n_(a.size()), hb_(a.half_bandwidth()), l_((hb_ + 1) * n_, 0.0), d_(n_, 0.0) {
  // band working copy of A - sigma B
  for (int j = 0; j < n_; ++j) {
    for (int d = 0; d <= hb_ && j + d < n_; ++d) l_[d * n_ + j] = a.get(j + d, j);
    l_[j] -= sigma * b_diag[j];
  }
  // relative pivot floor: an exact hit on an eigenvalue of a leading minor
  // produces a zero pivot, which must not poison the inertia count
  double scale = 0.0;
  for (int j = 0; j < n_; ++j) scale = std::max(scale, std::abs(l_[j]));
  const double pivmin = 1e-14 * scale + 1e-280;
  for (int j = 0; j < n_; ++j) {
    double dj = l_[j];
    const int kmin = std::max(0, j - hb_);
    for (int k = kmin; k < j; ++k) {
      const double ljk = l_[(j - k) * n_ + k];
      dj -= ljk * ljk * d_[k];
    }
    if (std::abs(dj) < pivmin) dj = (dj <= 0 ? -pivmin : pivmin);
    d_[j] = dj;
    if (dj < 0) ++neg_;
    for (int i = j + 1; i <= std::min(n_ - 1, j + hb_); ++i) {
      double lij = l_[(i - j) * n_ + j];
      const int km = std::max(0, i - hb_);
      for (int k = std::max(km, kmin); k < j; ++k) {
        if (i - k <= hb_) lij -= l_[(i - k) * n_ + k] * l_[(j - k) * n_ + k] * d_[k];
      }
      l_[(i - j) * n_ + j] = lij / dj;
    }
  }
}

void BandedLdlt::solve(std::span<double> x) const {
  for (int i = 0; i < n_; ++i) {
    double s = x[i];
    for (int d = 1; d <= hb_ && i - d >= 0; ++d) s -= l_[d * n_ + (i - d)] * x[i - d];
    x[i] = s;
  }
  for (int i = 0; i < n_; ++i) x[i] /= d_[i];
  for (int i = n_ - 1; i >= 0; --i) {
    double s = x[i];
    for (int d = 1; d <= hb_ && i + d < n_; ++d) s -= l_[d * n_ + i] * x[i + d];
    x[i] = s;
  }
}

int pencil_count_below(const BandedSym& a, std::span<const double> b_diag, double sigma) {
  return BandedLdlt(a, b_diag, sigma).negative_pivots();
}

EigResult min_generalized_eig(const QuadraticFormPair& forms) {
  const int n = forms.a.size();
  if (n == 0) throw std::invalid_argument("min_generalized_eig: empty pencil");
  if (static_cast<int>(forms.b_diag.size()) != n)
    throw std::invalid_argument("min_generalized_eig: dimension mismatch");

  EigResult res;
  double bmax = 0.0;
  for (double b : forms.b_diag) {
    if (b < 0) throw std::invalid_argument("min_generalized_eig: B must be positive semidefinite");
    bmax = std::max(bmax, b);
  }
  if (bmax <= forms.a.max_abs_diag() * 1e-300 || bmax == 0.0) {
    res.nu = std::numeric_limits<double>::infinity();
    res.b_zero = true;
    return res;
  }

  // upper bound from coordinate Rayleigh quotients
  double hi = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i)
    if (forms.b_diag[i] > 0) hi = std::min(hi, forms.a.get(i, i) / forms.b_diag[i]);
  hi *= 1.0000001;
  hi += 1e-30;
  double lo = 0.0;
  // widen until the count brackets exactly the first eigenvalue
  while (pencil_count_below(forms.a, forms.b_diag, hi) < 1) hi *= 2.0;
  for (int it = 0; it < 200 && (hi - lo) > 1e-13 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (pencil_count_below(forms.a, forms.b_diag, mid) >= 1) hi = mid;
    else lo = mid;
  }
  res.nu = 0.5 * (lo + hi);

  // inverse iteration at a shift just below nu
  const double sigma = lo - 1e-8 * std::max(1.0, std::abs(lo));
  BandedLdlt fact(forms.a, forms.b_diag, sigma);
  std::vector<double> x(n, 1.0), bx(n);
  for (int it = 0; it < 8; ++it) {
    for (int i = 0; i < n; ++i) bx[i] = forms.b_diag[i] * x[i];
    fact.solve(bx);
    double nrm = 0.0;
    for (double c : bx) nrm += c * c;
    nrm = std::sqrt(nrm);
    if (nrm == 0.0) break;
    for (int i = 0; i < n; ++i) x[i] = bx[i] / nrm;
  }
  res.eigvec = std::move(x);
  return res;
}

}  // namespace bgf::num
