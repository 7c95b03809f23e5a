#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace saddlebounds {

/// Number of eigenvalues of the symmetric tridiagonal matrix (diag d,
/// off-diagonal e) strictly below x, counted through the signs of the Sturm
/// sequence q_1 = d_1 - x, q_i = d_i - x - e_{i-1}^2 / q_{i-1}.  Pivots are
/// clamped away from zero so the count stays monotone in x.
template <typename Scalar>
int sturm_count_below(const std::vector<Scalar>& d, const std::vector<Scalar>& e, Scalar x) {
  const Scalar pivmin = std::numeric_limits<Scalar>::min() / std::numeric_limits<Scalar>::epsilon();
  int count = 0;
  Scalar q = d[0] - x;
  if (q < Scalar(0)) ++count;
  for (std::size_t i = 1; i < d.size(); ++i) {
    if (std::abs(q) < pivmin) q = (q < Scalar(0)) ? -pivmin : pivmin;
    q = d[i] - x - e[i - 1] * e[i - 1] / q;
    if (q < Scalar(0)) ++count;
  }
  return count;
}

/// All eigenvalues of the symmetric tridiagonal matrix, ascending.  Each
/// eigenvalue is isolated by bisection inside the Gershgorin bracket and
/// refined until the bracket width falls below tol (absolute).
template <typename Scalar>
std::vector<Scalar> tridiagonal_eigenvalues(const std::vector<Scalar>& diag,
                                            const std::vector<Scalar>& offdiag,
                                            Scalar tol = Scalar(1e-13)) {
  const std::size_t n = diag.size();
  std::vector<Scalar> eigs(n);
  if (n == 0) return eigs;

  Scalar lo = diag[0], hi = diag[0];
  for (std::size_t i = 0; i < n; ++i) {
    const Scalar r = (i > 0 ? std::abs(offdiag[i - 1]) : Scalar(0)) +
                     (i + 1 < n ? std::abs(offdiag[i]) : Scalar(0));
    lo = std::min(lo, diag[i] - r);
    hi = std::max(hi, diag[i] + r);
  }
  const Scalar pad =
      std::numeric_limits<Scalar>::epsilon() * std::max({std::abs(lo), std::abs(hi), Scalar(1)}) * Scalar(8) + tol;
  lo -= pad;
  hi += pad;

  for (std::size_t j = 0; j < n; ++j) {
    Scalar a = lo, b = hi;
    while (b - a > tol) {
      const Scalar mid = a + (b - a) / Scalar(2);
      if (mid <= a || mid >= b) break;  // bracket at floating-point resolution
      if (sturm_count_below(diag, offdiag, mid) <= static_cast<int>(j))
        a = mid;
      else
        b = mid;
    }
    eigs[j] = a + (b - a) / Scalar(2);
  }
  return eigs;
}

}  // namespace saddlebounds
