#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "saddlebounds/tridiag_eig.hpp"
#include "saddlebounds/types.hpp"

namespace saddlebounds {

/// One concrete choice of the polynomial parameters gamma_E^(0..N) and
/// gamma_R^(1..N).
template <typename Scalar>
struct GammaAssignment {
  std::vector<Scalar> gammaE;  // gamma_E^(m), m = 0..N
  std::vector<Scalar> gammaR;  // gamma_R^(m), m = 1..N at index m-1

  int depth() const { return static_cast<int>(gammaR.size()); }
  Scalar gamma_E(int m) const { return gammaE.at(m); }
  Scalar gamma_R(int m) const { return gammaR.at(m - 1); }

  bool operator==(const GammaAssignment&) const = default;
};

/// Sorted roots of one polynomial of the sequence.
template <typename Scalar>
struct RootSet {
  int degree = 0;
  std::vector<Scalar> roots;  // ascending
  int neg_count = 0;
  int pos_count = 0;
};

enum class GammaKind { E, R };

namespace detail {

template <typename Scalar>
void require_gamma_order(int k, const GammaAssignment<Scalar>& g) {
  if (k < 0) throw std::invalid_argument("polynomial degree must be non-negative");
  if (k >= 1 && static_cast<int>(g.gammaE.size()) < k)
    throw std::invalid_argument("gammaE holds fewer parameters than degree " + std::to_string(k) + " needs");
  if (k >= 2 && static_cast<int>(g.gammaR.size()) < k - 1)
    throw std::invalid_argument("gammaR holds fewer parameters than degree " + std::to_string(k) + " needs");
}

/// Values U_0(lambda)..U_k(lambda) of the three-term recurrence.
template <typename Scalar>
std::vector<Scalar> eval_U_sequence(int k, Scalar lambda, const GammaAssignment<Scalar>& g) {
  require_gamma_order(k, g);
  std::vector<Scalar> u(k + 1);
  u[0] = Scalar(1);
  if (k >= 1) u[1] = lambda - g.gamma_E(0);
  for (int j = 1; j < k; ++j) {
    // sign factor (-1)^{j+1} on gamma_E^{(j)}
    const Scalar c = (j % 2 == 0) ? -g.gamma_E(j) : g.gamma_E(j);
    u[j + 1] = (lambda + c) * u[j] - g.gamma_R(j) * u[j - 1];
  }
  return u;
}

template <typename Scalar>
bool is_root_of_U(int k, Scalar xi, const GammaAssignment<Scalar>& g) {
  const Scalar value = eval_U_sequence(k, xi, g)[k];
  const Scalar scale = std::max(Scalar(1), Scalar(std::pow(std::abs(xi), k)));
  return std::abs(value) <= Scalar(1e-8) * scale;
}

}  // namespace detail

/// U_k(lambda) of the sequence U_0 = 1, U_1 = lambda - gamma_E^(0),
/// U_{k+1} = (lambda + (-1)^{k+1} gamma_E^(k)) U_k - gamma_R^(k) U_{k-1}.
template <typename Scalar>
Scalar eval_U(int k, Scalar lambda, const GammaAssignment<Scalar>& g) {
  return detail::eval_U_sequence(k, lambda, g)[k];
}

/// k x k symmetric tridiagonal matrix whose characteristic polynomial is U_k:
/// diagonal (-1)^j gamma_E^(j), off-diagonal sqrt(gamma_R^(j)).
template <typename Scalar>
Matrix<Scalar> tridiagonal_realization(int k, const GammaAssignment<Scalar>& g) {
  if (k < 1) throw std::invalid_argument("tridiagonal_realization: degree must be >= 1");
  detail::require_gamma_order(k, g);
  for (int j = 1; j < k; ++j)
    if (!(g.gamma_R(j) > Scalar(0)))
      throw std::invalid_argument("tridiagonal_realization: gamma_R must be positive");
  Matrix<Scalar> T = Matrix<Scalar>::Zero(k, k);
  for (int j = 0; j < k; ++j) T(j, j) = (j % 2 == 0) ? g.gamma_E(j) : -g.gamma_E(j);
  for (int j = 1; j < k; ++j) {
    const Scalar e = std::sqrt(g.gamma_R(j));
    T(j, j - 1) = e;
    T(j - 1, j) = e;
  }
  return T;
}

/// All k roots of U_k, ascending, computed as the eigenvalues of the
/// tridiagonal realization (real and distinct for gamma_R > 0).
template <typename Scalar>
RootSet<Scalar> roots_U(int k, const GammaAssignment<Scalar>& g) {
  if (k < 1) throw std::invalid_argument("roots_U: degree must be >= 1");
  detail::require_gamma_order(k, g);
  std::vector<Scalar> d(k), e(k - 1);
  for (int j = 0; j < k; ++j) d[j] = (j % 2 == 0) ? g.gamma_E(j) : -g.gamma_E(j);
  for (int j = 1; j < k; ++j) {
    if (!(g.gamma_R(j) > Scalar(0)))
      throw std::invalid_argument("roots_U: gamma_R must be positive (distinct real roots require it)");
    e[j - 1] = std::sqrt(g.gamma_R(j));
  }
  RootSet<Scalar> out;
  out.degree = k;
  out.roots = tridiagonal_eigenvalues(d, e);
  for (Scalar r : out.roots) {
    if (r < Scalar(0))
      ++out.neg_count;
    else if (r > Scalar(0))
      ++out.pos_count;
  }
  return out;
}

/// Closed-form partial derivative of U_{k+1} with respect to gamma_E^(m) or
/// gamma_R^(m), evaluated at a root xi of U_{k+1}:
///   dU/dgamma_E^(m) = (-1)^{m+1} U_m(xi)^2 / U_k(xi) * prod_{i=m+1..k} gamma_R^(i)
///   dU/dgamma_R^(m) = -U_m(xi) U_{m-1}(xi) / U_k(xi) * prod_{i=m+1..k} gamma_R^(i)
template <typename Scalar>
Scalar partial_derivative_U(int k_plus_1, int m, GammaKind which, Scalar xi,
                            const GammaAssignment<Scalar>& g) {
  const int k = k_plus_1 - 1;
  if (k < 0 || m > k || m < 0)
    throw std::invalid_argument("partial_derivative_U: need 0 <= m <= k");
  if (which == GammaKind::R && m < 1)
    throw std::invalid_argument("partial_derivative_U: gamma_R parameters start at m = 1");
  if (!detail::is_root_of_U(k_plus_1, xi, g))
    throw NumericalError("partial_derivative_U: xi is not a root of U_{k+1}");

  const std::vector<Scalar> u = detail::eval_U_sequence(k, xi, g);
  if (u[k] == Scalar(0))
    throw NumericalError("partial_derivative_U: U_k vanished at a root of U_{k+1} (interlacing excludes this)");
  Scalar prod = Scalar(1);
  for (int i = m + 1; i <= k; ++i) prod *= g.gamma_R(i);
  if (which == GammaKind::E) {
    const Scalar sign = (m % 2 == 0) ? Scalar(-1) : Scalar(1);  // (-1)^{m+1}
    return sign * u[m] * u[m] / u[k] * prod;
  }
  return -u[m] * u[m - 1] / u[k] * prod;
}

/// Sign of the movement of a root of U_{k+1} under an increase of the chosen
/// parameter: (-1)^m for gamma_E^(m), sgn(U_m(xi) U_{m-1}(xi)) for
/// gamma_R^(m).  Returns -1, 0 or +1 (0 marks a stationary root).
template <typename Scalar>
int root_sensitivity_sign(int k_plus_1, int m, GammaKind which, int root_index,
                          const GammaAssignment<Scalar>& g) {
  const int k = k_plus_1 - 1;
  if (k < 0 || m > k || m < 0)
    throw std::invalid_argument("root_sensitivity_sign: need 0 <= m <= k");
  if (which == GammaKind::R && m < 1)
    throw std::invalid_argument("root_sensitivity_sign: gamma_R parameters start at m = 1");
  const RootSet<Scalar> roots = roots_U(k_plus_1, g);
  const Scalar xi = roots.roots.at(root_index);
  if (which == GammaKind::E) return (m % 2 == 0) ? 1 : -1;
  const std::vector<Scalar> u = detail::eval_U_sequence(m, xi, g);
  const Scalar c = u[m] * (m >= 1 ? u[m - 1] : Scalar(1));
  if (c > Scalar(0)) return 1;
  if (c < Scalar(0)) return -1;
  return 0;
}

/// a_{k+1}(lambda) = U_k U'_{k+1} - U'_k U_{k+1} through the coupled
/// recurrence on values and lambda-derivatives; positive for all real lambda.
template <typename Scalar>
Scalar wronskian_a(int k_plus_1, Scalar lambda, const GammaAssignment<Scalar>& g) {
  if (k_plus_1 < 1) throw std::invalid_argument("wronskian_a: need k+1 >= 1");
  detail::require_gamma_order(k_plus_1, g);
  Scalar u_prev = Scalar(1), d_prev = Scalar(0);              // U_0, U_0'
  Scalar u_cur = lambda - g.gamma_E(0), d_cur = Scalar(1);    // U_1, U_1'
  for (int j = 1; j < k_plus_1; ++j) {
    const Scalar c = (j % 2 == 0) ? -g.gamma_E(j) : g.gamma_E(j);
    const Scalar u_next = (lambda + c) * u_cur - g.gamma_R(j) * u_prev;
    const Scalar d_next = u_cur + (lambda + c) * d_cur - g.gamma_R(j) * d_prev;
    u_prev = u_cur;
    d_prev = d_cur;
    u_cur = u_next;
    d_cur = d_next;
  }
  // u_prev = U_k, u_cur = U_{k+1}
  return u_prev * d_cur - d_prev * u_cur;
}

}  // namespace saddlebounds
