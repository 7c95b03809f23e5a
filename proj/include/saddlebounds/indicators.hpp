#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "saddlebounds/block_system.hpp"
#include "saddlebounds/schur_chain.hpp"
#include "saddlebounds/types.hpp"

namespace saddlebounds {

/// Spectral indicator intervals: [alpha_E^(k), beta_E^(k)] for the pencils
/// (A_k, S^_k) and [alpha_R^(k), beta_R^(k)] for the R_k R_k^T pencils.  In
/// the rectangular-tail case the last R interval refers to R_N^T R_N.
template <typename Scalar>
struct IndicatorSet {
  int N = 0;
  std::vector<Scalar> alphaE, betaE;  // length N+1
  std::vector<Scalar> alphaR, betaR;  // level k = 1..N at index k-1
  bool rect_tail = false;

  Interval<Scalar> E(int k) const { return {alphaE.at(k), betaE.at(k)}; }
  Interval<Scalar> R(int k) const { return {alphaR.at(k - 1), betaR.at(k - 1)}; }

  bool operator==(const IndicatorSet&) const = default;
};

namespace detail {

/// Extremal eigenvalues of the symmetric pencil (A, B) with B SPD, reduced by
/// the Cholesky congruence of B.
template <typename Scalar>
Interval<Scalar> pencil_extremes(const Matrix<Scalar>& A, const Matrix<Scalar>& B) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Matrix<Scalar>> es(A, B,
                                                              Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
  const auto& ev = es.eigenvalues();
  return {ev.minCoeff(), ev.maxCoeff()};
}

}  // namespace detail

/// Extremal eigenvalues of the pencil (A_k, S^_k), the spectrum of E_k.
template <typename Scalar>
Interval<Scalar> compute_E_interval(const BlockSaddleSystem<Scalar>& sys,
                                    const SchurChain<Scalar>& chain, int k) {
  return detail::pencil_extremes(sys.diag_block(k), chain.approx_S.at(k));
}

/// Extremal eigenvalues of R_k R_k^T via the pencil
/// (B_k S^_{k-1}^{-1} B_k^T, S^_k), or of R_k^T R_k via
/// (B_k^T S^_k^{-1} B_k, S^_{k-1}) at a rectangular tail.  The lower endpoint
/// must clear the rank tolerance 1e-10 * beta_R.
template <typename Scalar>
Interval<Scalar> compute_R_interval(const BlockSaddleSystem<Scalar>& sys,
                                    const SchurChain<Scalar>& chain, int k) {
  const Matrix<Scalar>& B = sys.offdiag_block(k);
  Interval<Scalar> iv;
  if (sys.rectangular_tail() && k == sys.depth()) {
    Matrix<Scalar> M = detail::schur_update(chain.factors.at(k), Matrix<Scalar>(B.transpose()));
    iv = detail::pencil_extremes(M, chain.approx_S.at(k - 1));
  } else {
    Matrix<Scalar> M = detail::schur_update(chain.factors.at(k - 1), B);
    iv = detail::pencil_extremes(M, chain.approx_S.at(k));
  }
  if (!(iv.lo > Scalar(1e-10) * iv.hi))
    throw NumericalError("compute_R_interval: alpha_R^(" + std::to_string(k) +
                         ") is not positive; B_" + std::to_string(k) + " lost rank");
  return iv;
}

/// Relative residual of the congruence-free identity
/// (B_k S^_{k-1}^{-1} B_k^T + A_k) = S~_k; at most ~1e-12 for a valid chain.
template <typename Scalar>
Scalar sbar_identity_residual(const BlockSaddleSystem<Scalar>& sys,
                              const SchurChain<Scalar>& chain, int k) {
  if (sys.rectangular_tail() && k == sys.depth())
    throw std::invalid_argument("sbar_identity_residual: level must be standard-shape");
  Matrix<Scalar> lhs = detail::schur_update(chain.factors.at(k - 1), sys.offdiag_block(k));
  lhs += sys.diag_block(k);
  const Matrix<Scalar>& st = chain.perturbed_S.at(k - 1);
  return (lhs - st).norm() / st.norm();
}

/// Aggregates all E and R intervals; tiny negative alpha_E floor noise from
/// singular A_k (k >= 1) is clamped to zero.
template <typename Scalar>
IndicatorSet<Scalar> compute_indicator_set(const BlockSaddleSystem<Scalar>& sys,
                                           const SchurChain<Scalar>& chain) {
  const int N = sys.depth();
  if (N < 1)
    throw std::invalid_argument("compute_indicator_set: needs at least one off-diagonal level");
  IndicatorSet<Scalar> ind;
  ind.N = N;
  ind.rect_tail = sys.rectangular_tail();
  for (int k = 0; k <= N; ++k) {
    Interval<Scalar> e = compute_E_interval(sys, chain, k);
    if (k >= 1 && e.lo < Scalar(0) && e.lo >= Scalar(-1e-10) * std::max(Scalar(1), std::abs(e.hi)))
      e.lo = Scalar(0);
    ind.alphaE.push_back(e.lo);
    ind.betaE.push_back(e.hi);
  }
  for (int k = 1; k <= N; ++k) {
    const Interval<Scalar> r = compute_R_interval(sys, chain, k);
    ind.alphaR.push_back(r.lo);
    ind.betaR.push_back(r.hi);
  }
  return ind;
}

/// Throws when the set violates its admissibility invariants.
template <typename Scalar>
void validate_indicators(const IndicatorSet<Scalar>& ind) {
  if (ind.N < 1) throw std::invalid_argument("IndicatorSet: N must be >= 1");
  if (static_cast<int>(ind.alphaE.size()) != ind.N + 1 ||
      static_cast<int>(ind.betaE.size()) != ind.N + 1 ||
      static_cast<int>(ind.alphaR.size()) != ind.N ||
      static_cast<int>(ind.betaR.size()) != ind.N)
    throw std::invalid_argument("IndicatorSet: array lengths do not match N");
  if (!(ind.alphaE[0] > Scalar(0)))
    throw std::invalid_argument("IndicatorSet: alpha_E^(0) must be positive");
  for (int k = 0; k <= ind.N; ++k) {
    if (k >= 1 && ind.alphaE[k] < Scalar(0))
      throw std::invalid_argument("IndicatorSet: alpha_E^(" + std::to_string(k) + ") must be >= 0");
    if (ind.alphaE[k] > ind.betaE[k])
      throw std::invalid_argument("IndicatorSet: alpha_E <= beta_E violated at level " + std::to_string(k));
  }
  for (int k = 1; k <= ind.N; ++k) {
    if (!(ind.alphaR[k - 1] > Scalar(0)))
      throw std::invalid_argument("IndicatorSet: alpha_R^(" + std::to_string(k) + ") must be positive");
    if (ind.alphaR[k - 1] > ind.betaR[k - 1])
      throw std::invalid_argument("IndicatorSet: alpha_R <= beta_R violated at level " + std::to_string(k));
  }
}

}  // namespace saddlebounds
