#pragma once

#include <Eigen/Dense>

#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "saddlebounds/block_system.hpp"
#include "saddlebounds/types.hpp"

namespace saddlebounds {

/// Per-level recipe for approximating a Schur complement.
template <typename Scalar>
struct ApproxStrategy {
  enum class Kind { exact, jacobi, scaled_identity, spectral_window };

  Kind kind = Kind::exact;
  Scalar scale = Scalar(1);              // scaled_identity
  Scalar lo = Scalar(1), hi = Scalar(1);  // spectral_window

  static ApproxStrategy Exact() { return {}; }
  static ApproxStrategy Jacobi() {
    ApproxStrategy s;
    s.kind = Kind::jacobi;
    return s;
  }
  static ApproxStrategy ScaledIdentity(Scalar c) {
    if (!(c > Scalar(0)))
      throw std::invalid_argument("scaled_identity: scale must be positive");
    ApproxStrategy s;
    s.kind = Kind::scaled_identity;
    s.scale = c;
    return s;
  }
  static ApproxStrategy SpectralWindow(Scalar lo, Scalar hi) {
    if (!(lo > Scalar(0)) || lo > hi)
      throw std::invalid_argument("spectral_window: requires 0 < lo <= hi");
    ApproxStrategy s;
    s.kind = Kind::spectral_window;
    s.lo = lo;
    s.hi = hi;
    return s;
  }

  std::string tag() const {
    switch (kind) {
      case Kind::exact: return "exact";
      case Kind::jacobi: return "jacobi";
      case Kind::scaled_identity:
        return "scaled_identity(" + detail::format_scalar(scale) + ")";
      case Kind::spectral_window:
        return "spectral_window(" + detail::format_scalar(lo) + "," + detail::format_scalar(hi) + ")";
    }
    return "?";
  }
};

/// Chain of exact complements S_k, perturbed complements S~_k and SPD
/// approximations S^_k forming the block-diagonal preconditioner.  Every S^_k
/// is factorized once at construction; all later solves reuse the factors.
template <typename Scalar>
struct SchurChain {
  std::vector<Matrix<Scalar>> exact_S;      // S_0..S_N (empty when not computed)
  std::vector<Matrix<Scalar>> perturbed_S;  // S~_k for k = 1..N (index k-1)
  std::vector<Matrix<Scalar>> approx_S;     // S^_0..S^_N
  std::vector<std::string> strategy_tags;
  std::vector<Eigen::LLT<Matrix<Scalar>>> factors;
  bool all_exact = false;

  int depth() const { return static_cast<int>(approx_S.size()) - 1; }

  Index total_dim() const {
    Index n = 0;
    for (const auto& S : approx_S) n += S.rows();
    return n;
  }

  /// Solves S^_k y = x with the stored factor.
  Vector<Scalar> solve(int k, const Vector<Scalar>& x) const { return factors.at(k).solve(x); }

  /// Recomputes the factors from approx_S (for hand-assembled chains).
  void refresh_factors() {
    factors.clear();
    for (std::size_t k = 0; k < approx_S.size(); ++k) {
      factors.emplace_back(approx_S[k]);
      if (factors.back().info() != Eigen::Success)
        throw NumericalError("SchurChain: S^_" + std::to_string(k) + " is not positive definite");
    }
  }
};

namespace detail {

/// B * S^{-1} * B^T through the Cholesky factor of S; symmetric by
/// construction (rank update with W = L^{-1} B^T).
template <typename Scalar>
Matrix<Scalar> schur_update(const Eigen::LLT<Matrix<Scalar>>& llt, const Matrix<Scalar>& B) {
  Matrix<Scalar> W = llt.matrixL().solve(B.transpose());
  Matrix<Scalar> M = Matrix<Scalar>::Zero(B.rows(), B.rows());
  M.template selfadjointView<Eigen::Lower>().rankUpdate(W.transpose());
  return M.template selfadjointView<Eigen::Lower>();
}

template <typename Scalar>
Eigen::LLT<Matrix<Scalar>> factor_spd(const Matrix<Scalar>& S, const std::string& what) {
  Eigen::LLT<Matrix<Scalar>> llt(S);
  if (llt.info() != Eigen::Success)
    throw NumericalError(what + " is not positive definite");
  return llt;
}

/// Applies one approximation strategy to an SPD target.
template <typename Scalar>
Matrix<Scalar> approximate_spd(const Matrix<Scalar>& target, const ApproxStrategy<Scalar>& strategy) {
  using Kind = typename ApproxStrategy<Scalar>::Kind;
  const Index n = target.rows();
  switch (strategy.kind) {
    case Kind::exact:
      return target;
    case Kind::jacobi: {
      Vector<Scalar> d = target.diagonal();
      for (Index i = 0; i < n; ++i) {
        if (d(i) == Scalar(0))
          throw NumericalError("jacobi approximation is singular: zero diagonal entry at index " +
                               std::to_string(i));
        if (d(i) < Scalar(0))
          throw NumericalError("jacobi approximation: negative diagonal entry at index " +
                               std::to_string(i));
      }
      return Matrix<Scalar>(d.asDiagonal());
    }
    case Kind::scaled_identity:
      return strategy.scale * Matrix<Scalar>::Identity(n, n);
    case Kind::spectral_window: {
      Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> es(target, Eigen::EigenvaluesOnly);
      const Scalar tmin = es.eigenvalues().minCoeff();
      const Scalar tmax = es.eigenvalues().maxCoeff();
      if (!(tmin > Scalar(0)))
        throw NumericalError("spectral_window: target is not positive definite");
      if (strategy.lo == strategy.hi)
        return target / strategy.lo;
      if (tmax - tmin <= std::numeric_limits<Scalar>::epsilon() * std::max(Scalar(1), tmax))
        return (tmin / strategy.lo) * Matrix<Scalar>::Identity(n, n);
      // Affine blend c1*T + c2*I mapping the pencil spectrum of (T, blend)
      // onto [lo, hi] endpoint-exactly: t -> t / (c1 t + c2).
      const Scalar c1 = (tmax / strategy.hi - tmin / strategy.lo) / (tmax - tmin);
      const Scalar c2 = tmin / strategy.lo - c1 * tmin;
      return c1 * target + c2 * Matrix<Scalar>::Identity(n, n);
    }
  }
  throw std::logic_error("unreachable");
}

}  // namespace detail

/// Builds the exact chain S_0 = A_0, S_k = A_k + B_k S_{k-1}^{-1} B_k^T.
template <typename Scalar>
SchurChain<Scalar> build_exact_schur_chain(const BlockSaddleSystem<Scalar>& sys) {
  if (sys.shape() != SystemShape::standard)
    throw DimensionError("build_exact_schur_chain: requires a standard-shape system");
  SchurChain<Scalar> chain;
  chain.all_exact = true;
  chain.exact_S.push_back(sys.diag_block(0));
  chain.factors.push_back(detail::factor_spd(chain.exact_S[0], std::string("S_0")));
  for (int k = 1; k <= sys.depth(); ++k) {
    Matrix<Scalar> S = sys.diag_block(k);
    S += detail::schur_update(chain.factors[k - 1], sys.offdiag_block(k));
    S = S.template selfadjointView<Eigen::Lower>();
    chain.exact_S.push_back(S);
    chain.perturbed_S.push_back(S);
    chain.factors.push_back(detail::factor_spd(S, "S_" + std::to_string(k)));
  }
  chain.approx_S = chain.exact_S;
  chain.strategy_tags.assign(sys.depth() + 1, "exact");
  return chain;
}

/// Builds the inexact chain: S^_0 approximates A_0, S~_k is recomputed with
/// the actual S^_{k-1}, and S^_k approximates S~_k.  The exact chain is
/// computed alongside for diagnostics when the shape allows it.
template <typename Scalar>
SchurChain<Scalar> build_inexact_chain(const BlockSaddleSystem<Scalar>& sys,
                                       const std::vector<ApproxStrategy<Scalar>>& strategies) {
  const int N = sys.depth();
  if (static_cast<int>(strategies.size()) != N + 1)
    throw std::invalid_argument("build_inexact_chain: expected one strategy per level (N+1)");
  SchurChain<Scalar> chain;
  chain.all_exact = true;
  for (const auto& s : strategies)
    chain.all_exact = chain.all_exact && s.kind == ApproxStrategy<Scalar>::Kind::exact;

  chain.approx_S.push_back(detail::approximate_spd(sys.diag_block(0), strategies[0]));
  chain.strategy_tags.push_back(strategies[0].tag());
  chain.factors.push_back(detail::factor_spd(chain.approx_S[0], std::string("S^_0")));
  for (int k = 1; k <= N; ++k) {
    Matrix<Scalar> St = sys.diag_block(k);
    St += detail::schur_update(chain.factors[k - 1], sys.offdiag_block(k));
    St = St.template selfadjointView<Eigen::Lower>();
    chain.perturbed_S.push_back(St);
    chain.approx_S.push_back(detail::approximate_spd(St, strategies[k]));
    chain.strategy_tags.push_back(strategies[k].tag());
    chain.factors.push_back(detail::factor_spd(chain.approx_S[k], "S^_" + std::to_string(k)));
  }
  if (sys.shape() == SystemShape::standard) {
    SchurChain<Scalar> exact = build_exact_schur_chain(sys);
    chain.exact_S = std::move(exact.exact_S);
  }
  return chain;
}

/// Applies P^{-1} = blkdiag(S^_0,...,S^_N)^{-1} blockwise.
template <typename Scalar>
Vector<Scalar> apply_preconditioner(const SchurChain<Scalar>& chain, const Vector<Scalar>& v) {
  if (v.size() != chain.total_dim())
    throw DimensionError("apply_preconditioner: vector length does not match the chain");
  Vector<Scalar> out(v.size());
  Index offset = 0;
  for (std::size_t k = 0; k < chain.approx_S.size(); ++k) {
    const Index nk = chain.approx_S[k].rows();
    out.segment(offset, nk) = chain.factors[k].solve(v.segment(offset, nk));
    offset += nk;
  }
  return out;
}

}  // namespace saddlebounds
