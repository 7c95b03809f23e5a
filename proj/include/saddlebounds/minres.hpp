#pragma once

#include <Eigen/Dense>

#include <chrono>
#include <cmath>
#include <vector>

#include "saddlebounds/block_system.hpp"
#include "saddlebounds/bounds.hpp"
#include "saddlebounds/schur_chain.hpp"
#include "saddlebounds/types.hpp"

namespace saddlebounds {

template <typename Scalar>
struct SolveReport {
  int iterations = 0;
  std::vector<Scalar> residual_history;  // relative preconditioned residual per iteration
  bool converged = false;
  bool breakdown = false;
  Scalar wall_time_seconds{};
  Vector<Scalar> solution;
};

/// Preconditioned MINRES (Paige/Saunders three-term Lanczos with Givens QR,
/// no re-orthogonalization).  The Lanczos pairs (v_j, z_j = P^{-1} v_j) carry
/// the preconditioner through one solve per iteration; the recurred quantity
/// |phibar_j| is the P^{-1}-norm of the residual and is non-increasing by
/// construction.  Stops when the relative preconditioned residual falls
/// below tol.
template <typename Scalar>
SolveReport<Scalar> minres(const Matrix<Scalar>& A, const SchurChain<Scalar>& chain,
                           const Vector<Scalar>& b, Scalar tol, int maxit) {
  const auto t0 = std::chrono::steady_clock::now();
  SolveReport<Scalar> report;
  const Index n = A.rows();
  if (b.size() != n || chain.total_dim() != n)
    throw DimensionError("minres: operator, preconditioner and rhs sizes differ");

  Vector<Scalar> x = Vector<Scalar>::Zero(n);
  Vector<Scalar> r = b;
  Vector<Scalar> z = apply_preconditioner(chain, r);
  const Scalar beta1_sq = r.dot(z);
  if (beta1_sq < Scalar(0)) throw NumericalError("minres: preconditioner is not positive definite");
  const Scalar beta1 = std::sqrt(beta1_sq);
  if (beta1 == Scalar(0)) {
    report.converged = true;
    report.residual_history = {Scalar(0)};
    report.solution = x;
    report.wall_time_seconds =
        std::chrono::duration<Scalar>(std::chrono::steady_clock::now() - t0).count();
    return report;
  }

  Vector<Scalar> v = r / beta1;
  Vector<Scalar> zv = z / beta1;
  Vector<Scalar> v_prev = Vector<Scalar>::Zero(n);
  Vector<Scalar> w_prev = Vector<Scalar>::Zero(n), w_prev2 = Vector<Scalar>::Zero(n);
  Scalar beta = Scalar(0);  // off-diagonal entering the current column
  Scalar c_km1 = Scalar(1), s_km1 = Scalar(0);
  Scalar c_km2 = Scalar(1), s_km2 = Scalar(0);
  Scalar phibar = beta1;
  report.residual_history = {Scalar(1)};

  for (int j = 1; j <= maxit; ++j) {
    Vector<Scalar> p = A * zv;
    const Scalar alpha = zv.dot(p);
    p -= alpha * v;
    if (j > 1) p -= beta * v_prev;
    Vector<Scalar> z_next = apply_preconditioner(chain, p);
    Scalar beta_next_sq = p.dot(z_next);
    if (beta_next_sq < Scalar(0)) beta_next_sq = Scalar(0);
    const Scalar beta_next = std::sqrt(beta_next_sq);

    // Givens update of column j of the Lanczos tridiagonal.
    const Scalar eps_j = s_km2 * beta;
    const Scalar delta = c_km2 * beta;
    const Scalar sup_j = c_km1 * delta + s_km1 * alpha;
    const Scalar gbar = -s_km1 * delta + c_km1 * alpha;
    const Scalar gamma = std::hypot(gbar, beta_next);
    if (gamma == Scalar(0)) {
      report.breakdown = true;
      break;
    }
    const Scalar c = gbar / gamma;
    const Scalar s = beta_next / gamma;
    const Scalar phi = c * phibar;
    phibar = -s * phibar;

    Vector<Scalar> w = (zv - sup_j * w_prev - eps_j * w_prev2) / gamma;
    x += phi * w;
    w_prev2.swap(w_prev);
    w_prev = std::move(w);

    report.iterations = j;
    report.residual_history.push_back(std::abs(phibar) / beta1);
    if (std::abs(phibar) / beta1 <= tol) {
      report.converged = true;
      break;
    }
    if (beta_next <= std::numeric_limits<Scalar>::epsilon() * beta1) {
      // Krylov space exhausted before the tolerance was met.
      report.breakdown = true;
      break;
    }

    v_prev.swap(v);
    v = p / beta_next;
    zv = z_next / beta_next;
    beta = beta_next;
    c_km2 = c_km1;
    s_km2 = s_km1;
    c_km1 = c;
    s_km1 = s;
  }

  report.solution = std::move(x);
  report.wall_time_seconds =
      std::chrono::duration<Scalar>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

/// Solves the assembled saddle-point system with the chain preconditioner.
template <typename Scalar>
SolveReport<Scalar> minres(const BlockSaddleSystem<Scalar>& sys, const SchurChain<Scalar>& chain,
                           const Vector<Scalar>& b, Scalar tol = Scalar(1e-14), int maxit = 2000) {
  return minres(assemble_full(sys), chain, b, tol, maxit);
}

/// Two-interval MINRES residual envelope
///   2 * ((sqrt|r-_l r+_u| - sqrt|r-_u r+_l|) / (sqrt|r-_l r+_u| + sqrt|r-_u r+_l|))^floor(k/2).
/// The formula assumes equal interval widths; the narrower interval is
/// widened outward (mu-_LB down or mu+_UB up) first, which keeps the bound
/// valid for the enclosed spectrum.
template <typename Scalar>
Scalar convergence_envelope(const EigenvalueBounds<Scalar>& bounds, int k) {
  if (k < 0) throw std::invalid_argument("convergence_envelope: k must be >= 0");
  Scalar neg_lo = bounds.neg.lo, neg_hi = bounds.neg.hi;
  Scalar pos_lo = bounds.pos.lo, pos_hi = bounds.pos.hi;
  if (!(neg_lo <= neg_hi && neg_hi < Scalar(0) && Scalar(0) < pos_lo && pos_lo <= pos_hi))
    throw std::invalid_argument("convergence_envelope: bounds must satisfy lb <= ub < 0 < lb <= ub");
  const Scalar neg_width = neg_hi - neg_lo;
  const Scalar pos_width = pos_hi - pos_lo;
  if (pos_width > neg_width)
    neg_lo -= pos_width - neg_width;
  else if (neg_width > pos_width)
    pos_hi += neg_width - pos_width;
  const Scalar outer = std::sqrt(std::abs(neg_lo * pos_hi));
  const Scalar inner = std::sqrt(std::abs(neg_hi * pos_lo));
  const Scalar ratio = (outer - inner) / (outer + inner);
  return Scalar(2) * std::pow(ratio, k / 2);
}

}  // namespace saddlebounds
