#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <optional>
#include <string>

#include "saddlebounds/block_system.hpp"
#include "saddlebounds/schur_chain.hpp"
#include "saddlebounds/types.hpp"

namespace saddlebounds {

template <typename Scalar>
struct SpectrumReport {
  std::vector<Scalar> eigenvalues;  // ascending
  std::optional<std::array<Scalar, 4>> extremal;  // set when both signs occur
  Scalar zero_gap{};                // min |lambda|
  bool near_singular = false;       // zero_gap below 1e-12
};

/// Exact spectrum of the symmetric pencil (A, P) = eigenvalues of
/// P^{-1/2} A P^{-1/2}, computed densely through the Cholesky congruence of
/// the block-diagonal preconditioner.  Guarded to desk scale.
template <typename Scalar>
SpectrumReport<Scalar> preconditioned_spectrum(const BlockSaddleSystem<Scalar>& sys,
                                               const SchurChain<Scalar>& chain,
                                               Index max_dim = 5000) {
  const Index n = sys.total_dim();
  if (n != chain.total_dim())
    throw DimensionError("preconditioned_spectrum: system and chain dimensions differ");
  if (n > max_dim)
    throw std::invalid_argument("preconditioned_spectrum: total dimension exceeds the desk-scale guard");

  const Matrix<Scalar> A = assemble_full(sys);
  Matrix<Scalar> P = Matrix<Scalar>::Zero(n, n);
  Index offset = 0;
  for (const auto& S : chain.approx_S) {
    P.block(offset, offset, S.rows(), S.rows()) = S;
    offset += S.rows();
  }
  Eigen::GeneralizedSelfAdjointEigenSolver<Matrix<Scalar>> es(A, P,
                                                              Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
  SpectrumReport<Scalar> report;
  report.eigenvalues.assign(es.eigenvalues().data(), es.eigenvalues().data() + n);

  report.zero_gap = std::numeric_limits<Scalar>::infinity();
  Scalar neg_min = 0, neg_max = 0, pos_min = 0, pos_max = 0;
  bool has_neg = false, has_pos = false;
  for (Scalar lam : report.eigenvalues) {
    report.zero_gap = std::min(report.zero_gap, std::abs(lam));
    if (lam < Scalar(0)) {
      if (!has_neg) neg_min = lam;
      neg_max = lam;
      has_neg = true;
    } else if (lam > Scalar(0)) {
      if (!has_pos) pos_min = lam;
      pos_max = lam;
      has_pos = true;
    }
  }
  report.near_singular = report.zero_gap < Scalar(1e-12);
  if (has_neg && has_pos) report.extremal = {neg_min, neg_max, pos_min, pos_max};
  return report;
}

/// (most-negative, least-negative, least-positive, most-positive).
template <typename Scalar>
std::array<Scalar, 4> extremal_eigs(const SpectrumReport<Scalar>& report) {
  if (!report.extremal)
    throw NumericalError("extremal_eigs: spectrum is single-signed (assembly error upstream)");
  return *report.extremal;
}

}  // namespace saddlebounds
