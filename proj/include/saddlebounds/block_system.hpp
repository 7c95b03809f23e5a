#pragma once

#include <Eigen/Dense>

#include <cstdio>
#include <string>
#include <utility>
#include <vector>

#include "saddlebounds/types.hpp"

namespace saddlebounds {

enum class SystemShape { standard, rectangular_tail };

/// Symmetric block-tridiagonal multiple saddle-point system.
///
/// The assembled operator carries diagonal blocks (-1)^k A_k, k = 0..N, and
/// couplings B_k on the first sub/super block diagonals.  A_0 must be
/// symmetric positive definite, the remaining A_k positive semi-definite and
/// every B_k of full rank.  Block dimensions must satisfy n_k <= n_{k-1},
/// except for the rectangular-tail configuration (N == 2 with n_2 > n_1)
/// which is tracked through shape().
template <typename Scalar>
class BlockSaddleSystem {
 public:
  BlockSaddleSystem(std::vector<Matrix<Scalar>> diag_blocks,
                    std::vector<Matrix<Scalar>> offdiag_blocks)
      : diag_(std::move(diag_blocks)), offdiag_(std::move(offdiag_blocks)) {
    if (diag_.empty())
      throw DimensionError("BlockSaddleSystem: at least the block A_0 is required");
    if (offdiag_.size() + 1 != diag_.size())
      throw DimensionError("BlockSaddleSystem: expected N+1 diagonal blocks and N off-diagonal blocks");
    dims_.reserve(diag_.size());
    for (std::size_t k = 0; k < diag_.size(); ++k) {
      if (diag_[k].rows() != diag_[k].cols())
        throw DimensionError("BlockSaddleSystem: A_" + std::to_string(k) + " is not square");
      dims_.push_back(diag_[k].rows());
    }
    for (std::size_t k = 1; k < diag_.size(); ++k) {
      const auto& B = offdiag_[k - 1];
      if (B.rows() != dims_[k] || B.cols() != dims_[k - 1])
        throw DimensionError("BlockSaddleSystem: B_" + std::to_string(k) + " must map dimension " +
                             std::to_string(dims_[k - 1]) + " to " + std::to_string(dims_[k]));
    }
    std::vector<int> violations;
    for (std::size_t k = 1; k < dims_.size(); ++k)
      if (dims_[k] > dims_[k - 1]) violations.push_back(static_cast<int>(k));
    if (violations.empty()) {
      shape_ = SystemShape::standard;
    } else if (violations.size() == 1 && violations[0] == depth() && depth() == 2) {
      shape_ = SystemShape::rectangular_tail;
    } else {
      throw DimensionError(
          "BlockSaddleSystem: unsupported block-dimension pattern; only a "
          "rectangular last block with N = 2 is supported");
    }
  }

  /// Number of off-diagonal block rows N.
  int depth() const { return static_cast<int>(offdiag_.size()); }

  const Matrix<Scalar>& diag_block(int k) const { return diag_.at(k); }
  /// B_k for k = 1..N.
  const Matrix<Scalar>& offdiag_block(int k) const { return offdiag_.at(k - 1); }

  const std::vector<Index>& dims() const { return dims_; }
  Index total_dim() const {
    Index n = 0;
    for (Index d : dims_) n += d;
    return n;
  }

  SystemShape shape() const { return shape_; }
  bool rectangular_tail() const { return shape_ == SystemShape::rectangular_tail; }

 private:
  std::vector<Matrix<Scalar>> diag_;
  std::vector<Matrix<Scalar>> offdiag_;
  std::vector<Index> dims_;
  SystemShape shape_ = SystemShape::standard;
};

template <typename Scalar>
struct ValidationCheck {
  std::string name;
  bool pass = false;
  Scalar measured{};
  std::string detail;
};

template <typename Scalar>
struct ValidationReport {
  std::vector<ValidationCheck<Scalar>> checks;
  bool pass = true;

  void add(std::string name, bool ok, Scalar measured, std::string detail) {
    pass = pass && ok;
    checks.push_back({std::move(name), ok, measured, std::move(detail)});
  }
};

namespace detail {

template <typename Scalar>
std::string format_scalar(Scalar x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", static_cast<double>(x));
  return buf;
}

}  // namespace detail

/// Checks every admissibility condition of the system and reports the
/// measured quantity per check.  Definiteness is decided from the smallest
/// eigenvalue against the absolute tolerance tol*||A||, rank of B_k from its
/// singular values against tol*sigma_max.
template <typename Scalar>
ValidationReport<Scalar> validate_system(const BlockSaddleSystem<Scalar>& sys,
                                         Scalar tol = Scalar(1e-10)) {
  ValidationReport<Scalar> report;
  const int N = sys.depth();
  for (int k = 0; k <= N; ++k) {
    const Matrix<Scalar>& A = sys.diag_block(k);
    const std::string name = "A" + std::to_string(k);
    const Scalar asym = A.rows() > 0 ? (A - A.transpose()).cwiseAbs().maxCoeff() : Scalar(0);
    const Scalar scale = A.rows() > 0 ? A.cwiseAbs().maxCoeff() : Scalar(0);
    report.add(name + " symmetric", asym <= tol * std::max(Scalar(1), scale), asym,
               "max|A - A^T| = " + detail::format_scalar(asym));

    Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> es(A, Eigen::EigenvaluesOnly);
    const Scalar lmin = es.eigenvalues().minCoeff();
    const Scalar lmax = es.eigenvalues().maxCoeff();
    const Scalar norm = std::max(std::abs(lmin), std::abs(lmax));
    if (k == 0) {
      report.add(name + " positive definite", lmin > tol * norm, lmin,
                 "min eigenvalue = " + detail::format_scalar(lmin));
    } else {
      report.add(name + " positive semi-definite", lmin >= -tol * norm, lmin,
                 "min eigenvalue = " + detail::format_scalar(lmin));
    }
  }
  for (int k = 1; k <= N; ++k) {
    const Matrix<Scalar>& B = sys.offdiag_block(k);
    Eigen::JacobiSVD<Matrix<Scalar>> svd(B);
    const auto& sv = svd.singularValues();
    const Scalar smax = sv.size() > 0 ? sv(0) : Scalar(0);
    const Scalar smin = sv.size() > 0 ? sv(sv.size() - 1) : Scalar(0);
    report.add("B" + std::to_string(k) + " full rank", smin > tol * smax, smin,
               "sigma_min = " + detail::format_scalar(smin) +
                   ", sigma_max = " + detail::format_scalar(smax));
  }
  report.add("shape", true, Scalar(sys.rectangular_tail() ? 1 : 0),
             sys.rectangular_tail() ? "rectangular tail (n_N > n_{N-1})" : "standard (n_k <= n_{k-1})");
  return report;
}

/// Assembles the dense operator with diagonal blocks (-1)^k A_k and couplings
/// B_k.  Only the lower triangle of each A_k is read, so the result is
/// symmetric to the last bit.
template <typename Scalar>
Matrix<Scalar> assemble_full(const BlockSaddleSystem<Scalar>& sys) {
  const Index n = sys.total_dim();
  Matrix<Scalar> M = Matrix<Scalar>::Zero(n, n);
  std::vector<Index> offset(sys.dims().size() + 1, 0);
  for (std::size_t k = 0; k < sys.dims().size(); ++k) offset[k + 1] = offset[k] + sys.dims()[k];

  for (int k = 0; k <= sys.depth(); ++k) {
    const Scalar sign = (k % 2 == 0) ? Scalar(1) : Scalar(-1);
    Matrix<Scalar> Ak = sys.diag_block(k).template selfadjointView<Eigen::Lower>();
    M.block(offset[k], offset[k], sys.dims()[k], sys.dims()[k]) = sign * Ak;
  }
  for (int k = 1; k <= sys.depth(); ++k) {
    const Matrix<Scalar>& B = sys.offdiag_block(k);
    M.block(offset[k], offset[k - 1], B.rows(), B.cols()) = B;
    M.block(offset[k - 1], offset[k], B.cols(), B.rows()) = B.transpose();
  }
  return M;
}

}  // namespace saddlebounds
