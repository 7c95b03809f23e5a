#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "saddlebounds/block_system.hpp"
#include "saddlebounds/randgen.hpp"
#include "saddlebounds/schur_chain.hpp"
#include "saddlebounds/spectrum.hpp"
#include "test_support.hpp"

using namespace saddlebounds;

namespace {

Matrix<double> scalar1x1(double v) {
  Matrix<double> m(1, 1);
  m(0, 0) = v;
  return m;
}

BlockSaddleSystem<double> identity_n1() {
  Matrix<double> A0 = Matrix<double>::Identity(2, 2);
  Matrix<double> A1 = Matrix<double>::Zero(1, 1);
  Matrix<double> B1(1, 2);
  B1 << 1, 0;
  return BlockSaddleSystem<double>({A0, A1}, {B1});
}

}  // namespace

TEST_CASE("validate_system accepts identity-block N=1 system") {
  const auto report = validate_system(identity_n1());
  CHECK(report.pass);
  for (const auto& check : report.checks) CHECK(check.pass);
}

TEST_CASE("validate_system flags an indefinite A_0") {
  Matrix<double> A0(2, 2);
  A0 << 1, 0, 0, -1;
  BlockSaddleSystem<double> sys({A0, Matrix<double>::Zero(1, 1)},
                                {Matrix<double>::Ones(1, 2)});
  const auto report = validate_system(sys);
  CHECK_FALSE(report.pass);
  bool found = false;
  for (const auto& check : report.checks)
    if (check.name == "A0 positive definite") {
      found = true;
      CHECK_FALSE(check.pass);
      CHECK(check.measured == doctest::Approx(-1.0));
    }
  CHECK(found);
}

TEST_CASE("dimension mismatch is a structural error") {
  Matrix<double> A0 = Matrix<double>::Identity(3, 3);
  Matrix<double> A1 = Matrix<double>::Zero(2, 2);
  Matrix<double> B1 = Matrix<double>::Ones(2, 2);  // needs 2x3
  CHECK_THROWS_AS(BlockSaddleSystem<double>({A0, A1}, {B1}), DimensionError);
  CHECK_THROWS_AS(BlockSaddleSystem<double>({A0}, {B1}), DimensionError);
}

TEST_CASE("unsupported non-monotone shapes are rejected at construction") {
  // middle block grows: not representable
  Matrix<double> A0 = Matrix<double>::Identity(2, 2);
  Matrix<double> A1 = Matrix<double>::Identity(3, 3);
  Matrix<double> A2 = Matrix<double>::Identity(1, 1);
  CHECK_THROWS_AS(BlockSaddleSystem<double>({A0, A1, A2},
                                            {Matrix<double>::Ones(3, 2), Matrix<double>::Ones(1, 3)}),
                  DimensionError);
}

TEST_CASE("randgen seed-42 N=2 system validates") {
  const auto sys = random_system(2, 42);
  CHECK(validate_system(sys).pass);
}

TEST_CASE("assemble_full matches the N=1 scalar display") {
  BlockSaddleSystem<double> sys({scalar1x1(2), scalar1x1(1)}, {scalar1x1(1)});
  Matrix<double> expected(2, 2);
  expected << 2, 1, 1, -1;
  CHECK(assemble_full(sys) == expected);
}

TEST_CASE("assemble_full matches the N=2 all-identity display") {
  BlockSaddleSystem<double> sys({scalar1x1(1), scalar1x1(1), scalar1x1(1)},
                                {scalar1x1(1), scalar1x1(1)});
  Matrix<double> expected(3, 3);
  expected << 1, 1, 0, 1, -1, 1, 0, 1, 1;
  CHECK(assemble_full(sys) == expected);
}

TEST_CASE("assembly is deterministic and exactly symmetric") {
  const auto sys = random_system(3, 11);
  const Matrix<double> M1 = assemble_full(sys);
  const Matrix<double> M2 = assemble_full(sys);
  CHECK(M1 == M2);
  CHECK((M1 - M1.transpose()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("exact Schur chain: scalar recursion") {
  BlockSaddleSystem<double> sys({scalar1x1(2), scalar1x1(0)}, {scalar1x1(2)});
  const auto chain = build_exact_schur_chain(sys);
  CHECK(chain.exact_S[1](0, 0) == doctest::Approx(2.0));
}

TEST_CASE("exact Schur chain: identity blocks") {
  Matrix<double> I = Matrix<double>::Identity(2, 2);
  Matrix<double> Z = Matrix<double>::Zero(2, 2);
  BlockSaddleSystem<double> sys({I, Z, Z}, {I, I});
  const auto chain = build_exact_schur_chain(sys);
  CHECK((chain.exact_S[1] - I).cwiseAbs().maxCoeff() == doctest::Approx(0.0));
  CHECK((chain.exact_S[2] - I).cwiseAbs().maxCoeff() == doctest::Approx(0.0));
}

TEST_CASE("exact Schur chain agrees with an independent dense-inverse recursion") {
  const auto sys = random_system(3, 7);
  const auto chain = build_exact_schur_chain(sys);
  // independent route: explicit LU-based inverses
  Matrix<double> S = sys.diag_block(0);
  for (int k = 1; k <= 3; ++k) {
    const Matrix<double>& B = sys.offdiag_block(k);
    S = sys.diag_block(k) + B * S.inverse() * B.transpose();
    const double rel = (chain.exact_S[k] - S).norm() / S.norm();
    CHECK(rel <= 1e-12);
  }
}

TEST_CASE("all-exact inexact chain equals the exact chain elementwise") {
  const auto sys = random_system(2, 19);
  const auto exact = build_exact_schur_chain(sys);
  const auto inexact =
      build_inexact_chain(sys, std::vector<ApproxStrategy<double>>(3, ApproxStrategy<double>::Exact()));
  CHECK(inexact.all_exact);
  for (int k = 0; k <= 2; ++k) {
    const double rel =
        (exact.approx_S[k] - inexact.approx_S[k]).norm() / exact.approx_S[k].norm();
    CHECK(rel <= 1e-12);
  }
  for (int k = 1; k <= 2; ++k) {
    const double rel =
        (inexact.perturbed_S[k - 1] - exact.exact_S[k]).norm() / exact.exact_S[k].norm();
    CHECK(rel <= 1e-12);
  }
}

TEST_CASE("perturbed complements recompute to 1e-12 with the actual approximations") {
  const auto sys = random_system(2, 23);
  std::vector<ApproxStrategy<double>> strategies = {ApproxStrategy<double>::Jacobi(),
                                                    ApproxStrategy<double>::Exact(),
                                                    ApproxStrategy<double>::SpectralWindow(0.5, 2.0)};
  const auto chain = build_inexact_chain(sys, strategies);
  for (int k = 1; k <= 2; ++k) {
    const Matrix<double>& B = sys.offdiag_block(k);
    const Matrix<double> St =
        sys.diag_block(k) + B * chain.approx_S[k - 1].inverse() * B.transpose();
    CHECK((chain.perturbed_S[k - 1] - St).norm() / St.norm() <= 1e-12);
  }
}

TEST_CASE("spectral_window(1,1) forces the approximation onto its target") {
  const auto sys = random_system(2, 31);
  const auto chain = build_inexact_chain(
      sys, std::vector<ApproxStrategy<double>>(3, ApproxStrategy<double>::SpectralWindow(1.0, 1.0)));
  CHECK((chain.approx_S[0] - sys.diag_block(0)).norm() / sys.diag_block(0).norm() <= 1e-12);
  for (int k = 1; k <= 2; ++k)
    CHECK((chain.approx_S[k] - chain.perturbed_S[k - 1]).norm() / chain.perturbed_S[k - 1].norm() <=
          1e-12);
}

TEST_CASE("jacobi at level zero perturbs the downstream complement") {
  const auto sys = random_system(2, 5);
  std::vector<ApproxStrategy<double>> strategies = {ApproxStrategy<double>::Jacobi(),
                                                    ApproxStrategy<double>::Exact(),
                                                    ApproxStrategy<double>::Exact()};
  const auto chain = build_inexact_chain(sys, strategies);
  CHECK((chain.perturbed_S[0] - chain.exact_S[1]).norm() > 0.0);
}

TEST_CASE("jacobi on a target with a zero diagonal entry is a singular-approximation error") {
  Matrix<double> A0(2, 2);
  A0 << 0, 1, 1, 2;  // not SPD; jacobi must refuse before any factorization
  BlockSaddleSystem<double> sys({A0, Matrix<double>::Zero(1, 1)}, {Matrix<double>::Ones(1, 2)});
  std::vector<ApproxStrategy<double>> strategies = {ApproxStrategy<double>::Jacobi(),
                                                    ApproxStrategy<double>::Exact()};
  CHECK_THROWS_AS(build_inexact_chain(sys, strategies), NumericalError);
}

TEST_CASE("strategy parameter errors") {
  CHECK_THROWS_AS(ApproxStrategy<double>::SpectralWindow(0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(ApproxStrategy<double>::SpectralWindow(2.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(ApproxStrategy<double>::ScaledIdentity(0.0), std::invalid_argument);
}

TEST_CASE("apply_preconditioner: identity chain and zero vector") {
  const auto sys = random_system(2, 3);
  const auto chain = build_inexact_chain(
      sys, std::vector<ApproxStrategy<double>>(3, ApproxStrategy<double>::ScaledIdentity(1.0)));
  Rng rng(99);
  Vector<double> v(sys.total_dim());
  for (Index i = 0; i < v.size(); ++i) v(i) = rng.normal();
  CHECK((apply_preconditioner(chain, v) - v).cwiseAbs().maxCoeff() == 0.0);
  const Vector<double> zero = Vector<double>::Zero(sys.total_dim());
  CHECK(apply_preconditioner(chain, zero).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("apply_preconditioner matches the dense inverse column") {
  const auto sys = random_system(2, 17);
  const auto chain = build_exact_schur_chain(sys);
  Matrix<double> P = Matrix<double>::Zero(sys.total_dim(), sys.total_dim());
  Index off = 0;
  for (const auto& S : chain.approx_S) {
    P.block(off, off, S.rows(), S.rows()) = S;
    off += S.rows();
  }
  const Matrix<double> Pinv = P.inverse();
  Vector<double> e1 = Vector<double>::Zero(sys.total_dim());
  e1(0) = 1.0;
  const Vector<double> got = apply_preconditioner(chain, e1);
  CHECK((got - Pinv.col(0)).cwiseAbs().maxCoeff() <= 1e-12 * Pinv.col(0).cwiseAbs().maxCoeff());

  // length mismatch
  CHECK_THROWS_AS(apply_preconditioner(chain, Vector<double>(Vector<double>::Zero(3))), DimensionError);
}

TEST_CASE("apply_preconditioner is linear") {
  const auto sys = random_system(2, 29);
  const auto chain = build_exact_schur_chain(sys);
  Rng rng(4);
  Vector<double> v(sys.total_dim()), w(sys.total_dim());
  for (Index i = 0; i < v.size(); ++i) {
    v(i) = rng.normal();
    w(i) = rng.normal();
  }
  const double a = 0.7, b = -1.3;
  const Vector<double> lhs = apply_preconditioner(chain, Vector<double>(a * v + b * w));
  const Vector<double> rhs =
      a * apply_preconditioner(chain, v) + b * apply_preconditioner(chain, w);
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-12 * rhs.cwiseAbs().maxCoeff());
}

TEST_CASE("exact chain on N=1 with A_1 = 0 gives the classical three-eigenvalue pencil") {
  RandomSystemOptions opt;
  opt.zero_tail_blocks = true;
  opt.dim_base = 12;
  opt.dim_jitter = 4;
  const auto sys = random_system(1, 13, opt);
  const auto chain = build_exact_schur_chain(sys);
  const auto spectrum = preconditioned_spectrum(sys, chain);
  const double phi_pos = (1.0 + std::sqrt(5.0)) / 2.0;
  const double phi_neg = (1.0 - std::sqrt(5.0)) / 2.0;
  for (double lam : spectrum.eigenvalues) {
    const double dist = std::min({std::abs(lam - 1.0), std::abs(lam - phi_pos), std::abs(lam - phi_neg)});
    CHECK(dist <= 1e-8);
  }
}

TEST_CASE("build_exact_schur_chain rejects rectangular-tail systems") {
  RandomSystemOptions opt;
  opt.rect_tail = true;
  opt.psd_margin = 0.5;  // keep the tail block definite so S~_2 stays SPD
  opt.dim_base = 10;
  opt.dim_jitter = 3;
  const auto sys = random_system(2, 8, opt);
  CHECK(sys.rectangular_tail());
  CHECK_THROWS_AS(build_exact_schur_chain(sys), DimensionError);
  // the inexact builder handles the shape
  const auto chain = build_inexact_chain(
      sys, std::vector<ApproxStrategy<double>>(3, ApproxStrategy<double>::Exact()));
  CHECK(chain.exact_S.empty());
  CHECK(chain.depth() == 2);
}
