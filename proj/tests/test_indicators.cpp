#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "saddlebounds/indicators.hpp"
#include "saddlebounds/json_io.hpp"
#include "saddlebounds/randgen.hpp"
#include "test_support.hpp"

using namespace saddlebounds;
using test_support::random_spd;
using test_support::sym_eigenvalues;
using test_support::sym_inv_sqrt;

TEST_CASE("E interval: identity pencil and zero block") {
  const auto sys = random_system(1, 44);
  const auto chain = build_exact_schur_chain(sys);
  const auto e0 = compute_E_interval(sys, chain, 0);  // S^_0 = A_0
  CHECK(e0.lo == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(e0.hi == doctest::Approx(1.0).epsilon(1e-12));

  RandomSystemOptions opt;
  opt.zero_tail_blocks = true;
  const auto zsys = random_system(1, 44, opt);
  const auto zchain = build_exact_schur_chain(zsys);
  const auto e1 = compute_E_interval(zsys, zchain, 1);
  CHECK(e1.lo == 0.0);
  CHECK(e1.hi == 0.0);
}

TEST_CASE("E interval matches the explicit square-root congruence (5x5, seed 3)") {
  Rng rng(3);
  const Matrix<double> A = random_spd(rng, 5);
  const Matrix<double> S = random_spd(rng, 5);
  BlockSaddleSystem<double> sys({A, Matrix<double>::Zero(1, 1)}, {Matrix<double>::Ones(1, 5)});
  SchurChain<double> chain;
  chain.approx_S = {S, Matrix<double>::Identity(1, 1)};
  chain.strategy_tags = {"manual", "manual"};
  chain.refresh_factors();

  const auto iv = compute_E_interval(sys, chain, 0);
  const Matrix<double> Sinv_half = sym_inv_sqrt(S);
  const auto oracle = sym_eigenvalues(Sinv_half * A * Sinv_half);
  CHECK(iv.lo == doctest::Approx(oracle.minCoeff()).epsilon(1e-10));
  CHECK(iv.hi == doctest::Approx(oracle.maxCoeff()).epsilon(1e-10));
}

TEST_CASE("R interval: degenerate exact chain and scalar example") {
  RandomSystemOptions opt;
  opt.zero_tail_blocks = true;
  const auto sys = random_system(3, 21, opt);
  const auto chain = build_exact_schur_chain(sys);
  for (int k = 1; k <= 3; ++k) {
    // pencil accuracy degrades with cond(S_k); the chained complements of
    // near-square Gaussian blocks can reach kappa ~ 1e12
    const auto eigs = sym_eigenvalues(chain.exact_S[k]);
    const double kappa = eigs.maxCoeff() / eigs.minCoeff();
    const double tol = 1e-12 + 100.0 * std::numeric_limits<double>::epsilon() * kappa;
    const auto iv = compute_R_interval(sys, chain, k);
    CHECK(std::abs(iv.lo - 1.0) <= tol);
    CHECK(std::abs(iv.hi - 1.0) <= tol);
  }

  // B = I, S^_k = S^_{k-1} = 2I: R R^T = 0.25 I
  const Index n = 3;
  BlockSaddleSystem<double> small({Matrix<double>::Identity(n, n), Matrix<double>::Zero(n, n)},
                                  {Matrix<double>::Identity(n, n)});
  SchurChain<double> manual;
  manual.approx_S = {2.0 * Matrix<double>::Identity(n, n), 2.0 * Matrix<double>::Identity(n, n)};
  manual.strategy_tags = {"manual", "manual"};
  manual.refresh_factors();
  const auto iv = compute_R_interval(small, manual, 1);
  CHECK(iv.lo == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(iv.hi == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("rect tail: R interval equals the spectrum of the explicit R^T R") {
  RandomSystemOptions opt;
  opt.rect_tail = true;
  opt.psd_margin = 0.5;
  opt.dim_base = 8;
  opt.dim_jitter = 4;
  const auto sys = random_system(2, 97, opt);
  const auto chain = build_inexact_chain(
      sys, std::vector<ApproxStrategy<double>>(3, ApproxStrategy<double>::Exact()));
  const auto iv = compute_R_interval(sys, chain, 2);

  const Matrix<double> R = sym_inv_sqrt(chain.approx_S[2]) * sys.offdiag_block(2) *
                           sym_inv_sqrt(chain.approx_S[1]);
  const auto oracle = sym_eigenvalues(R.transpose() * R);
  CHECK(iv.lo == doctest::Approx(oracle.minCoeff()).epsilon(1e-10));
  CHECK(iv.hi == doctest::Approx(oracle.maxCoeff()).epsilon(1e-10));
  CHECK(iv.lo > 0.0);
}

TEST_CASE("R interval flags rank loss") {
  const Index n = 2;
  Matrix<double> B(n, n);
  B << 1, 0, 0, 1e-14;
  BlockSaddleSystem<double> sys({Matrix<double>::Identity(n, n), Matrix<double>::Zero(n, n)}, {B});
  SchurChain<double> manual;
  manual.approx_S = {Matrix<double>::Identity(n, n), Matrix<double>::Identity(n, n)};
  manual.strategy_tags = {"manual", "manual"};
  manual.refresh_factors();
  CHECK_THROWS_AS(compute_R_interval(sys, manual, 1), NumericalError);
}

TEST_CASE("sbar identity residual: exact, inexact, corrupted") {
  const auto sys = random_system(2, 64);
  const auto exact = build_exact_schur_chain(sys);
  for (int k = 1; k <= 2; ++k) CHECK(sbar_identity_residual(sys, exact, k) <= 1e-14);

  std::vector<ApproxStrategy<double>> strategies = {ApproxStrategy<double>::Jacobi(),
                                                    ApproxStrategy<double>::SpectralWindow(0.5, 2.0),
                                                    ApproxStrategy<double>::Exact()};
  auto inexact = build_inexact_chain(sys, strategies);
  for (int k = 1; k <= 2; ++k) CHECK(sbar_identity_residual(sys, inexact, k) <= 1e-12);

  inexact.perturbed_S[0] += Matrix<double>::Identity(inexact.perturbed_S[0].rows(),
                                                     inexact.perturbed_S[0].rows());
  CHECK(sbar_identity_residual(sys, inexact, 1) > 1e-6);
}

TEST_CASE("indicator set: degenerate exact chain values") {
  RandomSystemOptions opt;
  opt.zero_tail_blocks = true;
  const auto sys = random_system(3, 70, opt);
  const auto chain = build_exact_schur_chain(sys);
  const auto ind = compute_indicator_set(sys, chain);
  CHECK(ind.N == 3);
  CHECK(ind.alphaE[0] == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(ind.betaE[0] == doctest::Approx(1.0).epsilon(1e-10));
  for (int k = 1; k <= 3; ++k) {
    const auto eigs = sym_eigenvalues(chain.exact_S[k]);
    const double kappa = eigs.maxCoeff() / eigs.minCoeff();
    const double tol = 1e-12 + 100.0 * std::numeric_limits<double>::epsilon() * kappa;
    CHECK(ind.alphaE[k] == 0.0);
    CHECK(ind.betaE[k] == 0.0);
    CHECK(std::abs(ind.alphaR[k - 1] - 1.0) <= tol);
    CHECK(std::abs(ind.betaR[k - 1] - 1.0) <= tol);
  }
  CHECK_FALSE(ind.rect_tail);
}

TEST_CASE("spectral_window at level 0 pins the E_0 interval") {
  const auto sys = random_system(2, 12);
  std::vector<ApproxStrategy<double>> strategies = {ApproxStrategy<double>::SpectralWindow(0.5, 1.5),
                                                    ApproxStrategy<double>::Exact(),
                                                    ApproxStrategy<double>::Exact()};
  const auto chain = build_inexact_chain(sys, strategies);
  const auto ind = compute_indicator_set(sys, chain);
  CHECK(ind.alphaE[0] >= 0.5 - 1e-10);
  CHECK(ind.betaE[0] <= 1.5 + 1e-10);
  CHECK(ind.alphaE[0] == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(ind.betaE[0] == doctest::Approx(1.5).epsilon(1e-8));
}

TEST_CASE("pencil route equals the square-root congruence on random chains") {
  Rng seeds(5150);
  for (int trial = 0; trial < 5; ++trial) {
    const auto sys = random_system(2, seeds.engine()());
    std::vector<ApproxStrategy<double>> strategies = {
        ApproxStrategy<double>::SpectralWindow(0.6, 1.8), ApproxStrategy<double>::Jacobi(),
        ApproxStrategy<double>::Exact()};
    const auto chain = build_inexact_chain(sys, strategies);
    for (int k = 0; k <= 2; ++k) {
      const Matrix<double> W = sym_inv_sqrt(chain.approx_S[k]);
      const auto oracle = sym_eigenvalues(W * sys.diag_block(k) * W);
      const auto iv = compute_E_interval(sys, chain, k);
      CHECK(iv.lo == doctest::Approx(oracle.minCoeff()).epsilon(1e-10));
      CHECK(iv.hi == doctest::Approx(oracle.maxCoeff()).epsilon(1e-10));
    }
    for (int k = 1; k <= 2; ++k) {
      const Matrix<double> R = sym_inv_sqrt(chain.approx_S[k]) * sys.offdiag_block(k) *
                               sym_inv_sqrt(chain.approx_S[k - 1]);
      const auto oracle = sym_eigenvalues(R * R.transpose());
      const auto iv = compute_R_interval(sys, chain, k);
      CHECK(iv.lo == doctest::Approx(oracle.minCoeff()).epsilon(1e-10));
      CHECK(iv.hi == doctest::Approx(oracle.maxCoeff()).epsilon(1e-10));
    }
  }
}

TEST_CASE("Weyl consistency of the S-bar identity") {
  Rng seeds(8181);
  for (int trial = 0; trial < 5; ++trial) {
    const auto sys = random_system(2, seeds.engine()());
    std::vector<ApproxStrategy<double>> strategies = {
        ApproxStrategy<double>::SpectralWindow(0.8, 1.2), ApproxStrategy<double>::SpectralWindow(0.5, 2.0),
        ApproxStrategy<double>::Jacobi()};
    const auto chain = build_inexact_chain(sys, strategies);
    const auto ind = compute_indicator_set(sys, chain);
    for (int k = 1; k <= 2; ++k) {
      const auto sbar = detail::pencil_extremes(chain.perturbed_S[k - 1], chain.approx_S[k]);
      CHECK(ind.alphaR[k - 1] + ind.alphaE[k] <= sbar.lo + 1e-10);
      CHECK(ind.betaR[k - 1] + ind.betaE[k] >= sbar.hi - 1e-10);
    }
  }
}

TEST_CASE("compute_indicator_set is deterministic") {
  const auto sys = random_system(2, 3333);
  const auto chain = build_exact_schur_chain(sys);
  const auto a = compute_indicator_set(sys, chain);
  const auto b = compute_indicator_set(sys, chain);
  CHECK(a == b);
}

TEST_CASE("IndicatorSet JSON round trip") {
  Rng rng(24);
  const auto ind = test_support::random_indicator_set(rng, 3);
  const json doc = ind;
  const auto back = doc.get<IndicatorSet<double>>();
  CHECK(back == ind);
  CHECK(json(back).dump() == doc.dump());

  // schema keys exactly as interchange format
  CHECK(doc.contains("N"));
  CHECK(doc.contains("alphaE"));
  CHECK(doc.contains("betaE"));
  CHECK(doc.contains("alphaR"));
  CHECK(doc.contains("betaR"));
  CHECK(doc.contains("rect_tail"));
}

TEST_CASE("validate_indicators enforces the invariants") {
  Rng rng(25);
  auto good = test_support::random_indicator_set(rng, 2);
  CHECK_NOTHROW(validate_indicators(good));

  auto bad = good;
  bad.alphaE[0] = 0.0;
  CHECK_THROWS_AS(validate_indicators(bad), std::invalid_argument);
  bad = good;
  bad.alphaR[0] = 0.0;
  CHECK_THROWS_AS(validate_indicators(bad), std::invalid_argument);
  bad = good;
  bad.alphaE[1] = bad.betaE[1] + 1.0;
  CHECK_THROWS_AS(validate_indicators(bad), std::invalid_argument);
}
