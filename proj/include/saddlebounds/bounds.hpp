#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "saddlebounds/indicators.hpp"
#include "saddlebounds/polynomials.hpp"
#include "saddlebounds/types.hpp"

namespace saddlebounds {

/// The four endpoint-realizing parameter choices of the linear algorithm:
///   neg_lb: gamma_E = (a,b,a,...), gamma_R = (b,b,...,b)
///   neg_ub: gamma_E = (b,a,b,...), gamma_R = (a,b,a,...)
///   pos_lb: gamma_E = (a,b,a,...), gamma_R = (b,a,b,...)
///   pos_ub: gamma_E = (b,a,b,...), gamma_R = (b,b,...,b)
/// with a = alpha, b = beta per level.
template <typename Scalar>
struct CornerAssignments {
  GammaAssignment<Scalar> neg_lb, neg_ub, pos_lb, pos_ub;
};

struct EndpointProvenance {
  std::string corner;
  std::vector<int> degrees;
};

struct BoundsProvenance {
  std::string method;
  EndpointProvenance neg_lb, neg_ub, pos_lb, pos_ub;
  std::vector<std::string> warnings;
  bool hulled = false;
};

/// Certified inclusion intervals [mu-_LB, mu-_UB] u [mu+_LB, mu+_UB] for the
/// preconditioned spectrum, plus the extra E-interval of the
/// rectangular-tail localization when present.
template <typename Scalar>
struct EigenvalueBounds {
  Interval<Scalar> neg;
  Interval<Scalar> pos;
  std::optional<Interval<Scalar>> extra;
  BoundsProvenance provenance;
};

namespace detail {

template <typename Scalar>
std::optional<Scalar> largest_negative_root(const RootSet<Scalar>& rs) {
  std::optional<Scalar> out;
  for (Scalar r : rs.roots)
    if (r < Scalar(0)) out = r;
  return out;
}

template <typename Scalar>
std::optional<Scalar> smallest_positive_root(const RootSet<Scalar>& rs) {
  for (Scalar r : rs.roots)
    if (r > Scalar(0)) return r;
  return std::nullopt;
}

/// Tracks an extremum over (degree, value) candidates, keeping every degree
/// that attains it within a relative tie tolerance.
template <typename Scalar>
struct ExtremumTracker {
  bool maximize;
  std::optional<Scalar> value;
  std::vector<int> degrees;

  explicit ExtremumTracker(bool max) : maximize(max) {}

  void offer(int degree, Scalar v) {
    const Scalar tie = Scalar(1e-12) * std::max(Scalar(1), std::abs(v));
    if (!value) {
      value = v;
      degrees = {degree};
      return;
    }
    const Scalar improvement = maximize ? v - *value : *value - v;
    if (improvement > tie) {
      value = v;
      degrees = {degree};
    } else if (std::abs(v - *value) <= tie) {
      degrees.push_back(degree);
    }
  }
};

}  // namespace saddlebounds::detail

template <typename Scalar>
CornerAssignments<Scalar> corner_assignments(const IndicatorSet<Scalar>& ind) {
  validate_indicators(ind);
  const int N = ind.N;
  CornerAssignments<Scalar> c;
  auto build = [&](bool betaE_at_even, int gammaR_pattern) {
    // gammaR_pattern: 0 = all beta, 1 = alpha at odd m, 2 = alpha at even m
    GammaAssignment<Scalar> g;
    for (int m = 0; m <= N; ++m) {
      const bool use_beta = (m % 2 == 0) ? betaE_at_even : !betaE_at_even;
      g.gammaE.push_back(use_beta ? ind.betaE[m] : ind.alphaE[m]);
    }
    for (int m = 1; m <= N; ++m) {
      bool use_alpha = false;
      if (gammaR_pattern == 1) use_alpha = (m % 2 == 1);
      if (gammaR_pattern == 2) use_alpha = (m % 2 == 0);
      g.gammaR.push_back(use_alpha ? ind.alphaR[m - 1] : ind.betaR[m - 1]);
    }
    return g;
  };
  c.neg_lb = build(false, 0);
  c.neg_ub = build(true, 1);
  c.pos_lb = build(false, 2);
  c.pos_ub = build(true, 0);
  return c;
}

/// Linear corner algorithm: the outer endpoints are the extreme roots of
/// U_{N+1} at the neg_lb / pos_ub corners; mu-_UB maximizes the largest
/// negative root over the even degrees at the neg_ub corner, and mu+_LB
/// minimizes the smallest positive root over the odd degrees at the pos_lb
/// corner.
template <typename Scalar>
EigenvalueBounds<Scalar> compute_bounds(const IndicatorSet<Scalar>& ind) {
  validate_indicators(ind);
  if (ind.rect_tail)
    throw std::invalid_argument("compute_bounds: rectangular-tail sets need bounds_n2_rect");
  const int N = ind.N;
  const CornerAssignments<Scalar> corners = corner_assignments(ind);
  EigenvalueBounds<Scalar> out;
  out.provenance.method = "linear";

  out.neg.lo = roots_U(N + 1, corners.neg_lb).roots.front();
  out.provenance.neg_lb = {"negLB", {N + 1}};
  out.pos.hi = roots_U(N + 1, corners.pos_ub).roots.back();
  out.provenance.pos_ub = {"posUB", {N + 1}};

  detail::ExtremumTracker<Scalar> neg_ub(true);
  for (int d = 2; d <= N + 1; d += 2) {
    const auto cand = detail::largest_negative_root(roots_U(d, corners.neg_ub));
    if (!cand) {
      out.provenance.warnings.push_back("U_" + std::to_string(d) +
                                        " has no negative root at the negUB corner; candidate skipped");
      continue;
    }
    neg_ub.offer(d, *cand);
  }
  if (!neg_ub.value)
    throw NumericalError("compute_bounds: no negative-root candidate for mu-_UB");
  out.neg.hi = *neg_ub.value;
  out.provenance.neg_ub = {"negUB", neg_ub.degrees};

  detail::ExtremumTracker<Scalar> pos_lb(false);
  for (int d = 1; d <= N + 1; d += 2) {
    const auto cand = detail::smallest_positive_root(roots_U(d, corners.pos_lb));
    if (!cand) {
      out.provenance.warnings.push_back("U_" + std::to_string(d) +
                                        " has no positive root at the posLB corner; candidate skipped");
      continue;
    }
    pos_lb.offer(d, *cand);
  }
  if (!pos_lb.value)
    throw NumericalError("compute_bounds: no positive-root candidate for mu+_LB");
  out.pos.lo = *pos_lb.value;
  out.provenance.pos_lb = {"posLB", pos_lb.degrees};
  return out;
}

/// Exhaustive oracle: sweeps all 2^{2N+1} endpoint corners and every degree
/// 1..N+1, returning the extremal envelope of the negative and positive
/// roots.  Guarded to N <= 6.
template <typename Scalar>
EigenvalueBounds<Scalar> compute_bounds_bruteforce(const IndicatorSet<Scalar>& ind) {
  validate_indicators(ind);
  if (ind.rect_tail)
    throw std::invalid_argument("compute_bounds_bruteforce: rectangular-tail sets need bounds_n2_rect");
  const int N = ind.N;
  if (N > 6) throw std::invalid_argument("compute_bounds_bruteforce: N <= 6 (cost guard)");

  detail::ExtremumTracker<Scalar> neg_lo(false), neg_hi(true), pos_lo(false), pos_hi(true);
  const std::uint64_t corners = std::uint64_t(1) << (2 * N + 1);
  for (std::uint64_t c = 0; c < corners; ++c) {
    GammaAssignment<Scalar> g;
    for (int m = 0; m <= N; ++m)
      g.gammaE.push_back((c >> m) & 1 ? ind.betaE[m] : ind.alphaE[m]);
    for (int m = 1; m <= N; ++m)
      g.gammaR.push_back((c >> (N + m)) & 1 ? ind.betaR[m - 1] : ind.alphaR[m - 1]);
    for (int d = 1; d <= N + 1; ++d) {
      const RootSet<Scalar> rs = roots_U(d, g);
      for (Scalar r : rs.roots) {
        if (r < Scalar(0)) {
          neg_lo.offer(d, r);
          neg_hi.offer(d, r);
        } else if (r > Scalar(0)) {
          pos_lo.offer(d, r);
          pos_hi.offer(d, r);
        }
      }
    }
  }
  if (!neg_lo.value || !pos_lo.value)
    throw NumericalError("compute_bounds_bruteforce: sweep found no roots of one sign");
  EigenvalueBounds<Scalar> out;
  out.provenance.method = "bruteforce";
  out.neg = {*neg_lo.value, *neg_hi.value};
  out.pos = {*pos_lo.value, *pos_hi.value};
  out.provenance.neg_lb = {"sweep", neg_lo.degrees};
  out.provenance.neg_ub = {"sweep", neg_hi.degrees};
  out.provenance.pos_lb = {"sweep", pos_lo.degrees};
  out.provenance.pos_ub = {"sweep", pos_hi.degrees};
  return out;
}

/// Direct evaluation of the double saddle-point (N = 2) endpoint formulas:
///   mu-_LB = xi_LB,-^(3)(aE0, bE1, bR1, aE2, bR2)
///   mu-_UB = xi_UB,-^(2)(bE0, aE1, aR1)
///   mu+_LB = min{ aE0, xi_LB,+^(3)(aE0, bE1, bR1, aE2, aR2) }
///   mu+_UB = xi_UB,+^(3)(bE0, aE1, bR1, bE2, bR2)
template <typename Scalar>
EigenvalueBounds<Scalar> bounds_n2_closed(const IndicatorSet<Scalar>& ind) {
  validate_indicators(ind);
  if (ind.N != 2) throw std::invalid_argument("bounds_n2_closed: requires N = 2");
  if (ind.rect_tail)
    throw std::invalid_argument("bounds_n2_closed: rectangular-tail sets need bounds_n2_rect");
  const Scalar aE0 = ind.alphaE[0], bE0 = ind.betaE[0];
  const Scalar aE1 = ind.alphaE[1], bE1 = ind.betaE[1];
  const Scalar aE2 = ind.alphaE[2], bE2 = ind.betaE[2];
  const Scalar aR1 = ind.alphaR[0], bR1 = ind.betaR[0];
  const Scalar aR2 = ind.alphaR[1], bR2 = ind.betaR[1];

  EigenvalueBounds<Scalar> out;
  out.provenance.method = "n2-closed";

  const GammaAssignment<Scalar> g_neg_lb{{aE0, bE1, aE2}, {bR1, bR2}};
  out.neg.lo = roots_U(3, g_neg_lb).roots.front();
  out.provenance.neg_lb = {"negLB", {3}};

  const GammaAssignment<Scalar> g_neg_ub{{bE0, aE1}, {aR1}};
  const auto neg_ub = detail::largest_negative_root(roots_U(2, g_neg_ub));
  if (!neg_ub) throw NumericalError("bounds_n2_closed: U_2 lost its negative root");
  out.neg.hi = *neg_ub;
  out.provenance.neg_ub = {"negUB", {2}};

  const GammaAssignment<Scalar> g_pos_lb{{aE0, bE1, aE2}, {bR1, aR2}};
  const auto pos_lb3 = detail::smallest_positive_root(roots_U(3, g_pos_lb));
  if (!pos_lb3) throw NumericalError("bounds_n2_closed: U_3 lost its positive roots");
  out.pos.lo = std::min(aE0, *pos_lb3);
  out.provenance.pos_lb = {"posLB", aE0 <= *pos_lb3 ? std::vector<int>{1} : std::vector<int>{3}};

  const GammaAssignment<Scalar> g_pos_ub{{bE0, aE1, bE2}, {bR1, bR2}};
  out.pos.hi = roots_U(3, g_pos_ub).roots.back();
  out.provenance.pos_ub = {"posUB", {3}};
  return out;
}

/// Rectangular-tail (N = 2, n_2 > n_1) localization
/// I_1 u I_{E_2} u I_3: the positive interval is the hull of
/// [aE0, bE0], [aE2, bE2] and the positive U_3 corner roots; the negative
/// interval is swept over all U_3 corners; I_{E_2} is reported via extra.
template <typename Scalar>
EigenvalueBounds<Scalar> bounds_n2_rect(const IndicatorSet<Scalar>& ind) {
  validate_indicators(ind);
  if (ind.N != 2) throw std::invalid_argument("bounds_n2_rect: requires N = 2");
  if (!ind.rect_tail) throw std::invalid_argument("bounds_n2_rect: indicator set is not rect-tail");
  if (!(ind.alphaE[2] > Scalar(0)))
    throw std::invalid_argument("bounds_n2_rect: requires a positive E-interval at the last level");

  const CornerAssignments<Scalar> corners = corner_assignments(ind);
  EigenvalueBounds<Scalar> out;
  out.provenance.method = "n2-rect";
  out.provenance.hulled = true;
  out.extra = Interval<Scalar>{ind.alphaE[2], ind.betaE[2]};

  // Negative side: exhaustive sweep over the 2^5 corners of U_3.  The single
  // negative root of U_3 is monotone decreasing in every gamma_R, so the
  // alternating inner-corner pattern does not apply here.
  detail::ExtremumTracker<Scalar> neg_lo(false), neg_hi(true);
  for (std::uint64_t c = 0; c < 32; ++c) {
    GammaAssignment<Scalar> g;
    for (int m = 0; m <= 2; ++m)
      g.gammaE.push_back((c >> m) & 1 ? ind.betaE[m] : ind.alphaE[m]);
    for (int m = 1; m <= 2; ++m)
      g.gammaR.push_back((c >> (2 + m)) & 1 ? ind.betaR[m - 1] : ind.alphaR[m - 1]);
    for (Scalar r : roots_U(3, g).roots)
      if (r < Scalar(0)) {
        neg_lo.offer(3, r);
        neg_hi.offer(3, r);
      }
  }
  if (!neg_lo.value) throw NumericalError("bounds_n2_rect: U_3 corner sweep found no negative root");
  out.neg = {*neg_lo.value, *neg_hi.value};
  out.provenance.neg_lb = {"sweep", {3}};
  out.provenance.neg_ub = {"sweep", {3}};

  const auto pos_lb3 = detail::smallest_positive_root(roots_U(3, corners.pos_lb));
  const auto pos_ub3 = roots_U(3, corners.pos_ub).roots.back();
  if (!pos_lb3) throw NumericalError("bounds_n2_rect: U_3 lost its positive roots");
  out.pos.lo = std::min({ind.alphaE[0], ind.alphaE[2], *pos_lb3});
  out.pos.hi = std::max({ind.betaE[0], ind.betaE[2], pos_ub3});
  out.provenance.pos_lb = {"posLB", {3}};
  out.provenance.pos_ub = {"posUB", {3}};
  return out;
}

template <typename Scalar>
struct ContainmentReport {
  struct Entry {
    Scalar eigenvalue{};
    bool inside = false;
    Scalar slack{};  // depth inside the best interval; negative when outside
  };
  std::vector<Entry> entries;
  bool pass = true;
};

/// Per-eigenvalue verdicts against the closed interval union, with relative
/// tolerance rel_tol * max(1, |lambda|) on the endpoints.
template <typename Scalar>
ContainmentReport<Scalar> containment(const EigenvalueBounds<Scalar>& bounds,
                                      const std::vector<Scalar>& eigenvalues,
                                      Scalar rel_tol = Scalar(1e-8)) {
  std::vector<Interval<Scalar>> intervals = {bounds.neg, bounds.pos};
  if (bounds.extra) intervals.push_back(*bounds.extra);
  ContainmentReport<Scalar> report;
  for (Scalar lam : eigenvalues) {
    typename ContainmentReport<Scalar>::Entry e;
    e.eigenvalue = lam;
    e.slack = -std::numeric_limits<Scalar>::infinity();
    for (const auto& iv : intervals)
      e.slack = std::max(e.slack, std::min(lam - iv.lo, iv.hi - lam));
    e.inside = e.slack >= -rel_tol * std::max(Scalar(1), std::abs(lam));
    report.pass = report.pass && e.inside;
    report.entries.push_back(e);
  }
  return report;
}

}  // namespace saddlebounds
