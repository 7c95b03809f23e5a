#pragma once

#include <atomic>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "saddlebounds/block_system.hpp"
#include "saddlebounds/bounds.hpp"
#include "saddlebounds/indicators.hpp"
#include "saddlebounds/rng.hpp"
#include "saddlebounds/schur_chain.hpp"
#include "saddlebounds/spectrum.hpp"

namespace saddlebounds {

struct RandomSystemOptions {
  int dim_base = 50;
  int dim_jitter = 10;
  bool zero_tail_blocks = false;  // A_k = 0 for k >= 1 (the E_i == 0 setting)
  double psd_margin = 0.0;        // extra shift (relative to ||A||) for k >= 1
  bool rect_tail = false;         // N = 2 only: draw n_2 > n_1
};

namespace detail {

inline Matrix<double> random_symmetric(Rng& rng, Index n) {
  Matrix<double> G(n, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i) G(i, j) = rng.normal();
  return 0.5 * (G + G.transpose());
}

/// Symmetrized Gaussian shifted by |lambda_min| (plus a relative margin) so
/// the result is positive semi-definite, or definite when the margin is
/// positive.
inline Matrix<double> random_psd(Rng& rng, Index n, double rel_margin) {
  Matrix<double> A = random_symmetric(rng, n);
  Eigen::SelfAdjointEigenSolver<Matrix<double>> es(A, Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues().minCoeff();
  const double norm = std::max(std::abs(lmin), std::abs(es.eigenvalues().maxCoeff()));
  A += (std::abs(lmin) + rel_margin * norm) * Matrix<double>::Identity(n, n);
  return A;
}

inline Matrix<double> random_full_rank(Rng& rng, Index rows, Index cols) {
  for (int attempt = 0; attempt < 10; ++attempt) {
    Matrix<double> B(rows, cols);
    for (Index j = 0; j < cols; ++j)
      for (Index i = 0; i < rows; ++i) B(i, j) = rng.normal();
    Eigen::JacobiSVD<Matrix<double>> svd(B);
    const auto& sv = svd.singularValues();
    if (sv(sv.size() - 1) > 1e-10 * sv(0)) return B;
  }
  throw NumericalError("random_full_rank: persistent rank deficiency");
}

}  // namespace detail

/// Random admissible system: dimensions are the closest integer to
/// base + jitter*u, redrawn until n_k <= n_{k-1}; A_0 is a shifted
/// symmetrized Gaussian made definite by a 1e-3*||A|| margin, A_k (k >= 1)
/// are shifted to the semi-definite boundary; B_k are Gaussian with the rank
/// verified.
inline BlockSaddleSystem<double> random_system(int N, std::uint64_t seed,
                                               const RandomSystemOptions& opt = {}) {
  if (N < 0) throw std::invalid_argument("random_system: N must be >= 0");
  if (opt.rect_tail && N != 2)
    throw std::invalid_argument("random_system: rect_tail is supported for N = 2 only");
  Rng rng(seed);
  auto draw_dim = [&] { return static_cast<Index>(std::llround(opt.dim_base + opt.dim_jitter * rng.uniform())); };

  std::vector<Index> dims(N + 1);
  dims[0] = draw_dim();
  for (int k = 1; k <= N; ++k) {
    if (opt.rect_tail && k == N) {
      dims[k] = dims[k - 1] + 1 + static_cast<Index>(std::floor(opt.dim_jitter * rng.uniform()));
      continue;
    }
    do {
      dims[k] = draw_dim();
    } while (dims[k] > dims[k - 1]);
  }

  std::vector<Matrix<double>> diag;
  for (int k = 0; k <= N; ++k) {
    if (k >= 1 && opt.zero_tail_blocks)
      diag.push_back(Matrix<double>::Zero(dims[k], dims[k]));
    else
      diag.push_back(detail::random_psd(rng, dims[k], k == 0 ? 1e-3 : opt.psd_margin));
  }
  std::vector<Matrix<double>> offdiag;
  for (int k = 1; k <= N; ++k) offdiag.push_back(detail::random_full_rank(rng, dims[k], dims[k - 1]));
  return BlockSaddleSystem<double>(std::move(diag), std::move(offdiag));
}

/// Chain whose level-k pencil spectrum hits the target interval exactly: the
/// approximation is the affine blend of the level target (A_0 at level 0,
/// S~_k above) with the identity.
inline SchurChain<double> controlled_chain(const BlockSaddleSystem<double>& sys,
                                           const std::vector<Interval<double>>& targets) {
  if (static_cast<int>(targets.size()) != sys.depth() + 1)
    throw std::invalid_argument("controlled_chain: expected one target interval per level");
  std::vector<ApproxStrategy<double>> strategies;
  strategies.reserve(targets.size());
  for (const auto& t : targets)
    strategies.push_back(ApproxStrategy<double>::SpectralWindow(t.lo, t.hi));
  return build_inexact_chain(sys, strategies);
}

struct SuiteConfig {
  int N = 2;
  std::string grid = "table1";  // "table1" or "smoke"
  int runs = 10;
  std::uint64_t seed = 42;
  int workers = 0;  // 0: default parallelism (SADDLEBOUNDS_THREADS or hardware)
  double containment_rel_tol = 1e-8;
};

/// Candidate values per interval endpoint, ordered
/// alphaE0, betaE0, alphaR1, betaR1, ..., alphaRN, betaRN.  Combinations are
/// enumerated in mixed radix with the last endpoint fastest.
inline std::vector<std::vector<double>> suite_grid(const SuiteConfig& config) {
  std::vector<double> alphas, betas;
  if (config.grid == "table1" && config.N == 2) {
    alphas = {0.1, 0.3, 0.9};
    betas = {1.2, 1.8, 5.0};
  } else if (config.grid == "table1" || config.grid == "smoke") {
    alphas = {0.1, 0.9};
    betas = {1.2, 5.0};
  } else {
    throw std::invalid_argument("suite_grid: unknown grid '" + config.grid + "'");
  }
  std::vector<std::vector<double>> endpoints;
  for (int level = 0; level <= config.N; ++level) {
    endpoints.push_back(alphas);
    endpoints.push_back(betas);
  }
  return endpoints;
}

inline std::int64_t suite_combination_count(const SuiteConfig& config) {
  std::int64_t count = 1;
  for (const auto& c : suite_grid(config)) count *= static_cast<std::int64_t>(c.size());
  return count;
}

struct SuiteRow {
  std::int64_t combo = 0;
  int run = 0;
  std::vector<double> targets;  // endpoint values, grid order
  std::array<double, 4> extremal{};
  std::array<double, 4> bounds{};  // mu-_LB, mu-_UB, mu+_LB, mu+_UB
  bool contained = false;
  std::array<double, 4> slack{};
};

struct SuiteSummary {
  std::array<double, 4> min_slack{};
  std::array<double, 4> max_slack{};
  std::array<double, 4> mean_slack{};
  std::array<double, 4> min_rel_slack{};  // slack over the width of its interval
  std::int64_t combinations = 0;
  std::int64_t rows = 0;
  std::int64_t contained_rows = 0;
  bool all_contained = false;
};

struct SuiteResult {
  SuiteConfig config;
  std::vector<SuiteRow> rows;  // ordered by (combo, run)
  SuiteSummary summary;
};

namespace detail {

inline std::vector<Interval<double>> combo_targets(const std::vector<std::vector<double>>& grid,
                                                   std::int64_t combo) {
  std::vector<double> values(grid.size());
  std::int64_t rem = combo;
  for (std::size_t i = grid.size(); i-- > 0;) {
    const auto& cand = grid[i];
    values[i] = cand[rem % cand.size()];
    rem /= cand.size();
  }
  std::vector<Interval<double>> targets;
  for (std::size_t i = 0; i + 1 < values.size(); i += 2) targets.push_back({values[i], values[i + 1]});
  return targets;
}

inline int resolve_workers(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("SADDLEBOUNDS_THREADS")) {
    const int parsed = std::atoi(env);
    if (parsed > 0) return parsed;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace detail

/// Runs every (combination, run) case: generate the E_i == 0 system, build
/// the window-controlled chain, compute indicators, bounds and the exact
/// spectrum, and record the containment verdict with per-endpoint slacks.
/// Cases execute concurrently; rows are merged back in combination order so
/// the output is independent of scheduling.
inline SuiteResult run_suite(const SuiteConfig& config) {
  const auto grid = suite_grid(config);
  const std::int64_t combos = suite_combination_count(config);
  const std::int64_t total = combos * config.runs;

  SuiteResult result;
  result.config = config;
  result.rows.resize(total);

  std::atomic<std::int64_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::int64_t i = next.fetch_add(1);
      if (i >= total) return;
      const std::int64_t combo = i / config.runs;
      const int run = static_cast<int>(i % config.runs);
      const auto targets = detail::combo_targets(grid, combo);

      RandomSystemOptions opt;
      opt.zero_tail_blocks = true;
      const auto sys = random_system(config.N, stream_seed(config.seed, combo, run), opt);
      const auto chain = controlled_chain(sys, targets);
      const auto ind = compute_indicator_set(sys, chain);
      const auto bounds = compute_bounds(ind);
      const auto spectrum = preconditioned_spectrum(sys, chain);
      const auto ext = extremal_eigs(spectrum);
      const auto verdict = containment(bounds, spectrum.eigenvalues, config.containment_rel_tol);

      SuiteRow row;
      row.combo = combo;
      row.run = run;
      for (const auto& t : targets) {
        row.targets.push_back(t.lo);
        row.targets.push_back(t.hi);
      }
      row.extremal = ext;
      row.bounds = {bounds.neg.lo, bounds.neg.hi, bounds.pos.lo, bounds.pos.hi};
      row.contained = verdict.pass;
      row.slack = {ext[0] - bounds.neg.lo, bounds.neg.hi - ext[1], ext[2] - bounds.pos.lo,
                   bounds.pos.hi - ext[3]};
      result.rows[i] = std::move(row);
    }
  };

  const int workers = std::min<std::int64_t>(detail::resolve_workers(config.workers), total);
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  SuiteSummary& s = result.summary;
  s.combinations = combos;
  s.rows = total;
  s.min_slack.fill(std::numeric_limits<double>::infinity());
  s.min_rel_slack.fill(std::numeric_limits<double>::infinity());
  s.max_slack.fill(-std::numeric_limits<double>::infinity());
  s.mean_slack.fill(0.0);
  for (const auto& row : result.rows) {
    if (row.contained) ++s.contained_rows;
    const double widths[4] = {row.bounds[1] - row.bounds[0], row.bounds[1] - row.bounds[0],
                              row.bounds[3] - row.bounds[2], row.bounds[3] - row.bounds[2]};
    for (int e = 0; e < 4; ++e) {
      s.min_slack[e] = std::min(s.min_slack[e], row.slack[e]);
      s.max_slack[e] = std::max(s.max_slack[e], row.slack[e]);
      s.mean_slack[e] += row.slack[e] / static_cast<double>(total);
      if (widths[e] > 0) s.min_rel_slack[e] = std::min(s.min_rel_slack[e], row.slack[e] / widths[e]);
    }
  }
  s.all_contained = s.contained_rows == s.rows;
  return result;
}

namespace detail {

inline std::string g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace detail

inline std::vector<std::string> suite_endpoint_names(int N) {
  std::vector<std::string> names = {"alphaE0", "betaE0"};
  for (int k = 1; k <= N; ++k) {
    names.push_back("alphaR" + std::to_string(k));
    names.push_back("betaR" + std::to_string(k));
  }
  return names;
}

/// CSV rows sorted by (combination, run); numbers carry 17 significant
/// digits so reruns are diff-stable.
inline void write_suite_csv(const SuiteResult& result, std::ostream& os) {
  os << "combo,run";
  for (const auto& name : suite_endpoint_names(result.config.N)) os << ',' << name;
  os << ",lam_neg_min,lam_neg_max,lam_pos_min,lam_pos_max"
     << ",mu_neg_lb,mu_neg_ub,mu_pos_lb,mu_pos_ub"
     << ",contained,slack_neg_lb,slack_neg_ub,slack_pos_lb,slack_pos_ub\n";
  for (const auto& row : result.rows) {
    os << row.combo << ',' << row.run;
    for (double t : row.targets) os << ',' << detail::g17(t);
    for (double v : row.extremal) os << ',' << detail::g17(v);
    for (double v : row.bounds) os << ',' << detail::g17(v);
    os << ',' << (row.contained ? 1 : 0);
    for (double v : row.slack) os << ',' << detail::g17(v);
    os << '\n';
  }
}

/// Ordered scatter of the extremal eigenvalues (dots) against the bounds
/// (lines): each endpoint class is sorted ascending and plotted over its
/// rank, mirroring the suite comparison figures.
inline void write_suite_svg(const SuiteResult& result, std::ostream& os) {
  const int width = 960, height = 640, margin = 48;
  const std::size_t n = result.rows.size();
  if (n == 0) {
    os << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width << "' height='" << height
       << "'/>\n";
    return;
  }
  double ymin = std::numeric_limits<double>::infinity();
  double ymax = -std::numeric_limits<double>::infinity();
  for (const auto& row : result.rows) {
    for (double v : row.extremal) {
      ymin = std::min(ymin, v);
      ymax = std::max(ymax, v);
    }
    for (double v : row.bounds) {
      ymin = std::min(ymin, v);
      ymax = std::max(ymax, v);
    }
  }
  const double pad = 0.05 * (ymax - ymin + 1e-12);
  ymin -= pad;
  ymax += pad;
  auto xpix = [&](std::size_t i) {
    return margin + (width - 2.0 * margin) * (n == 1 ? 0.5 : static_cast<double>(i) / (n - 1));
  };
  auto ypix = [&](double v) { return height - margin - (height - 2.0 * margin) * (v - ymin) / (ymax - ymin); };

  os << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width << "' height='" << height
     << "'>\n<rect width='100%' height='100%' fill='white'/>\n";
  os << "<line x1='" << margin << "' y1='" << ypix(0.0) << "' x2='" << width - margin << "' y2='"
     << ypix(0.0) << "' stroke='#bbbbbb'/>\n";
  for (int e = 0; e < 4; ++e) {
    std::vector<double> eigs, bnds;
    eigs.reserve(n);
    bnds.reserve(n);
    for (const auto& row : result.rows) {
      eigs.push_back(row.extremal[e]);
      bnds.push_back(row.bounds[e]);
    }
    std::sort(eigs.begin(), eigs.end());
    std::sort(bnds.begin(), bnds.end());
    os << "<polyline fill='none' stroke='#cc2222' stroke-width='1.2' points='";
    for (std::size_t i = 0; i < n; ++i) os << xpix(i) << ',' << ypix(bnds[i]) << ' ';
    os << "'/>\n";
    for (std::size_t i = 0; i < n; ++i)
      os << "<circle cx='" << xpix(i) << "' cy='" << ypix(eigs[i]) << "' r='1.4' fill='#2244cc'/>\n";
  }
  os << "</svg>\n";
}

}  // namespace saddlebounds
