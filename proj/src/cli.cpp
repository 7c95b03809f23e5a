#include "saddlebounds/cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "saddlebounds/json_io.hpp"
#include "saddlebounds/matrix_market.hpp"
#include "saddlebounds/minres.hpp"
#include "saddlebounds/randgen.hpp"

namespace saddlebounds::cli {
namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitConfigError = 2;

std::string g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string token;
  std::istringstream in(s);
  while (std::getline(in, token, sep)) out.push_back(token);
  return out;
}

std::vector<double> parse_doubles(const std::string& s) {
  std::vector<double> out;
  for (const auto& tok : split(s, ',')) {
    std::size_t used = 0;
    out.push_back(std::stod(tok, &used));
    if (used != tok.size()) throw std::invalid_argument("malformed number '" + tok + "'");
  }
  return out;
}

ApproxStrategy<double> parse_strategy(const std::string& token) {
  const auto parts = split(token, ':');
  const std::string& name = parts[0];
  if (name == "exact" && parts.size() == 1) return ApproxStrategy<double>::Exact();
  if (name == "jacobi" && parts.size() == 1) return ApproxStrategy<double>::Jacobi();
  if (name == "scaled_identity" && parts.size() == 2)
    return ApproxStrategy<double>::ScaledIdentity(std::stod(parts[1]));
  if (name == "spectral_window" && parts.size() == 3)
    return ApproxStrategy<double>::SpectralWindow(std::stod(parts[1]), std::stod(parts[2]));
  throw std::invalid_argument(
      "unknown approximation '" + token +
      "' (use exact | jacobi | scaled_identity:c | spectral_window:lo:hi)");
}

std::vector<ApproxStrategy<double>> parse_strategies(const std::string& spec, int levels) {
  const auto tokens = split(spec, ',');
  std::vector<ApproxStrategy<double>> out;
  if (tokens.size() == 1) {
    out.assign(levels, parse_strategy(tokens[0]));
  } else {
    if (static_cast<int>(tokens.size()) != levels)
      throw std::invalid_argument("expected one approximation per level (" + std::to_string(levels) +
                                  "), got " + std::to_string(tokens.size()));
    for (const auto& t : tokens) out.push_back(parse_strategy(t));
  }
  return out;
}

BlockSaddleSystem<double> load_system(const std::string& blocks, const std::string& offdiag) {
  std::vector<Matrix<double>> diag;
  for (const auto& path : split(blocks, ',')) diag.push_back(read_matrix_market(path));
  std::vector<Matrix<double>> off;
  for (const auto& path : split(offdiag, ',')) off.push_back(read_matrix_market(path));
  return BlockSaddleSystem<double>(std::move(diag), std::move(off));
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open file");
  json j;
  in >> j;
  return j;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open file for writing");
  out << text;
}

/// Flag-map config support: values from the JSON replace any flag the user
/// did not pass on the command line (flags win on conflict).
class ConfigMap {
 public:
  ConfigMap(const CLI::App* app, json values) : app_(app), values_(std::move(values)) {}

  template <typename T>
  void apply(const std::string& flag, T& target) const {
    if (!values_.is_object()) return;
    const std::string key = flag.substr(flag.find_first_not_of('-'));
    if (values_.contains(key) && app_->count("--" + key) == 0) target = values_.at(key).get<T>();
  }

 private:
  const CLI::App* app_;
  json values_;
};

std::string method_or_default(const std::string& method, const BlockSaddleSystem<double>& sys) {
  if (method != "auto") return method;
  return sys.rectangular_tail() ? "n2-rect" : "linear";
}

EigenvalueBounds<double> bounds_by_method(const std::string& method, const IndicatorSet<double>& ind) {
  if (method == "linear") return compute_bounds(ind);
  if (method == "bruteforce") return compute_bounds_bruteforce(ind);
  if (method == "n2-closed") return bounds_n2_closed(ind);
  if (method == "n2-rect") return bounds_n2_rect(ind);
  throw std::invalid_argument("unknown method '" + method + "'");
}

void print_indicator_rows(const IndicatorSet<double>& ind, std::ostream& os) {
  auto row = [&](const std::string& name, double lo, double hi) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%-6s [%.6g, %.6g]", name.c_str(), lo, hi);
    os << buf << "\n";
  };
  for (int k = 0; k <= ind.N; ++k) row("I_E" + std::to_string(k), ind.alphaE[k], ind.betaE[k]);
  for (int k = 1; k <= ind.N; ++k)
    row("I_R" + std::to_string(k), ind.alphaR[k - 1], ind.betaR[k - 1]);
}

void print_bounds_line(const EigenvalueBounds<double>& b, std::ostream& os) {
  os << "bounds: [" << g17(b.neg.lo) << ", " << g17(b.neg.hi) << "] u [" << g17(b.pos.lo) << ", "
     << g17(b.pos.hi) << "]";
  if (b.extra) os << " u extra [" << g17(b.extra->lo) << ", " << g17(b.extra->hi) << "]";
  os << "\n";
}

// ---------------------------------------------------------------------------
// analyze

struct AnalyzeOptions {
  std::string blocks, offdiag;
  std::string approx = "exact";
  std::string method = "auto";
  std::string out = "analysis.json";
  std::string config_path;
  double tol = 1e-10;
};

int run_analyze(const AnalyzeOptions& opt) {
  auto sys = load_system(opt.blocks, opt.offdiag);
  const auto report = validate_system(sys, opt.tol);
  if (!report.pass) {
    for (const auto& c : report.checks)
      if (!c.pass) std::cerr << "validation failed: " << c.name << " (" << c.detail << ")\n";
    return kExitCheckFailed;
  }
  const std::string method = method_or_default(opt.method, sys);
  if (method == "n2-rect" && !sys.rectangular_tail())
    throw std::invalid_argument("--method n2-rect requires a rectangular-tail N = 2 input");
  if ((method == "n2-rect" || method == "n2-closed") && sys.depth() != 2)
    throw std::invalid_argument("--method " + method + " requires N = 2 input");
  if (sys.rectangular_tail() && method != "n2-rect")
    throw std::invalid_argument("rectangular-tail input requires --method n2-rect");

  const auto chain = build_inexact_chain(sys, parse_strategies(opt.approx, sys.depth() + 1));
  const auto ind = compute_indicator_set(sys, chain);
  const auto bounds = bounds_by_method(method, ind);
  const auto spectrum = preconditioned_spectrum(sys, chain);
  const auto verdict = containment(bounds, spectrum.eigenvalues);

  print_indicator_rows(ind, std::cout);
  print_bounds_line(bounds, std::cout);
  if (spectrum.near_singular)
    std::cout << "warning: zero-gap " << g17(spectrum.zero_gap) << " below 1e-12\n";
  std::cout << "containment: " << (verdict.pass ? "pass" : "FAIL") << "\n";

  json doc{{"validation", report},
           {"indicators", ind},
           {"method", method},
           {"bounds", bounds},
           {"spectrum", spectrum},
           {"containment", verdict}};
  write_text_file(opt.out, doc.dump(2) + "\n");
  return verdict.pass ? kExitOk : kExitCheckFailed;
}

// ---------------------------------------------------------------------------
// bounds

struct BoundsOptions {
  std::string config_path;
  std::string indicators_path;
  std::string method = "linear";
  std::string json_out, csv_out;
};

std::string bounds_csv(const EigenvalueBounds<double>& b) {
  std::string s = "neg_lb,neg_ub,pos_lb,pos_ub,extra_lo,extra_hi\n";
  s += g17(b.neg.lo) + "," + g17(b.neg.hi) + "," + g17(b.pos.lo) + "," + g17(b.pos.hi);
  if (b.extra)
    s += "," + g17(b.extra->lo) + "," + g17(b.extra->hi);
  else
    s += ",,";
  return s + "\n";
}

int run_bounds(BoundsOptions opt, const CLI::App* sub) {
  std::optional<IndicatorSet<double>> ind;
  if (!opt.config_path.empty()) {
    const json doc = read_json_file(opt.config_path);
    if (doc.is_object() && doc.contains("alphaE")) {
      ind = doc.get<IndicatorSet<double>>();  // the config *is* the indicators document
    } else {
      const ConfigMap cfg(sub, doc);
      cfg.apply("--indicators", opt.indicators_path);
      cfg.apply("--method", opt.method);
      cfg.apply("--json", opt.json_out);
      cfg.apply("--csv", opt.csv_out);
    }
  }
  if (!ind) {
    if (opt.indicators_path.empty())
      throw std::invalid_argument("bounds: provide --config indicators.json or --indicators <path>");
    ind = read_json_file(opt.indicators_path).get<IndicatorSet<double>>();
  }

  const auto bounds = bounds_by_method(opt.method, *ind);
  json doc{{"neg", bounds.neg}, {"pos", bounds.pos}, {"provenance", bounds.provenance}};
  if (bounds.extra) doc["extra"] = *bounds.extra;
  if (opt.method == "bruteforce") {
    const auto linear = compute_bounds(*ind);
    const double dev =
        std::max({std::abs(linear.neg.lo - bounds.neg.lo), std::abs(linear.neg.hi - bounds.neg.hi),
                  std::abs(linear.pos.lo - bounds.pos.lo), std::abs(linear.pos.hi - bounds.pos.hi)});
    doc["agreement"] = json{{"max_endpoint_deviation", dev}, {"linear", linear}};
    std::cout << "bruteforce vs linear: max endpoint deviation " << g17(dev) << "\n";
  }
  if (!opt.json_out.empty()) write_text_file(opt.json_out, doc.dump(2) + "\n");
  if (!opt.csv_out.empty()) write_text_file(opt.csv_out, bounds_csv(bounds));
  if (opt.json_out.empty() && opt.csv_out.empty()) std::cout << doc.dump(2) << "\n";
  print_bounds_line(bounds, std::cout);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// solve

struct SolveOptions {
  std::string blocks, offdiag;
  std::string approx = "exact";
  std::string history_path;
  std::string config_path;
  double tol = 1e-14;
  int maxit = 2000;
};

int run_solve(const SolveOptions& opt) {
  const auto sys = load_system(opt.blocks, opt.offdiag);
  const auto chain = build_inexact_chain(sys, parse_strategies(opt.approx, sys.depth() + 1));
  const Matrix<double> A = assemble_full(sys);
  const Vector<double> b = A * Vector<double>::Ones(A.rows());  // true solution of all ones
  const auto report = minres(A, chain, b, opt.tol, opt.maxit);

  std::cout << "iterations: " << report.iterations << "\n"
            << "converged: " << (report.converged ? "yes" : "no") << "\n"
            << "breakdown: " << (report.breakdown ? "yes" : "no") << "\n"
            << "final relative residual: " << g17(report.residual_history.back()) << "\n"
            << "wall time [s]: " << report.wall_time_seconds << "\n";
  if (!opt.history_path.empty()) {
    std::string csv = "iteration,relative_residual\n";
    for (std::size_t k = 0; k < report.residual_history.size(); ++k)
      csv += std::to_string(k) + "," + g17(report.residual_history[k]) + "\n";
    write_text_file(opt.history_path, csv);
  }
  return report.converged ? kExitOk : kExitCheckFailed;
}

// ---------------------------------------------------------------------------
// suite

struct SuiteOptions {
  SuiteConfig config;
  std::string out = "results.csv";
  std::string svg_path;
  std::string config_path;
};

int run_suite_cmd(const SuiteOptions& opt) {
  const auto result = run_suite(opt.config);
  {
    std::ofstream os(opt.out);
    if (!os) throw std::runtime_error(opt.out + ": cannot open file for writing");
    write_suite_csv(result, os);
  }
  if (!opt.svg_path.empty()) {
    std::ofstream os(opt.svg_path);
    if (!os) throw std::runtime_error(opt.svg_path + ": cannot open file for writing");
    write_suite_svg(result, os);
  }
  const auto& s = result.summary;
  std::cout << "combinations: " << s.combinations << ", rows: " << s.rows << "\n"
            << "contained: " << s.contained_rows << "/" << s.rows << "\n";
  static const char* names[4] = {"mu_neg_lb", "mu_neg_ub", "mu_pos_lb", "mu_pos_ub"};
  for (int e = 0; e < 4; ++e)
    std::cout << names[e] << " slack min/mean/max: " << g17(s.min_slack[e]) << " / "
              << g17(s.mean_slack[e]) << " / " << g17(s.max_slack[e]) << "\n";
  return s.all_contained ? kExitOk : kExitCheckFailed;
}

// ---------------------------------------------------------------------------
// poly-roots

struct PolyRootsOptions {
  std::string gammaE, gammaR;
  int degree = 0;  // 0: infer as gammaE count
  bool as_json = false;
  std::string config_path;
};

int run_poly_roots(const PolyRootsOptions& opt) {
  GammaAssignment<double> g;
  g.gammaE = parse_doubles(opt.gammaE);
  if (!opt.gammaR.empty()) g.gammaR = parse_doubles(opt.gammaR);
  const int degree = opt.degree > 0 ? opt.degree : static_cast<int>(g.gammaE.size());
  const auto roots = roots_U(degree, g);
  if (opt.as_json) {
    const json doc{{"degree", roots.degree},
                   {"roots", roots.roots},
                   {"neg_count", roots.neg_count},
                   {"pos_count", roots.pos_count}};
    std::cout << doc.dump(2) << "\n";
  } else {
    for (std::size_t i = 0; i < roots.roots.size(); ++i)
      std::cout << (i ? "," : "") << g17(roots.roots[i]);
    std::cout << "\n";
  }
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"Certified eigenvalue bounds for block-preconditioned multiple saddle-point systems"};
  app.require_subcommand(1);

  AnalyzeOptions analyze;
  auto* analyze_cmd = app.add_subcommand(
      "analyze", "Indicators, bounds, exact spectrum and containment for a block system");
  analyze_cmd->add_option("--blocks", analyze.blocks, "Comma-separated Matrix Market files A_0..A_N")
      ->required();
  analyze_cmd->add_option("--offdiag", analyze.offdiag, "Comma-separated Matrix Market files B_1..B_N")
      ->required();
  analyze_cmd->add_option("--approx", analyze.approx,
                          "Per-level approximation (single value broadcasts)");
  analyze_cmd->add_option("--method", analyze.method, "auto|linear|bruteforce|n2-closed|n2-rect");
  analyze_cmd->add_option("--tol", analyze.tol, "Validation tolerance");
  analyze_cmd->add_option("--out", analyze.out, "Output JSON path");
  analyze_cmd->add_option("--config", analyze.config_path, "JSON flag map");

  BoundsOptions bounds;
  auto* bounds_cmd =
      app.add_subcommand("bounds", "Eigenvalue bounds from an indicator-interval document");
  bounds_cmd->add_option("--config", bounds.config_path,
                         "Indicators JSON document, or a JSON flag map");
  bounds_cmd->add_option("--indicators", bounds.indicators_path, "Indicators JSON document");
  bounds_cmd->add_option("--method", bounds.method, "linear|bruteforce|n2-closed|n2-rect");
  bounds_cmd->add_option("--json", bounds.json_out, "Write bounds JSON here");
  bounds_cmd->add_option("--csv", bounds.csv_out, "Write bounds CSV here");

  SolveOptions solve;
  auto* solve_cmd = app.add_subcommand("solve", "Preconditioned MINRES on the assembled system");
  solve_cmd->add_option("--blocks", solve.blocks, "Comma-separated Matrix Market files A_0..A_N")
      ->required();
  solve_cmd->add_option("--offdiag", solve.offdiag, "Comma-separated Matrix Market files B_1..B_N")
      ->required();
  solve_cmd->add_option("--approx", solve.approx, "Per-level approximation (single value broadcasts)");
  solve_cmd->add_option("--tol", solve.tol, "Relative preconditioned-residual tolerance");
  solve_cmd->add_option("--maxit", solve.maxit, "Iteration cap");
  solve_cmd->add_option("--history", solve.history_path, "Write residual history CSV here");
  solve_cmd->add_option("--config", solve.config_path, "JSON flag map");

  SuiteOptions suite;
  auto* suite_cmd =
      app.add_subcommand("suite", "Randomized verification sweep over indicator grids");
  suite_cmd->add_option("--n", suite.config.N, "Block depth N");
  suite_cmd->add_option("--grid", suite.config.grid, "table1|smoke");
  suite_cmd->add_option("--runs", suite.config.runs, "Runs per combination");
  suite_cmd->add_option("--seed", suite.config.seed, "Base seed");
  suite_cmd->add_option("--workers", suite.config.workers,
                        "Worker threads (default: SADDLEBOUNDS_THREADS or hardware)");
  suite_cmd->add_option("--out", suite.out, "Results CSV path");
  suite_cmd->add_option("--svg", suite.svg_path, "Scatter SVG path");
  suite_cmd->add_option("--config", suite.config_path, "JSON flag map");

  PolyRootsOptions poly;
  auto* poly_cmd = app.add_subcommand("poly-roots", "Roots of the parametric polynomial sequence");
  poly_cmd->add_option("--gammaE", poly.gammaE, "Comma-separated gamma_E values")->required();
  poly_cmd->add_option("--gammaR", poly.gammaR, "Comma-separated gamma_R values");
  poly_cmd->add_option("--degree", poly.degree, "Polynomial degree (default: count of gammaE)");
  poly_cmd->add_flag("--json", poly.as_json, "Emit the root set as JSON");
  poly_cmd->add_option("--config", poly.config_path, "JSON flag map");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfigError;
  }

  try {
    if (analyze_cmd->parsed()) {
      if (!analyze.config_path.empty()) {
        const ConfigMap cfg(analyze_cmd, read_json_file(analyze.config_path));
        cfg.apply("--approx", analyze.approx);
        cfg.apply("--method", analyze.method);
        cfg.apply("--tol", analyze.tol);
        cfg.apply("--out", analyze.out);
      }
      return run_analyze(analyze);
    }
    if (bounds_cmd->parsed()) return run_bounds(bounds, bounds_cmd);
    if (solve_cmd->parsed()) {
      if (!solve.config_path.empty()) {
        const ConfigMap cfg(solve_cmd, read_json_file(solve.config_path));
        cfg.apply("--approx", solve.approx);
        cfg.apply("--tol", solve.tol);
        cfg.apply("--maxit", solve.maxit);
        cfg.apply("--history", solve.history_path);
      }
      return run_solve(solve);
    }
    if (suite_cmd->parsed()) {
      if (!suite.config_path.empty()) {
        const ConfigMap cfg(suite_cmd, read_json_file(suite.config_path));
        cfg.apply("--n", suite.config.N);
        cfg.apply("--grid", suite.config.grid);
        cfg.apply("--runs", suite.config.runs);
        cfg.apply("--seed", suite.config.seed);
        cfg.apply("--workers", suite.config.workers);
        cfg.apply("--out", suite.out);
        cfg.apply("--svg", suite.svg_path);
      }
      return run_suite_cmd(suite);
    }
    if (poly_cmd->parsed()) return run_poly_roots(poly);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const MatrixMarketError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCheckFailed;
  }
  return kExitConfigError;
}

}  // namespace saddlebounds::cli
