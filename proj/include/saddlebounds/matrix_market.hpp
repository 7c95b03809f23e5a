#pragma once

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <string>

#include "saddlebounds/types.hpp"

namespace saddlebounds {

struct MatrixMarketError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

[[noreturn]] inline void mm_fail(const std::string& path, long line, const std::string& what) {
  throw MatrixMarketError(path + ":" + std::to_string(line) + ": " + what);
}

}  // namespace detail

/// Reads a Matrix Market file (coordinate real, general or symmetric) into a
/// dense matrix.  Symmetric inputs are mirrored across the diagonal.
inline Matrix<double> read_matrix_market(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MatrixMarketError(path + ": cannot open file");
  std::string line;
  long lineno = 0;

  if (!std::getline(in, line)) detail::mm_fail(path, 1, "empty file");
  ++lineno;
  std::istringstream header(detail::lower(line));
  std::string banner, object, format, field, symmetry;
  header >> banner >> object >> format >> field >> symmetry;
  if (banner != "%%matrixmarket" || object != "matrix")
    detail::mm_fail(path, lineno, "not a Matrix Market matrix header");
  if (format != "coordinate")
    detail::mm_fail(path, lineno, "unsupported format '" + format + "' (coordinate only)");
  if (field != "real")
    detail::mm_fail(path, lineno, "unsupported field '" + field + "' (real only)");
  if (symmetry != "general" && symmetry != "symmetric")
    detail::mm_fail(path, lineno, "unsupported symmetry '" + symmetry + "'");
  const bool symmetric = symmetry == "symmetric";

  Index rows = 0, cols = 0;
  long nnz = 0;
  for (;;) {
    if (!std::getline(in, line)) detail::mm_fail(path, lineno, "missing size line");
    ++lineno;
    if (!line.empty() && line[0] == '%') continue;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream size_line(line);
    if (!(size_line >> rows >> cols >> nnz)) detail::mm_fail(path, lineno, "malformed size line");
    break;
  }
  if (rows < 0 || cols < 0 || nnz < 0) detail::mm_fail(path, lineno, "negative size");
  if (symmetric && rows != cols) detail::mm_fail(path, lineno, "symmetric matrix must be square");

  Matrix<double> M = Matrix<double>::Zero(rows, cols);
  long seen = 0;
  while (seen < nnz) {
    if (!std::getline(in, line))
      detail::mm_fail(path, lineno, "unexpected end of file: expected " + std::to_string(nnz) +
                                        " entries, found " + std::to_string(seen));
    ++lineno;
    if (!line.empty() && line[0] == '%') continue;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream entry(line);
    Index i = 0, j = 0;
    double v = 0;
    if (!(entry >> i >> j >> v)) detail::mm_fail(path, lineno, "malformed entry");
    if (i < 1 || i > rows || j < 1 || j > cols) detail::mm_fail(path, lineno, "entry index out of range");
    M(i - 1, j - 1) = v;
    if (symmetric) M(j - 1, i - 1) = v;
    ++seen;
  }
  return M;
}

/// Writes a dense matrix in coordinate real format, dropping exact zeros.
/// With symmetric = true only the lower triangle is stored.
inline void write_matrix_market(const std::string& path, const Matrix<double>& M,
                                bool symmetric = false) {
  if (symmetric && M.rows() != M.cols())
    throw MatrixMarketError(path + ": symmetric output requires a square matrix");
  std::ofstream out(path);
  if (!out) throw MatrixMarketError(path + ": cannot open file for writing");
  long nnz = 0;
  for (Index j = 0; j < M.cols(); ++j)
    for (Index i = symmetric ? j : 0; i < M.rows(); ++i)
      if (M(i, j) != 0.0) ++nnz;
  out << "%%MatrixMarket matrix coordinate real " << (symmetric ? "symmetric" : "general") << "\n";
  out << M.rows() << ' ' << M.cols() << ' ' << nnz << "\n";
  char buf[40];
  for (Index j = 0; j < M.cols(); ++j)
    for (Index i = symmetric ? j : 0; i < M.rows(); ++i)
      if (M(i, j) != 0.0) {
        std::snprintf(buf, sizeof(buf), "%.17g", M(i, j));
        out << (i + 1) << ' ' << (j + 1) << ' ' << buf << "\n";
      }
}

}  // namespace saddlebounds
