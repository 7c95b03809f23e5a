#pragma once

#include <Eigen/Dense>

#include <stdexcept>

namespace saddlebounds {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Index = Eigen::Index;

/// Closed interval [lo, hi].
template <typename Scalar>
struct Interval {
  Scalar lo{};
  Scalar hi{};

  Scalar width() const { return hi - lo; }
  bool contains(Scalar x) const { return lo <= x && x <= hi; }
  bool operator==(const Interval&) const = default;
};

/// Inconsistent block dimensions or otherwise malformed structure.
struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A spectral requirement failed (definiteness, rank, root acceptance, ...).
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace saddlebounds
