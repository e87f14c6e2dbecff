#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace swcca {

/// Base class for every error raised by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class DimensionMismatch : public Error {
 public:
  explicit DimensionMismatch(const std::string& msg) : Error(msg) {}
};

/// A column has zero variance where standardization requires spread.
class ConstantColumn : public Error {
 public:
  ConstantColumn(std::size_t column, const std::string& msg)
      : Error(msg), column_(column) {}
  std::size_t column() const { return column_; }

 private:
  std::size_t column_;
};

/// Sparsity projection wiped out every entry; the iterate is degenerate.
class ZeroProjection : public Error {
 public:
  explicit ZeroProjection(const std::string& msg, long iteration = -1)
      : Error(msg), iteration_(iteration) {}
  /// Sweep index at which the degeneracy occurred, or -1 outside a solver.
  long iteration() const { return iteration_; }

 private:
  long iteration_;
};

class InvalidK : public Error {
 public:
  explicit InvalidK(const std::string& msg) : Error(msg) {}
};

/// Weighted projections are constant, so a correlation is undefined.
class DegenerateVariance : public Error {
 public:
  explicit DegenerateVariance(const std::string& msg) : Error(msg) {}
};

/// L1-ball radius below 1 cannot intersect the unit L2 sphere.
class InfeasibleRadius : public Error {
 public:
  explicit InfeasibleRadius(const std::string& msg) : Error(msg) {}
};

class NonFiniteValue : public Error {
 public:
  explicit NonFiniteValue(const std::string& msg) : Error(msg) {}
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& msg) : Error(msg) {}
};

}  // namespace swcca
