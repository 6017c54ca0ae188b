#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace stqmle {

using Index = std::int64_t;

enum class ErrorCode {
  kInvalidArgument,
  kDimensionMismatch,
  kNotPositiveDefinite,
  kNoConvergence,
  kSymmetryViolation,
  kInfeasibleTheta,
  kSingularDesign,
  kNonfiniteValue,
  kNoAscent,
  kTooFewBlocks,
  kGuardExceeded,
  kParse,
  kIo,
};

const char* ToString(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Raised by the banded Cholesky when a pivot is not strictly positive.
class NotPositiveDefinite : public Error {
 public:
  NotPositiveDefinite(Index pivot, double value);

  Index pivot_index() const noexcept { return pivot_; }
  double pivot_value() const noexcept { return value_; }

 private:
  Index pivot_;
  double value_;
};

// Raised by the Lanczos eigensolver; carries the best Ritz estimates seen.
class NoConvergence : public Error {
 public:
  NoConvergence(const std::string& what, double d_min, double d_max,
                double residual_min, double residual_max);

  double d_min() const noexcept { return d_min_; }
  double d_max() const noexcept { return d_max_; }
  double residual_min() const noexcept { return residual_min_; }
  double residual_max() const noexcept { return residual_max_; }

 private:
  double d_min_, d_max_, residual_min_, residual_max_;
};

// Parse errors report the 1-based line and column of the offending token.
class ParseError : public Error {
 public:
  ParseError(const std::string& source, std::int64_t line, std::int64_t column,
             const std::string& message);

  std::int64_t line() const noexcept { return line_; }
  std::int64_t column() const noexcept { return column_; }

 private:
  std::int64_t line_;
  std::int64_t column_;
};

}  // namespace stqmle
