#include "stqmle/error.hpp"

#include <sstream>

namespace stqmle {

const char* ToString(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kNotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::kNoConvergence: return "NoConvergence";
    case ErrorCode::kSymmetryViolation: return "SymmetryViolation";
    case ErrorCode::kInfeasibleTheta: return "InfeasibleTheta";
    case ErrorCode::kSingularDesign: return "SingularDesign";
    case ErrorCode::kNonfiniteValue: return "NonfiniteValue";
    case ErrorCode::kNoAscent: return "NoAscent";
    case ErrorCode::kTooFewBlocks: return "TooFewBlocks";
    case ErrorCode::kGuardExceeded: return "GuardExceeded";
    case ErrorCode::kParse: return "Parse";
    case ErrorCode::kIo: return "Io";
  }
  return "Unknown";
}

namespace {

std::string PivotMessage(Index pivot, double value) {
  std::ostringstream os;
  os << "matrix is not positive definite: pivot " << pivot << " = " << value;
  return os.str();
}

std::string ParseMessage(const std::string& source, std::int64_t line,
                         std::int64_t column, const std::string& message) {
  std::ostringstream os;
  os << source << ":" << line << ":" << column << ": " << message;
  return os.str();
}

}  // namespace

NotPositiveDefinite::NotPositiveDefinite(Index pivot, double value)
    : Error(ErrorCode::kNotPositiveDefinite, PivotMessage(pivot, value)),
      pivot_(pivot),
      value_(value) {}

NoConvergence::NoConvergence(const std::string& what, double d_min,
                             double d_max, double residual_min,
                             double residual_max)
    : Error(ErrorCode::kNoConvergence, what),
      d_min_(d_min),
      d_max_(d_max),
      residual_min_(residual_min),
      residual_max_(residual_max) {}

ParseError::ParseError(const std::string& source, std::int64_t line,
                       std::int64_t column, const std::string& message)
    : Error(ErrorCode::kParse, ParseMessage(source, line, column, message)),
      line_(line),
      column_(column) {}

}  // namespace stqmle
