#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace revtp {

enum class ErrorKind {
  kBalance,
  kDomain,
  kShape,
  kDegenerateCosts,
  kZeroVector,
  kInfeasibleFreeVars,
  kEmptyRegion,
  kDegenerateObjective,
  kUnbounded,
  kDegenerateVertex,
  kParallelPair,
  kDegenerateRegion,
  kUnsupportedDimension,
  kNotAVertex,
  kDimensionMismatch,
  kNoObservations,
  kZeroSum,
  kParse,
};

// Stable error names; these are what the CLI prints and the service returns.
constexpr std::string_view error_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kBalance: return "BalanceError";
    case ErrorKind::kDomain: return "DomainError";
    case ErrorKind::kShape: return "ShapeError";
    case ErrorKind::kDegenerateCosts: return "DegenerateCosts";
    case ErrorKind::kZeroVector: return "ZeroVector";
    case ErrorKind::kInfeasibleFreeVars: return "InfeasibleFreeVars";
    case ErrorKind::kEmptyRegion: return "EmptyRegion";
    case ErrorKind::kDegenerateObjective: return "DegenerateObjective";
    case ErrorKind::kUnbounded: return "Unbounded";
    case ErrorKind::kDegenerateVertex: return "DegenerateVertex";
    case ErrorKind::kParallelPair: return "ParallelPair";
    case ErrorKind::kDegenerateRegion: return "DegenerateRegion";
    case ErrorKind::kUnsupportedDimension: return "UnsupportedDimension";
    case ErrorKind::kNotAVertex: return "NotAVertex";
    case ErrorKind::kDimensionMismatch: return "DimensionMismatch";
    case ErrorKind::kNoObservations: return "NoObservations";
    case ErrorKind::kZeroSum: return "ZeroSum";
    case ErrorKind::kParse: return "ParseError";
  }
  return "Error";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(error_name(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  std::string_view name() const noexcept { return error_name(kind_); }

 private:
  ErrorKind kind_;
};

}  // namespace revtp
