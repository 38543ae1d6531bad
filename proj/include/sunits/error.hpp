#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sunits {

enum class ErrorKind {
  // input validation
  InvalidArgument,
  ConfigError,
  NotMonic,
  NotSquarefree,
  DetectedReducible,
  DivisionByZero,
  IndexDivisor,
  ZeroElement,
  MissingUnitData,
  NotSUnit,
  RootExtractionFailed,
  ZeroDenominator,
  CoefficientBlowup,
  ConstantMap,
  NotTotallyRamifiedShape,
  RootsNotDistinct,
  RootsNotInField,
  NotMonicOverOS,
  PrimeTooSmall,
  NotSUnitValue,
  ShapeMismatch,
  HypothesisFailed,
  DuplicateNodes,
  Unsupported,
  // a proved statement would be contradicted; always an implementation bug
  TrajectoryMismatch,
  AssertionFailed,
};

constexpr std::string_view to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::NotMonic: return "NotMonic";
    case ErrorKind::NotSquarefree: return "NotSquarefree";
    case ErrorKind::DetectedReducible: return "DetectedReducible";
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::IndexDivisor: return "IndexDivisor";
    case ErrorKind::ZeroElement: return "ZeroElement";
    case ErrorKind::MissingUnitData: return "MissingUnitData";
    case ErrorKind::NotSUnit: return "NotSUnit";
    case ErrorKind::RootExtractionFailed: return "RootExtractionFailed";
    case ErrorKind::ZeroDenominator: return "ZeroDenominator";
    case ErrorKind::CoefficientBlowup: return "CoefficientBlowup";
    case ErrorKind::ConstantMap: return "ConstantMap";
    case ErrorKind::NotTotallyRamifiedShape: return "NotTotallyRamifiedShape";
    case ErrorKind::RootsNotDistinct: return "RootsNotDistinct";
    case ErrorKind::RootsNotInField: return "RootsNotInField";
    case ErrorKind::NotMonicOverOS: return "NotMonicOverOS";
    case ErrorKind::PrimeTooSmall: return "PrimeTooSmall";
    case ErrorKind::NotSUnitValue: return "NotSUnitValue";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::HypothesisFailed: return "HypothesisFailed";
    case ErrorKind::DuplicateNodes: return "DuplicateNodes";
    case ErrorKind::Unsupported: return "Unsupported";
    case ErrorKind::TrajectoryMismatch: return "TrajectoryMismatch";
    case ErrorKind::AssertionFailed: return "AssertionFailed";
  }
  return "Unknown";
}

/// Every failure raised by the library carries a machine-readable kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  /// True for failures that would contradict a proved statement.
  bool is_internal_assertion() const noexcept {
    return kind_ == ErrorKind::AssertionFailed || kind_ == ErrorKind::TrajectoryMismatch;
  }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool cond, ErrorKind kind, const std::string& what) {
  if (!cond) fail(kind, what);
}

}  // namespace sunits
