#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace graphkdd {

enum class ErrorCode {
  ColumnCountMismatch,
  NumericParseError,
  InvalidValue,
  SchemaMismatch,
  IoError,
  CapacityExceeded,
  InvalidConfig,
  EmptyEdgePool,
  UnknownNode,
  UnknownFormat,
  GraphTooSmall,
  NoConvergence,
  EmptyMetrics,
  EmptyGraph,
  MissingMetrics,
  SingleClass,
  TooFewRows,
  SplitMismatch,
  MissingArtifact,
  MissingInput,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::ColumnCountMismatch: return "ColumnCountMismatch";
    case ErrorCode::NumericParseError: return "NumericParseError";
    case ErrorCode::InvalidValue: return "InvalidValue";
    case ErrorCode::SchemaMismatch: return "SchemaMismatch";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::CapacityExceeded: return "CapacityExceeded";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::EmptyEdgePool: return "EmptyEdgePool";
    case ErrorCode::UnknownNode: return "UnknownNode";
    case ErrorCode::UnknownFormat: return "UnknownFormat";
    case ErrorCode::GraphTooSmall: return "GraphTooSmall";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::EmptyMetrics: return "EmptyMetrics";
    case ErrorCode::EmptyGraph: return "EmptyGraph";
    case ErrorCode::MissingMetrics: return "MissingMetrics";
    case ErrorCode::SingleClass: return "SingleClass";
    case ErrorCode::TooFewRows: return "TooFewRows";
    case ErrorCode::SplitMismatch: return "SplitMismatch";
    case ErrorCode::MissingArtifact: return "MissingArtifact";
    case ErrorCode::MissingInput: return "MissingInput";
  }
  return "Unknown";
}

/// Exception carrying a machine-checkable error code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code),
        detail_(message) {}

  ErrorCode code() const noexcept { return code_; }
  /// Message without the code prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace graphkdd
