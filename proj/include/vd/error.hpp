#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace vd {

enum class ErrorKind {
  Io,
  BadMagic,
  TruncatedPayload,
  NonFiniteValue,
  DuplicateIndex,
  GapInIndices,
  MalformedRow,
  DimensionMismatch,
  LayoutMismatch,
  InvalidCode,
  EmptySynset,
  IndexOutOfRange,
  TooFewSynsets,
  CycleDetected,
  UnknownSynset,
  NoCommonAncestor,
  MissingIC,
  ZeroDenominator,
  InsufficientOverlap,
  ZeroVariance,
  DegenerateMatrix,
  InvalidArgument,
};

constexpr std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Io: return "Io";
    case ErrorKind::BadMagic: return "BadMagic";
    case ErrorKind::TruncatedPayload: return "TruncatedPayload";
    case ErrorKind::NonFiniteValue: return "NonFiniteValue";
    case ErrorKind::DuplicateIndex: return "DuplicateIndex";
    case ErrorKind::GapInIndices: return "GapInIndices";
    case ErrorKind::MalformedRow: return "MalformedRow";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::LayoutMismatch: return "LayoutMismatch";
    case ErrorKind::InvalidCode: return "InvalidCode";
    case ErrorKind::EmptySynset: return "EmptySynset";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::TooFewSynsets: return "TooFewSynsets";
    case ErrorKind::CycleDetected: return "CycleDetected";
    case ErrorKind::UnknownSynset: return "UnknownSynset";
    case ErrorKind::NoCommonAncestor: return "NoCommonAncestor";
    case ErrorKind::MissingIC: return "MissingIC";
    case ErrorKind::ZeroDenominator: return "ZeroDenominator";
    case ErrorKind::InsufficientOverlap: return "InsufficientOverlap";
    case ErrorKind::ZeroVariance: return "ZeroVariance";
    case ErrorKind::DegenerateMatrix: return "DegenerateMatrix";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

/// True for errors caused by malformed input files (as opposed to inputs that
/// parse but cannot be computed on).
constexpr bool is_format_error(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Io:
    case ErrorKind::BadMagic:
    case ErrorKind::TruncatedPayload:
    case ErrorKind::NonFiniteValue:
    case ErrorKind::DuplicateIndex:
    case ErrorKind::GapInIndices:
    case ErrorKind::MalformedRow:
    case ErrorKind::InvalidCode:
    case ErrorKind::CycleDetected:
      return true;
    default:
      return false;
  }
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace vd
