#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace cartan {

enum class ErrorCode {
  NotClosed,
  DependentBasis,
  JacobiViolation,
  AlgebraMismatch,
  NotSubalgebra,
  NotHModule,
  NotAdInvariant,
  NotSymmetric,
  Degenerate,
  UnknownModel,
  SyntaxError,
  UnknownVariable,
  OutOfChart,
  ChartMismatch,
  EvaluationError,
  ValueSpaceMismatch,
  SideMismatch,
  DegreeOverflow,
  DegreeUnderflow,
  SingularTetrad,
  NoSplit,
  DegenerateInnerMetric,
  NotInH,
  DimensionMismatch,
  ConfigError,
};

std::string_view to_string(ErrorCode code);

/// Base exception for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Parse failure with the byte offset into the source text.
class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t offset, const std::string& expected)
      : Error(ErrorCode::SyntaxError,
              "at offset " + std::to_string(offset) + ", expected " + expected),
        offset_(offset),
        expected_(expected) {}

  std::size_t offset() const noexcept { return offset_; }
  const std::string& expected() const noexcept { return expected_; }

 private:
  std::size_t offset_;
  std::string expected_;
};

}  // namespace cartan
