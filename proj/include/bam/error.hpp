#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bam {

enum class ErrorKind {
  // model text (parse)
  MissingTimeFrame,
  MalformedTimeFrame,
  MalformedOutline,
  MalformedFormula,
  DuplicateHierarchyTitle,
  UnexpectedLine,
  // model semantics (analyze / generate)
  CyclicDependency,
  ConflictingDefinition,
  UnknownBreakdownTitle,
  InconsistentBreakdown,
  NameCapacityExceeded,
  InvariantViolation,
  // data and queries
  UnknownVariable,
  VariableNotInput,
  TargetNotCalculated,
  UndefinedBase,
  UnknownCategoryPath,
  PeriodOutOfRange,
  MalformedNumber,
  MalformedCsv,
  MalformedStyle,
  EvaluationError,
  // environment
  Io,
};

std::string_view to_string(ErrorKind kind) noexcept;

// Coarse grouping used for process exit codes.
enum class ErrorClass { Model, Data, Io };

ErrorClass classify(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message, int line = 0);

  ErrorKind kind() const noexcept { return kind_; }
  // 1-based source line, 0 when the error is not tied to a line.
  int line() const noexcept { return line_; }
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorKind kind_;
  int line_;
  std::string message_;
};

}  // namespace bam
