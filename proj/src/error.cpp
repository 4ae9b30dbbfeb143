#include "bam/error.hpp"

namespace bam {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::MissingTimeFrame: return "MissingTimeFrame";
    case ErrorKind::MalformedTimeFrame: return "MalformedTimeFrame";
    case ErrorKind::MalformedOutline: return "MalformedOutline";
    case ErrorKind::MalformedFormula: return "MalformedFormula";
    case ErrorKind::DuplicateHierarchyTitle: return "DuplicateHierarchyTitle";
    case ErrorKind::UnexpectedLine: return "UnexpectedLine";
    case ErrorKind::CyclicDependency: return "CyclicDependency";
    case ErrorKind::ConflictingDefinition: return "ConflictingDefinition";
    case ErrorKind::UnknownBreakdownTitle: return "UnknownBreakdownTitle";
    case ErrorKind::InconsistentBreakdown: return "InconsistentBreakdown";
    case ErrorKind::NameCapacityExceeded: return "NameCapacityExceeded";
    case ErrorKind::InvariantViolation: return "InvariantViolation";
    case ErrorKind::UnknownVariable: return "UnknownVariable";
    case ErrorKind::VariableNotInput: return "VariableNotInput";
    case ErrorKind::TargetNotCalculated: return "TargetNotCalculated";
    case ErrorKind::UndefinedBase: return "UndefinedBase";
    case ErrorKind::UnknownCategoryPath: return "UnknownCategoryPath";
    case ErrorKind::PeriodOutOfRange: return "PeriodOutOfRange";
    case ErrorKind::MalformedNumber: return "MalformedNumber";
    case ErrorKind::MalformedCsv: return "MalformedCsv";
    case ErrorKind::MalformedStyle: return "MalformedStyle";
    case ErrorKind::EvaluationError: return "EvaluationError";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

ErrorClass classify(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::MissingTimeFrame:
    case ErrorKind::MalformedTimeFrame:
    case ErrorKind::MalformedOutline:
    case ErrorKind::MalformedFormula:
    case ErrorKind::DuplicateHierarchyTitle:
    case ErrorKind::UnexpectedLine:
    case ErrorKind::CyclicDependency:
    case ErrorKind::ConflictingDefinition:
    case ErrorKind::UnknownBreakdownTitle:
    case ErrorKind::InconsistentBreakdown:
    case ErrorKind::NameCapacityExceeded:
    case ErrorKind::InvariantViolation:
      return ErrorClass::Model;
    case ErrorKind::Io:
      return ErrorClass::Io;
    default:
      return ErrorClass::Data;
  }
}

static std::string format_what(ErrorKind kind, const std::string& message, int line) {
  std::string out;
  if (line > 0) out += "line " + std::to_string(line) + ": ";
  out += std::string(to_string(kind));
  out += ": ";
  out += message;
  return out;
}

Error::Error(ErrorKind kind, const std::string& message, int line)
    : std::runtime_error(format_what(kind, message, line)),
      kind_(kind),
      line_(line),
      message_(message) {}

}  // namespace bam
