#pragma once

#include <stdexcept>
#include <string>

namespace chains {

/// Raised when a computation would exceed a configured memory or
/// enumeration budget. The caller may retry with a larger budget.
struct SizeGuardError : std::runtime_error {
  explicit SizeGuardError(const std::string& what) : std::runtime_error(what) {}
};

struct DuplicatePointError : std::runtime_error {
  explicit DuplicatePointError(const std::string& what) : std::runtime_error(what) {}
};

struct ExhaustedSamplingError : std::runtime_error {
  explicit ExhaustedSamplingError(const std::string& what) : std::runtime_error(what) {}
};

/// File could not be parsed; the message carries a line/field diagnostic.
struct MalformedFileError : std::runtime_error {
  explicit MalformedFileError(const std::string& what) : std::runtime_error(what) {}
};

struct SkewInputError : std::runtime_error {
  explicit SkewInputError(const std::string& what) : std::runtime_error(what) {}
};

struct DegenerateInputError : std::runtime_error {
  explicit DegenerateInputError(const std::string& what) : std::runtime_error(what) {}
};

struct MalformedNestingError : std::runtime_error {
  explicit MalformedNestingError(const std::string& what) : std::runtime_error(what) {}
};

struct MissingAuditError : std::runtime_error {
  explicit MissingAuditError(const std::string& what) : std::runtime_error(what) {}
};

struct PlanInvalidError : std::runtime_error {
  explicit PlanInvalidError(const std::string& what) : std::runtime_error(what) {}
};

struct InsufficientDataError : std::runtime_error {
  explicit InsufficientDataError(const std::string& what) : std::runtime_error(what) {}
};

struct IoError : std::runtime_error {
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace chains
