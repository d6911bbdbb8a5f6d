#pragma once

#include <stdexcept>
#include <string>

namespace ertkit
{
enum class ErrorCode
{
  DegeneratePath,
  PhaseOutOfRange,
  DegenerateSegment,
  DimensionMismatch,
  EmptyLibrary,
  DegenerateSpan,
  AnchorMismatch,
  InvalidArgument,
  TemplateInfeasible,
  GenerationFailed,
  EmptyRecords,
  MalformedInput
};

inline const char* ToString(const ErrorCode code)
{
  switch (code)
  {
    case ErrorCode::DegeneratePath: return "DegeneratePath";
    case ErrorCode::PhaseOutOfRange: return "PhaseOutOfRange";
    case ErrorCode::DegenerateSegment: return "DegenerateSegment";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::EmptyLibrary: return "EmptyLibrary";
    case ErrorCode::DegenerateSpan: return "DegenerateSpan";
    case ErrorCode::AnchorMismatch: return "AnchorMismatch";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::TemplateInfeasible: return "TemplateInfeasible";
    case ErrorCode::GenerationFailed: return "GenerationFailed";
    case ErrorCode::EmptyRecords: return "EmptyRecords";
    case ErrorCode::MalformedInput: return "MalformedInput";
  }
  return "Unknown";
}

/// Single exception type for the toolkit; callers branch on code().
class Error : public std::runtime_error
{
public:
  Error(const ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(ToString(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const { return code_; }

private:
  ErrorCode code_;
};

[[noreturn]] inline void Throw(const ErrorCode code, const std::string& what)
{
  throw Error(code, what);
}

inline void CheckDimensions(const long expected, const long actual,
                            const char* where)
{
  if (expected != actual)
  {
    Throw(ErrorCode::DimensionMismatch,
          std::string(where) + ": expected dimension "
              + std::to_string(expected) + ", got "
              + std::to_string(actual));
  }
}
}  // namespace ertkit
