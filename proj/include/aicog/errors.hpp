#ifndef AICOG_ERRORS_HPP
#define AICOG_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace aicog {

// Every failure mode the library can raise. Codes are stable so callers
// (CLI, tests) can dispatch without string matching.
enum class ErrorCode {
  NonPositiveEntry,
  TooShort,
  KTooSmall,
  RankDeficient,
  DimMismatch,
  BadSubset,
  BadIndices,
  SelfPair,
  ShapeMismatch,
  ParseError,
  EmptyGraph,
  UnknownNode,
  Disconnected,
  TooDense,
  OneClassOnly,
  NoPositives,
  DegenerateSplit,
  BadKeepSize,
  NoLabels,
  TargetUnreachable,
  DegenerateData,
  BadConfig,
  IoError,
};

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::NonPositiveEntry: return "NonPositiveEntry";
    case ErrorCode::TooShort: return "TooShort";
    case ErrorCode::KTooSmall: return "KTooSmall";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::DimMismatch: return "DimMismatch";
    case ErrorCode::BadSubset: return "BadSubset";
    case ErrorCode::BadIndices: return "BadIndices";
    case ErrorCode::SelfPair: return "SelfPair";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::EmptyGraph: return "EmptyGraph";
    case ErrorCode::UnknownNode: return "UnknownNode";
    case ErrorCode::Disconnected: return "Disconnected";
    case ErrorCode::TooDense: return "TooDense";
    case ErrorCode::OneClassOnly: return "OneClassOnly";
    case ErrorCode::NoPositives: return "NoPositives";
    case ErrorCode::DegenerateSplit: return "DegenerateSplit";
    case ErrorCode::BadKeepSize: return "BadKeepSize";
    case ErrorCode::NoLabels: return "NoLabels";
    case ErrorCode::TargetUnreachable: return "TargetUnreachable";
    case ErrorCode::DegenerateData: return "DegenerateData";
    case ErrorCode::BadConfig: return "BadConfig";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const { return code_; }

  // Numeric failures map to CLI exit code 2, everything else to 1.
  bool is_numeric() const {
    return code_ == ErrorCode::RankDeficient ||
           code_ == ErrorCode::TargetUnreachable ||
           code_ == ErrorCode::DegenerateData;
  }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace aicog

#endif  // AICOG_ERRORS_HPP
