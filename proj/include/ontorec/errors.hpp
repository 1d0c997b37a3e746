#pragma once

#include <stdexcept>
#include <string>

namespace ontorec {

// Error codes double as the machine-readable prefix the CLI prints on failure.
enum class ErrorCode {
  Io,
  Syntax,
  Cycle,
  DanglingReference,
  UnknownConcept,
  FormatVersionMismatch,
  MissingPrefixSupport,
  EmptyDatabase,
  EmptyHistory,
  TooFewSequences,
  NoScorableTransactions,
  Config,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ontorec
