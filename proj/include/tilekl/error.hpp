#pragma once

#include <stdexcept>
#include <string>

namespace tilekl {

enum class ErrorCode {
  EmptyInput,
  RaggedRows,
  InvalidCharacter,
  IoError,
  FilterTooLarge,
  DimsMismatch,
  EmptyDistribution,
  SnippetTooWide,
  NegativeDistance,
  InvalidK,
  InvalidArgument,
};

const char* to_string(ErrorCode code);

// Every failure raised by the library carries one of the codes above so the
// CLI can map it onto an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace tilekl
