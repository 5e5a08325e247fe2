#include "tilekl/error.hpp"

namespace tilekl {

const char* to_string(ErrorCode code)
{
  switch (code) {
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::RaggedRows: return "RaggedRows";
    case ErrorCode::InvalidCharacter: return "InvalidCharacter";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::FilterTooLarge: return "FilterTooLarge";
    case ErrorCode::DimsMismatch: return "DimsMismatch";
    case ErrorCode::EmptyDistribution: return "EmptyDistribution";
    case ErrorCode::SnippetTooWide: return "SnippetTooWide";
    case ErrorCode::NegativeDistance: return "NegativeDistance";
    case ErrorCode::InvalidK: return "InvalidK";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace tilekl
