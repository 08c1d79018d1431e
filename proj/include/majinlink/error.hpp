#pragma once

#include <stdexcept>
#include <string>

namespace majinlink {

enum class ErrorCode {
  InvalidArgument,
  Io,
  Parse,
  Extraction,
  ContractViolation,
  NotFound,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised when an EPUB container cannot be turned into text. The caller
/// discards the item.
class ExtractionError : public Error {
 public:
  explicit ExtractionError(const std::string& message)
      : Error(ErrorCode::Extraction, message) {}
};

}  // namespace majinlink
