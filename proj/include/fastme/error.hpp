#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace fastme {

enum class ErrorCode {
  kDimension,
  kFormat,
  kTruncation,
  kUnsupportedFormat,
  kValidation,
  kConfig,
  kDomain,
  kPrecondition,
  kDegenerateData,
  kNumeric,
  kIo,
};

const char* error_code_name(ErrorCode code);

// Single exception type for the library; callers dispatch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  // Truncation errors carry the 0-based index of the frame that was cut.
  Error(ErrorCode code, const std::string& message, std::size_t frame_index)
      : std::runtime_error(message), code_(code), frame_index_(frame_index) {}

  ErrorCode code() const { return code_; }
  std::optional<std::size_t> frame_index() const { return frame_index_; }

 private:
  ErrorCode code_;
  std::optional<std::size_t> frame_index_;
};

}  // namespace fastme
