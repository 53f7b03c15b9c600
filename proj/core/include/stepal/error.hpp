#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace stepal {

enum class ErrorCode {
  UnknownVideo,
  AlreadyLabeled,
  DuplicateVideo,
  InvalidVideo,
  NonFiniteInput,
  MissingLogits,
  MissingPseudoLabels,
  EmptyInput,
  EmptyPool,
  UnknownStrategy,
  NoLabeledData,
  DimensionMismatch,
  InvalidConfig,
  UnknownPreset,
  EmptyTestSet,
  ShapeMismatch,
  VersionError,
  FormatError,
  IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so
/// callers (and the CLI exit-code mapping) can branch on it.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace stepal
