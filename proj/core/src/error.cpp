#include "stepal/error.hpp"

namespace stepal {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::UnknownVideo: return "UnknownVideo";
    case ErrorCode::AlreadyLabeled: return "AlreadyLabeled";
    case ErrorCode::DuplicateVideo: return "DuplicateVideo";
    case ErrorCode::InvalidVideo: return "InvalidVideo";
    case ErrorCode::NonFiniteInput: return "NonFiniteInput";
    case ErrorCode::MissingLogits: return "MissingLogits";
    case ErrorCode::MissingPseudoLabels: return "MissingPseudoLabels";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::EmptyPool: return "EmptyPool";
    case ErrorCode::UnknownStrategy: return "UnknownStrategy";
    case ErrorCode::NoLabeledData: return "NoLabeledData";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::UnknownPreset: return "UnknownPreset";
    case ErrorCode::EmptyTestSet: return "EmptyTestSet";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::VersionError: return "VersionError";
    case ErrorCode::FormatError: return "FormatError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace stepal
