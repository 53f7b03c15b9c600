#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>

#include "stepal/error.hpp"
#include "stepal/pool.hpp"

namespace stepal {

/// Dataset manifest, version 1. All integers and floats little-endian.
///
///   offset 0   char[4]  magic "SAMF"
///   offset 4   u8       version (= 1)
///   offset 5   u32      C (step count)
///   offset 9   u32      D (feature dimension)
///   offset 13  u32      number of videos
///   then per video, ascending id:
///     u32 id length, id bytes (UTF-8)
///     u8  pool state (0 = unlabeled, 1 = labeled)
///     u32 T (clip count)
///     per clip, ascending clip_index:
///       f64[D] features
///       u32    true label (0xFFFFFFFF = none)
///       u8     has logits (0/1)
///       f64[C] logits, present only when has logits = 1
///
/// Pseudo-labels are not stored; they are re-derived from logits on read.
inline constexpr std::uint8_t kManifestVersion = 1;

/// Error raised by read_manifest, carrying the byte offset where decoding failed.
class ManifestError : public Error {
 public:
  ManifestError(ErrorCode code, std::uint64_t offset, const std::string& message)
      : Error(code, message + " (at byte offset " + std::to_string(offset) + ")"), offset_(offset) {}

  [[nodiscard]] std::uint64_t offset() const noexcept { return offset_; }

 private:
  std::uint64_t offset_;
};

void write_manifest(const DatasetPool& pool, std::ostream& out);
void write_manifest(const DatasetPool& pool, const std::filesystem::path& path);

/// Throws ManifestError with FormatError (bad magic), VersionError (unknown
/// version byte) or ShapeMismatch (truncated payload, trailing bytes, or
/// declared lengths inconsistent with the pool shape).
[[nodiscard]] DatasetPool read_manifest(std::istream& in);
[[nodiscard]] DatasetPool read_manifest(const std::filesystem::path& path);

}  // namespace stepal
