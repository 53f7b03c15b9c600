#include "stepal/manifest.hpp"

#include <fstream>
#include <limits>
#include <sstream>

#include "binary_io.hpp"

namespace stepal {

namespace {

constexpr char kMagic[4] = {'S', 'A', 'M', 'F'};
constexpr std::uint32_t kNoLabel = 0xFFFFFFFFu;
constexpr std::uint32_t kMaxIdLength = 1u << 16;

template <typename T>
T read_or_throw(detail::ByteReader& reader, const char* what) {
  T value{};
  const auto at = reader.offset();
  if (!reader.read_le(value)) throw ManifestError(ErrorCode::ShapeMismatch, at, std::string("truncated while reading ") + what);
  return value;
}

}  // namespace

void write_manifest(const DatasetPool& pool, std::ostream& out) {
  out.write(kMagic, 4);
  detail::write_le<std::uint8_t>(out, kManifestVersion);
  detail::write_le<std::uint32_t>(out, static_cast<std::uint32_t>(pool.step_count()));
  detail::write_le<std::uint32_t>(out, static_cast<std::uint32_t>(pool.feature_dim()));
  detail::write_le<std::uint32_t>(out, static_cast<std::uint32_t>(pool.size()));
  for (const auto& [id, video] : pool.videos()) {
    detail::write_le<std::uint32_t>(out, static_cast<std::uint32_t>(id.size()));
    out.write(id.data(), static_cast<std::streamsize>(id.size()));
    detail::write_le<std::uint8_t>(out, static_cast<std::uint8_t>(video.state));
    detail::write_le<std::uint32_t>(out, static_cast<std::uint32_t>(video.clips.size()));
    for (const auto& clip : video.clips) {
      for (double x : clip.features) detail::write_le(out, x);
      detail::write_le<std::uint32_t>(out, clip.true_step ? clip.true_step->value : kNoLabel);
      detail::write_le<std::uint8_t>(out, clip.logits ? 1 : 0);
      if (clip.logits) {
        for (double x : *clip.logits) detail::write_le(out, x);
      }
    }
  }
  if (!out) throw Error(ErrorCode::IoError, "failed writing manifest");
}

void write_manifest(const DatasetPool& pool, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
  write_manifest(pool, out);
}

DatasetPool read_manifest(std::istream& in) {
  detail::ByteReader reader(in);
  std::string magic;
  if (!reader.read_bytes(magic, 4)) throw ManifestError(ErrorCode::ShapeMismatch, 0, "file shorter than the magic");
  if (magic != std::string(kMagic, 4)) throw ManifestError(ErrorCode::FormatError, 0, "bad magic, not a manifest");

  const auto version = read_or_throw<std::uint8_t>(reader, "version");
  if (version != kManifestVersion) {
    throw ManifestError(ErrorCode::VersionError, 4,
                        "unsupported manifest version " + std::to_string(version) + " (expected " +
                            std::to_string(kManifestVersion) + ")");
  }
  const auto C = read_or_throw<std::uint32_t>(reader, "step count");
  const auto D = read_or_throw<std::uint32_t>(reader, "feature dimension");
  const auto n_videos = read_or_throw<std::uint32_t>(reader, "video count");
  if (C < 2 || D < 1) throw ManifestError(ErrorCode::ShapeMismatch, 5, "header declares C < 2 or D < 1");

  DatasetPool pool(C, D);
  for (std::uint32_t v = 0; v < n_videos; ++v) {
    const auto id_at = reader.offset();
    const auto id_len = read_or_throw<std::uint32_t>(reader, "video id length");
    if (id_len == 0 || id_len > kMaxIdLength) throw ManifestError(ErrorCode::ShapeMismatch, id_at, "implausible id length");
    VideoRecord video;
    if (!reader.read_bytes(video.id, id_len)) throw ManifestError(ErrorCode::ShapeMismatch, reader.offset(), "truncated video id");
    const auto state_at = reader.offset();
    const auto state = read_or_throw<std::uint8_t>(reader, "pool state");
    if (state > 1) throw ManifestError(ErrorCode::ShapeMismatch, state_at, "invalid pool state byte");
    video.state = static_cast<PoolState>(state);
    const auto T = read_or_throw<std::uint32_t>(reader, "clip count");
    if (T == 0) throw ManifestError(ErrorCode::ShapeMismatch, reader.offset() - 4, "video '" + video.id + "' declares 0 clips");
    video.clips.reserve(std::min<std::uint32_t>(T, 1u << 16));
    for (std::uint32_t t = 0; t < T; ++t) {
      ClipRecord clip;
      clip.clip_index = t;
      clip.features.resize(D);
      for (double& x : clip.features) x = read_or_throw<double>(reader, "features");
      const auto label_at = reader.offset();
      const auto label = read_or_throw<std::uint32_t>(reader, "true label");
      if (label != kNoLabel) {
        if (label >= C) throw ManifestError(ErrorCode::ShapeMismatch, label_at, "true label out of range");
        clip.true_step = StepId{label};
      }
      const auto flag_at = reader.offset();
      const auto has_logits = read_or_throw<std::uint8_t>(reader, "logits flag");
      if (has_logits > 1) throw ManifestError(ErrorCode::ShapeMismatch, flag_at, "invalid logits flag");
      if (has_logits == 1) {
        std::vector<double> logits(C);
        for (double& x : logits) x = read_or_throw<double>(reader, "logits");
        clip.logits = std::move(logits);
      }
      video.clips.push_back(std::move(clip));
    }
    try {
      pool.add(std::move(video));
    } catch (const Error& e) {
      throw ManifestError(ErrorCode::ShapeMismatch, id_at, e.what());
    }
  }
  if (!reader.at_end()) throw ManifestError(ErrorCode::ShapeMismatch, reader.offset(), "trailing bytes after last video");
  return pool;
}

DatasetPool read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  return read_manifest(in);
}

}  // namespace stepal
