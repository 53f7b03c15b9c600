#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace stepal {

/// Index of a workflow step in [0, C).
struct StepId {
  std::uint32_t value{};

  friend constexpr auto operator<=>(StepId, StepId) = default;
};

struct ClipRecord {
  std::size_t clip_index{};
  std::vector<double> features;
  std::optional<std::vector<double>> logits;
  std::optional<StepId> pseudo_step;
  /// Oracle label. Never reachable through the label-blind views below.
  std::optional<StepId> true_step;

  friend bool operator==(const ClipRecord&, const ClipRecord&) = default;
};

enum class PoolState : std::uint8_t { Unlabeled = 0, Labeled = 1 };

struct VideoRecord {
  std::string id;
  std::vector<ClipRecord> clips;
  PoolState state = PoolState::Unlabeled;

  friend bool operator==(const VideoRecord&, const VideoRecord&) = default;
};

struct Partition {
  std::vector<std::string> labeled;
  std::vector<std::string> unlabeled;
};

/// The full dataset D = D_L ∪ D_U. Videos are keyed (and always iterated) in
/// ascending lexicographic order of their id.
class DatasetPool {
 public:
  using VideoMap = std::map<std::string, VideoRecord, std::less<>>;

  DatasetPool(std::size_t step_count, std::size_t feature_dim);

  [[nodiscard]] std::size_t step_count() const noexcept { return step_count_; }
  [[nodiscard]] std::size_t feature_dim() const noexcept { return feature_dim_; }
  [[nodiscard]] std::size_t size() const noexcept { return videos_.size(); }
  [[nodiscard]] bool empty() const noexcept { return videos_.empty(); }
  [[nodiscard]] bool contains(std::string_view id) const { return videos_.find(id) != videos_.end(); }
  [[nodiscard]] std::size_t count(PoolState state) const;

  /// Validates shape invariants and inserts. Clips are stored sorted by clip_index.
  void add(VideoRecord video);

  [[nodiscard]] const VideoRecord& video(std::string_view id) const;
  [[nodiscard]] const VideoMap& videos() const noexcept { return videos_; }

  /// Writes logits for one clip (addressed by clip_index) and derives its pseudo-label.
  void set_logits(std::string_view id, std::size_t clip_index, std::vector<double> logits);
  void clear_predictions();

  /// Flips every id to Labeled. All ids are checked before any state changes.
  void mark_labeled(std::span<const std::string> ids);

  friend bool operator==(const DatasetPool&, const DatasetPool&) = default;

 private:
  std::size_t step_count_;
  std::size_t feature_dim_;
  VideoMap videos_;
};

[[nodiscard]] Partition partition(const DatasetPool& pool);

/// Value-semantics form of DatasetPool::mark_labeled.
[[nodiscard]] DatasetPool move_to_labeled(DatasetPool pool, std::span<const std::string> ids);

/// Copies the listed videos (keeping their state) into a new pool with the same shape.
[[nodiscard]] DatasetPool subset(const DatasetPool& pool, std::span<const std::string> ids);

// Label-blind views. Selection strategies only ever see these, so oracle
// labels cannot leak into acquisition scores.

class ClipView {
 public:
  explicit ClipView(const ClipRecord& clip) noexcept : clip_(&clip) {}

  [[nodiscard]] std::size_t clip_index() const noexcept { return clip_->clip_index; }
  [[nodiscard]] std::span<const double> features() const noexcept { return clip_->features; }
  [[nodiscard]] bool has_logits() const noexcept { return clip_->logits.has_value(); }
  [[nodiscard]] std::span<const double> logits() const;
  [[nodiscard]] std::optional<StepId> pseudo_step() const noexcept { return clip_->pseudo_step; }

 private:
  const ClipRecord* clip_;
};

class VideoView {
 public:
  // NOLINTNEXTLINE(google-explicit-constructor)
  VideoView(const VideoRecord& video) noexcept : video_(&video) {}

  [[nodiscard]] std::string_view id() const noexcept { return video_->id; }
  [[nodiscard]] PoolState state() const noexcept { return video_->state; }
  [[nodiscard]] std::size_t size() const noexcept { return video_->clips.size(); }
  [[nodiscard]] ClipView clip(std::size_t position) const { return ClipView(video_->clips.at(position)); }
  [[nodiscard]] bool has_all_logits() const noexcept;

  /// Storage positions ordered by ascending clip_index. Every reduction over
  /// clips walks this order so results do not depend on storage order.
  [[nodiscard]] std::vector<std::size_t> clip_order() const;

 private:
  const VideoRecord* video_;
};

class PoolView {
 public:
  // NOLINTNEXTLINE(google-explicit-constructor)
  PoolView(const DatasetPool& pool) noexcept : pool_(&pool) {}

  [[nodiscard]] std::size_t step_count() const noexcept { return pool_->step_count(); }
  [[nodiscard]] std::size_t feature_dim() const noexcept { return pool_->feature_dim(); }
  [[nodiscard]] VideoView video(std::string_view id) const { return VideoView(pool_->video(id)); }
  [[nodiscard]] Partition partition() const { return stepal::partition(*pool_); }

 private:
  const DatasetPool* pool_;
};

}  // namespace stepal
