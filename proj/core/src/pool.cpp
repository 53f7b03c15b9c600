#include "stepal/pool.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "stepal/error.hpp"
#include "stepal/uncertainty.hpp"

namespace stepal {

namespace {

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

void validate_clip(const ClipRecord& clip, std::size_t step_count, std::size_t feature_dim,
                   std::string_view video_id) {
  const auto where = [&] { return "video '" + std::string(video_id) + "' clip " + std::to_string(clip.clip_index); };
  if (clip.features.size() != feature_dim) {
    throw Error(ErrorCode::DimensionMismatch, where() + ": features length " + std::to_string(clip.features.size()) +
                                                  " != D=" + std::to_string(feature_dim));
  }
  if (!all_finite(clip.features)) throw Error(ErrorCode::NonFiniteInput, where() + ": non-finite feature");
  if (clip.true_step && clip.true_step->value >= step_count) {
    throw Error(ErrorCode::InvalidVideo, where() + ": true_step out of range");
  }
  if (clip.logits) {
    if (clip.logits->size() != step_count) {
      throw Error(ErrorCode::DimensionMismatch, where() + ": logits length " + std::to_string(clip.logits->size()) +
                                                    " != C=" + std::to_string(step_count));
    }
    const StepId expected = pseudo_label(*clip.logits);
    if (clip.pseudo_step && *clip.pseudo_step != expected) {
      throw Error(ErrorCode::InvalidVideo, where() + ": pseudo_step disagrees with argmax of logits");
    }
  } else if (clip.pseudo_step && clip.pseudo_step->value >= step_count) {
    throw Error(ErrorCode::InvalidVideo, where() + ": pseudo_step out of range");
  }
}

}  // namespace

DatasetPool::DatasetPool(std::size_t step_count, std::size_t feature_dim)
    : step_count_(step_count), feature_dim_(feature_dim) {
  if (step_count < 2) throw Error(ErrorCode::InvalidConfig, "step count must be >= 2");
  if (feature_dim < 1) throw Error(ErrorCode::InvalidConfig, "feature dimension must be >= 1");
}

std::size_t DatasetPool::count(PoolState state) const {
  return static_cast<std::size_t>(
      std::count_if(videos_.begin(), videos_.end(), [&](const auto& kv) { return kv.second.state == state; }));
}

void DatasetPool::add(VideoRecord video) {
  if (video.id.empty()) throw Error(ErrorCode::InvalidVideo, "empty video id");
  if (contains(video.id)) throw Error(ErrorCode::DuplicateVideo, "video '" + video.id + "' already present");
  if (video.clips.empty()) throw Error(ErrorCode::InvalidVideo, "video '" + video.id + "' has no clips");

  std::sort(video.clips.begin(), video.clips.end(),
            [](const ClipRecord& a, const ClipRecord& b) { return a.clip_index < b.clip_index; });
  for (std::size_t t = 0; t < video.clips.size(); ++t) {
    if (video.clips[t].clip_index != t) {
      throw Error(ErrorCode::InvalidVideo, "video '" + video.id + "': clip indices must be 0..T-1 without gaps");
    }
    auto& clip = video.clips[t];
    validate_clip(clip, step_count_, feature_dim_, video.id);
    if (clip.logits && !clip.pseudo_step) clip.pseudo_step = pseudo_label(*clip.logits);
  }
  std::string key = video.id;
  videos_.emplace(std::move(key), std::move(video));
}

const VideoRecord& DatasetPool::video(std::string_view id) const {
  auto it = videos_.find(id);
  if (it == videos_.end()) throw Error(ErrorCode::UnknownVideo, "no video '" + std::string(id) + "'");
  return it->second;
}

void DatasetPool::set_logits(std::string_view id, std::size_t clip_index, std::vector<double> logits) {
  auto it = videos_.find(id);
  if (it == videos_.end()) throw Error(ErrorCode::UnknownVideo, "no video '" + std::string(id) + "'");
  auto& clips = it->second.clips;
  if (clip_index >= clips.size()) throw Error(ErrorCode::InvalidVideo, "clip index out of range");
  if (logits.size() != step_count_) throw Error(ErrorCode::DimensionMismatch, "logits length != C");
  auto& clip = clips[clip_index];
  clip.pseudo_step = pseudo_label(logits);
  clip.logits = std::move(logits);
}

void DatasetPool::clear_predictions() {
  for (auto& [id, video] : videos_) {
    for (auto& clip : video.clips) {
      clip.logits.reset();
      clip.pseudo_step.reset();
    }
  }
}

void DatasetPool::mark_labeled(std::span<const std::string> ids) {
  std::vector<std::string> seen;
  for (const auto& id : ids) {
    auto it = videos_.find(id);
    if (it == videos_.end()) throw Error(ErrorCode::UnknownVideo, "no video '" + id + "'");
    if (it->second.state == PoolState::Labeled || std::find(seen.begin(), seen.end(), id) != seen.end()) {
      throw Error(ErrorCode::AlreadyLabeled, "video '" + id + "' is already labeled");
    }
    seen.push_back(id);
  }
  for (const auto& id : ids) videos_.find(id)->second.state = PoolState::Labeled;
}

Partition partition(const DatasetPool& pool) {
  Partition out;
  for (const auto& [id, video] : pool.videos()) {
    (video.state == PoolState::Labeled ? out.labeled : out.unlabeled).push_back(id);
  }
  return out;
}

DatasetPool move_to_labeled(DatasetPool pool, std::span<const std::string> ids) {
  pool.mark_labeled(ids);
  return pool;
}

DatasetPool subset(const DatasetPool& pool, std::span<const std::string> ids) {
  DatasetPool out(pool.step_count(), pool.feature_dim());
  for (const auto& id : ids) out.add(pool.video(id));
  return out;
}

std::span<const double> ClipView::logits() const {
  if (!clip_->logits) throw Error(ErrorCode::MissingLogits, "clip " + std::to_string(clip_->clip_index) + " has no logits");
  return *clip_->logits;
}

bool VideoView::has_all_logits() const noexcept {
  return std::all_of(video_->clips.begin(), video_->clips.end(), [](const ClipRecord& c) { return c.logits.has_value(); });
}

std::vector<std::size_t> VideoView::clip_order() const {
  std::vector<std::size_t> order(video_->clips.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return video_->clips[a].clip_index < video_->clips[b].clip_index;
  });
  return order;
}

}  // namespace stepal
