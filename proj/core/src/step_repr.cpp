#include "stepal/step_repr.hpp"

#include <cmath>
#include <string>

#include "stepal/error.hpp"

namespace stepal {

StepAwareRepr::StepAwareRepr(std::size_t step_count, std::size_t feature_dim, std::vector<double> flattened,
                             std::size_t zero_blocks)
    : step_count_(step_count), feature_dim_(feature_dim), flattened_(std::move(flattened)), zero_blocks_(zero_blocks) {
  if (flattened_.size() != step_count_ * feature_dim_) {
    throw Error(ErrorCode::DimensionMismatch, "flattened representation must have C*D entries");
  }
}

std::span<const double> StepAwareRepr::block(std::size_t step) const {
  if (step >= step_count_) throw Error(ErrorCode::InvalidConfig, "step out of range");
  return std::span<const double>(flattened_).subspan(step * feature_dim_, feature_dim_);
}

StepIndexSets index_sets(VideoView video, std::size_t step_count) {
  StepIndexSets sets;
  sets.per_step.resize(step_count);
  for (std::size_t pos : video.clip_order()) {
    const ClipView clip = video.clip(pos);
    const auto label = clip.pseudo_step();
    if (!label) {
      throw Error(ErrorCode::MissingPseudoLabels, "video '" + std::string(video.id()) + "' clip " +
                                                      std::to_string(clip.clip_index()) + " has no pseudo-label");
    }
    if (label->value >= step_count) throw Error(ErrorCode::InvalidVideo, "pseudo-label out of range");
    sets.per_step[label->value].push_back(clip.clip_index());
  }
  return sets;
}

namespace {

// Mean over the clips whose clip_index is listed (ascending), or over every clip when `only` is null.
std::vector<double> mean_features(VideoView video, const std::vector<std::size_t>* only) {
  if (video.size() == 0) throw Error(ErrorCode::EmptyInput, "video has no clips");
  const auto order = video.clip_order();
  const std::size_t dim = video.clip(order.front()).features().size();
  std::vector<double> sum(dim, 0.0);
  std::size_t n = 0;
  auto accumulate = [&](std::size_t pos) {
    const auto f = video.clip(pos).features();
    if (f.size() != dim) throw Error(ErrorCode::DimensionMismatch, "clips disagree on feature length");
    for (std::size_t d = 0; d < dim; ++d) sum[d] += f[d];
    ++n;
  };
  if (only == nullptr) {
    for (std::size_t pos : order) accumulate(pos);
  } else {
    // order[t] is the storage position of clip_index t (indices are 0..T-1).
    for (std::size_t t : *only) {
      if (t >= order.size()) throw Error(ErrorCode::InvalidVideo, "index set refers to a missing clip");
      accumulate(order[t]);
    }
  }
  const double inv = 1.0 / static_cast<double>(n);
  for (double& s : sum) s *= inv;
  return sum;
}

}  // namespace

std::vector<double> global_average(VideoView video) { return mean_features(video, nullptr); }

std::vector<double> step_prototype(VideoView video, const StepIndexSets& sets, StepId step) {
  if (step.value >= sets.per_step.size()) throw Error(ErrorCode::InvalidConfig, "step out of range");
  const auto& members = sets.per_step[step.value];
  if (members.empty()) return global_average(video);
  return mean_features(video, &members);
}

std::vector<double> normalize_eps(std::span<const double> v, Epsilon eps) {
  double sq = 0.0;
  for (double x : v) sq += x * x;
  const double denom = std::sqrt(sq) + eps.value();
  std::vector<double> out(v.begin(), v.end());
  for (double& x : out) x /= denom;
  return out;
}

StepAwareRepr build_repr(VideoView video, std::size_t step_count, Epsilon eps) {
  const StepIndexSets sets = index_sets(video, step_count);
  const std::vector<double> fallback = global_average(video);
  const std::size_t dim = fallback.size();

  std::vector<double> flat;
  flat.reserve(step_count * dim);
  std::size_t zero_blocks = 0;
  for (std::uint32_t c = 0; c < step_count; ++c) {
    const auto proto = sets.per_step[c].empty() ? fallback : mean_features(video, &sets.per_step[c]);
    bool all_zero = true;
    for (double x : proto) all_zero = all_zero && x == 0.0;
    if (all_zero) ++zero_blocks;
    const auto block = normalize_eps(proto, eps);
    flat.insert(flat.end(), block.begin(), block.end());
  }
  return StepAwareRepr(step_count, dim, std::move(flat), zero_blocks);
}

}  // namespace stepal
