#include "stepal/uncertainty.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "stepal/error.hpp"

namespace stepal {

namespace {

void require_finite(std::span<const double> v) {
  for (double x : v) {
    if (!std::isfinite(x)) throw Error(ErrorCode::NonFiniteInput, "non-finite logit");
  }
}

template <typename Fn>
double mean_over_clips(VideoView video, Fn&& per_clip) {
  if (video.size() == 0) throw Error(ErrorCode::EmptyInput, "video has no clips");
  double sum = 0.0;
  for (std::size_t pos : video.clip_order()) {
    const ClipView clip = video.clip(pos);
    if (!clip.has_logits()) {
      throw Error(ErrorCode::MissingLogits, "video '" + std::string(video.id()) + "' clip " +
                                                std::to_string(clip.clip_index()) + " has no logits");
    }
    sum += per_clip(softmax(clip.logits()));
  }
  return sum / static_cast<double>(video.size());
}

}  // namespace

Epsilon::Epsilon(double value) : value_(value) {
  if (!(value > 0.0 && value <= 1e-6)) {
    throw Error(ErrorCode::InvalidConfig, "epsilon must lie in (0, 1e-6], got " + std::to_string(value));
  }
}

ProbVector ProbVector::checked(std::vector<double> probs) {
  if (probs.size() < 2) throw Error(ErrorCode::InvalidConfig, "probability vector needs >= 2 components");
  double sum = 0.0;
  for (double p : probs) {
    if (!std::isfinite(p)) throw Error(ErrorCode::NonFiniteInput, "non-finite probability");
    if (p < 0.0 || p > 1.0) throw Error(ErrorCode::InvalidConfig, "probability outside [0,1]");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw Error(ErrorCode::InvalidConfig, "probabilities do not sum to 1");
  return ProbVector(std::move(probs));
}

ProbVector softmax(std::span<const double> logits) {
  if (logits.size() < 2) throw Error(ErrorCode::InvalidConfig, "softmax needs >= 2 logits");
  require_finite(logits);
  const double top = *std::max_element(logits.begin(), logits.end());
  std::vector<double> out(logits.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - top);
    sum += out[i];
  }
  for (double& p : out) p /= sum;
  return ProbVector(std::move(out));
}

StepId pseudo_label(std::span<const double> logits) {
  if (logits.empty()) throw Error(ErrorCode::EmptyInput, "no logits");
  require_finite(logits);
  std::size_t best = 0;
  for (std::size_t i = 1; i < logits.size(); ++i) {
    if (logits[i] > logits[best]) best = i;
  }
  return StepId{static_cast<std::uint32_t>(best)};
}

double clip_entropy(const ProbVector& p, Epsilon eps) {
  double h = 0.0;
  for (double pc : p.values()) h -= pc * std::log(pc + eps.value());
  return h;
}

double video_entropy(VideoView video, Epsilon eps) {
  return mean_over_clips(video, [&](const ProbVector& p) { return clip_entropy(p, eps); });
}

double mean_prob_entropy(VideoView video, Epsilon eps) {
  if (video.size() == 0) throw Error(ErrorCode::EmptyInput, "video has no clips");
  std::vector<double> mean;
  for (std::size_t pos : video.clip_order()) {
    const ClipView clip = video.clip(pos);
    if (!clip.has_logits()) throw Error(ErrorCode::MissingLogits, "video '" + std::string(video.id()) + "' lacks logits");
    const ProbVector p = softmax(clip.logits());
    if (mean.empty()) mean.assign(p.size(), 0.0);
    for (std::size_t c = 0; c < p.size(); ++c) mean[c] += p[c];
  }
  const double inv = 1.0 / static_cast<double>(video.size());
  double h = 0.0;
  for (double m : mean) h -= (m * inv) * std::log(m * inv + eps.value());
  return h;
}

double margin_score(const ProbVector& p) {
  double first = -1.0;
  double second = -1.0;
  for (double pc : p.values()) {
    if (pc > first) {
      second = first;
      first = pc;
    } else if (pc > second) {
      second = pc;
    }
  }
  return first - second;
}

double video_margin(VideoView video) {
  return mean_over_clips(video, [](const ProbVector& p) { return margin_score(p); });
}

}  // namespace stepal
