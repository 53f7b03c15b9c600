#pragma once

#include <span>
#include <vector>

#include "stepal/pool.hpp"

namespace stepal {

/// Guard added inside log() and to ℓ2 norms. One knob shared by entropy and
/// the step-aware representation.
class Epsilon {
 public:
  static constexpr double kDefault = 1e-8;

  constexpr Epsilon() noexcept = default;
  /// Throws InvalidConfig unless 0 < value <= 1e-6.
  explicit Epsilon(double value);

  [[nodiscard]] constexpr double value() const noexcept { return value_; }

 private:
  double value_ = kDefault;
};

/// A categorical distribution whose components sum to 1 within 1e-9.
class ProbVector {
 public:
  /// Validates range and normalization; throws NonFiniteInput / InvalidConfig.
  static ProbVector checked(std::vector<double> probs);

  [[nodiscard]] std::span<const double> values() const noexcept { return probs_; }
  [[nodiscard]] std::size_t size() const noexcept { return probs_.size(); }
  [[nodiscard]] double operator[](std::size_t i) const { return probs_[i]; }

 private:
  friend ProbVector softmax(std::span<const double> logits);
  explicit ProbVector(std::vector<double> probs) noexcept : probs_(std::move(probs)) {}

  std::vector<double> probs_;
};

/// Max-subtracted softmax. Requires at least two finite logits.
[[nodiscard]] ProbVector softmax(std::span<const double> logits);

/// argmax with ties resolved to the lowest index.
[[nodiscard]] StepId pseudo_label(std::span<const double> logits);

/// -Σ p log(p + ε) in nats. Can dip below zero by at most ε for one-hot inputs.
[[nodiscard]] double clip_entropy(const ProbVector& p, Epsilon eps = {});

/// Mean of clip entropies over the video (ascending clip_index summation).
/// Throws MissingLogits if any clip lacks logits.
[[nodiscard]] double video_entropy(VideoView video, Epsilon eps = {});

/// Entropy of the clip-averaged probability vector. Alternative video scorer.
[[nodiscard]] double mean_prob_entropy(VideoView video, Epsilon eps = {});

/// Top-1 minus top-2 probability. Smaller means more ambiguous.
[[nodiscard]] double margin_score(const ProbVector& p);

/// Mean clip margin over the video. Throws MissingLogits.
[[nodiscard]] double video_margin(VideoView video);

}  // namespace stepal
