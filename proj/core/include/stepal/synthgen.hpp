#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "stepal/pool.hpp"

namespace stepal {

/// Clips of `first` carry mix·prototype(second) on top of their own prototype
/// and vice versa, so the pair is harder to tell apart.
struct ConfusablePair {
  StepId first;
  StepId second;
  double mix = 0.0;

  friend bool operator==(const ConfusablePair&, const ConfusablePair&) = default;
};

struct GenConfig {
  std::size_t n_videos = 120;
  std::size_t steps = 8;
  std::size_t feature_dim = 32;
  /// Order in which steps are traversed. Empty means 0..C-1.
  std::vector<StepId> canonical_order;
  /// Per-step skip probability in [0,1). A single entry applies to every step.
  std::vector<double> skip_prob{0.15};
  std::size_t segment_min = 3;
  std::size_t segment_max = 10;
  double noise_sigma = 0.6;
  std::vector<ConfusablePair> confusable_pairs;
  /// ℓ2 norm of every class prototype.
  double prototype_scale = 1.8;
  /// Videos are spread uniformly over style_groups recording styles (surgeon,
  /// site). Each style adds its own per-step offset with per-coordinate σ
  /// style_sigma. 0 groups disables it.
  std::size_t style_groups = 0;
  double style_sigma = 0.0;
  /// Number of steps each style perturbs (chosen per style). 0 means all.
  std::size_t style_steps = 0;
  std::uint64_t seed = 0;

  void validate() const;
  [[nodiscard]] double skip_probability(std::size_t step) const;
  [[nodiscard]] std::vector<StepId> order() const;

  friend bool operator==(const GenConfig&, const GenConfig&) = default;
};

struct StepPrototypeBank {
  std::vector<std::vector<double>> prototypes;
  double min_distance = 0.0;
  /// min_distance > 4·σ/√D. Informational only.
  bool separable = false;
};

/// Orthonormal (Gram–Schmidt) prototypes when D >= C, random unit vectors
/// otherwise, scaled to prototype_scale.
[[nodiscard]] StepPrototypeBank make_prototypes(const GenConfig& cfg);

/// Every video is Unlabeled, carries true_step on every clip, and has no logits.
/// Video i draws from its own sub-seed, so output does not depend on generation order.
[[nodiscard]] DatasetPool generate(const GenConfig& cfg);

/// Named presets: "default", "easy", "tiny". Unknown names throw UnknownPreset.
[[nodiscard]] GenConfig benchmark_suite(std::string_view name);
[[nodiscard]] std::span<const std::string_view> benchmark_names() noexcept;

struct SplitPools {
  DatasetPool train;
  DatasetPool val;
  DatasetPool test;
};

/// Seeded 50/10/40 split of the videos (rounded; test takes the remainder).
[[nodiscard]] SplitPools split_pool(const DatasetPool& pool, std::uint64_t seed);

}  // namespace stepal
