#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "stepal/pool.hpp"
#include "stepal/uncertainty.hpp"

namespace stepal {

/// Clip indices grouped by pseudo-label: per_step[c] = { t | ŷ_t = c }, ascending.
struct StepIndexSets {
  std::vector<std::vector<std::size_t>> per_step;
};

/// Concatenation of C ℓ2-normalized per-step prototypes, each of length D.
class StepAwareRepr {
 public:
  StepAwareRepr(std::size_t step_count, std::size_t feature_dim, std::vector<double> flattened,
                std::size_t zero_blocks);

  [[nodiscard]] std::size_t step_count() const noexcept { return step_count_; }
  [[nodiscard]] std::size_t feature_dim() const noexcept { return feature_dim_; }
  [[nodiscard]] std::span<const double> block(std::size_t step) const;
  [[nodiscard]] const std::vector<double>& flattened() const noexcept { return flattened_; }
  /// Number of prototypes that were exactly zero and normalized to a zero block.
  [[nodiscard]] std::size_t zero_blocks() const noexcept { return zero_blocks_; }

 private:
  std::size_t step_count_;
  std::size_t feature_dim_;
  std::vector<double> flattened_;
  std::size_t zero_blocks_;
};

/// Throws MissingPseudoLabels if any clip has no pseudo-label, InvalidVideo if a
/// pseudo-label is out of range.
[[nodiscard]] StepIndexSets index_sets(VideoView video, std::size_t step_count);

/// Mean clip feature.
[[nodiscard]] std::vector<double> global_average(VideoView video);

/// Mean feature over sets.per_step[step], or the global average when that set is empty.
[[nodiscard]] std::vector<double> step_prototype(VideoView video, const StepIndexSets& sets, StepId step);

[[nodiscard]] StepAwareRepr build_repr(VideoView video, std::size_t step_count, Epsilon eps = {});

/// v / (‖v‖₂ + ε)
[[nodiscard]] std::vector<double> normalize_eps(std::span<const double> v, Epsilon eps);

}  // namespace stepal
