#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "stepal/learner.hpp"
#include "stepal/pool.hpp"

namespace stepal {

/// Rows are true classes, columns predicted classes.
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(std::size_t step_count);

  void add(StepId truth, StepId predicted);
  [[nodiscard]] std::size_t step_count() const noexcept { return step_count_; }
  [[nodiscard]] std::uint64_t at(std::size_t truth, std::size_t predicted) const;
  [[nodiscard]] std::uint64_t total() const noexcept { return total_; }
  [[nodiscard]] std::uint64_t trace() const;

  static ConfusionMatrix from_counts(std::size_t step_count, std::span<const std::uint64_t> row_major);

  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;

 private:
  std::size_t step_count_;
  std::vector<std::uint64_t> counts_;
  std::uint64_t total_ = 0;
};

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double jaccard = 0.0;
  std::uint64_t support = 0;
  /// A denominator was zero and the affected value was reported as 0.
  bool zero_division = false;
};

/// Macro averages run over classes with nonzero support only.
struct MetricReport {
  double accuracy = 0.0;
  double macro_precision = 0.0;
  double macro_recall = 0.0;
  double macro_jaccard = 0.0;
  std::vector<ClassMetrics> per_class;
};

[[nodiscard]] ConfusionMatrix tabulate(std::span<const StepId> truth, std::span<const StepId> predicted,
                                       std::size_t step_count);
[[nodiscard]] MetricReport report(const ConfusionMatrix& cm);

/// Clip-wise metrics of the model's argmax predictions against true_step over
/// every clip in the pool. Throws EmptyTestSet.
[[nodiscard]] MetricReport evaluate(const DatasetPool& test, const LinearModel& model);

}  // namespace stepal
