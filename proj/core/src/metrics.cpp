#include "stepal/metrics.hpp"

#include <string>

#include "stepal/error.hpp"
#include "stepal/uncertainty.hpp"

namespace stepal {

ConfusionMatrix::ConfusionMatrix(std::size_t step_count)
    : step_count_(step_count), counts_(step_count * step_count, 0) {
  if (step_count < 1) throw Error(ErrorCode::InvalidConfig, "confusion matrix needs >= 1 class");
}

void ConfusionMatrix::add(StepId truth, StepId predicted) {
  if (truth.value >= step_count_ || predicted.value >= step_count_) {
    throw Error(ErrorCode::InvalidConfig, "class id out of range");
  }
  ++counts_[truth.value * step_count_ + predicted.value];
  ++total_;
}

std::uint64_t ConfusionMatrix::at(std::size_t truth, std::size_t predicted) const {
  return counts_.at(truth * step_count_ + predicted);
}

std::uint64_t ConfusionMatrix::trace() const {
  std::uint64_t t = 0;
  for (std::size_t c = 0; c < step_count_; ++c) t += at(c, c);
  return t;
}

ConfusionMatrix ConfusionMatrix::from_counts(std::size_t step_count, std::span<const std::uint64_t> row_major) {
  if (row_major.size() != step_count * step_count) throw Error(ErrorCode::DimensionMismatch, "need C*C counts");
  ConfusionMatrix cm(step_count);
  for (std::size_t i = 0; i < row_major.size(); ++i) {
    cm.counts_[i] = row_major[i];
    cm.total_ += row_major[i];
  }
  return cm;
}

ConfusionMatrix tabulate(std::span<const StepId> truth, std::span<const StepId> predicted, std::size_t step_count) {
  if (truth.size() != predicted.size()) throw Error(ErrorCode::DimensionMismatch, "truth/prediction length mismatch");
  ConfusionMatrix cm(step_count);
  for (std::size_t i = 0; i < truth.size(); ++i) cm.add(truth[i], predicted[i]);
  return cm;
}

MetricReport report(const ConfusionMatrix& cm) {
  const std::size_t C = cm.step_count();
  MetricReport out;
  out.per_class.resize(C);
  if (cm.total() == 0) return out;
  out.accuracy = static_cast<double>(cm.trace()) / static_cast<double>(cm.total());

  std::size_t supported = 0;
  for (std::size_t c = 0; c < C; ++c) {
    std::uint64_t row = 0;
    std::uint64_t col = 0;
    for (std::size_t j = 0; j < C; ++j) {
      row += cm.at(c, j);
      col += cm.at(j, c);
    }
    const std::uint64_t tp = cm.at(c, c);
    const std::uint64_t fn = row - tp;
    const std::uint64_t fp = col - tp;
    auto& m = out.per_class[c];
    m.support = row;
    auto ratio = [&](std::uint64_t num, std::uint64_t den) {
      if (den == 0) {
        m.zero_division = true;
        return 0.0;
      }
      return static_cast<double>(num) / static_cast<double>(den);
    };
    m.precision = ratio(tp, tp + fp);
    m.recall = ratio(tp, tp + fn);
    m.jaccard = ratio(tp, tp + fp + fn);
    if (row == 0) continue;
    ++supported;
    out.macro_precision += m.precision;
    out.macro_recall += m.recall;
    out.macro_jaccard += m.jaccard;
  }
  const double inv = 1.0 / static_cast<double>(supported);
  out.macro_precision *= inv;
  out.macro_recall *= inv;
  out.macro_jaccard *= inv;
  return out;
}

MetricReport evaluate(const DatasetPool& test, const LinearModel& model) {
  if (model.step_count() != test.step_count() || model.feature_dim() != test.feature_dim()) {
    throw Error(ErrorCode::DimensionMismatch, "model shape does not match the test pool");
  }
  ConfusionMatrix cm(test.step_count());
  std::vector<double> z(test.step_count());
  for (const auto& [id, video] : test.videos()) {
    for (const auto& clip : video.clips) {
      if (!clip.true_step) throw Error(ErrorCode::InvalidVideo, "test clip in '" + id + "' has no true label");
      model.logits_into(clip.features, z);
      cm.add(*clip.true_step, pseudo_label(z));
    }
  }
  if (cm.total() == 0) throw Error(ErrorCode::EmptyTestSet, "test split has no clips");
  return report(cm);
}

}  // namespace stepal
