#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "stepal/pool.hpp"

namespace stepal {

/// Multinomial softmax-regression clip classifier: logits(x) = W·x + b.
class LinearModel {
 public:
  /// Zero-initialized model (uniform predictions).
  LinearModel(std::size_t step_count, std::size_t feature_dim, std::uint64_t train_seed = 0);

  [[nodiscard]] std::size_t step_count() const noexcept { return step_count_; }
  [[nodiscard]] std::size_t feature_dim() const noexcept { return feature_dim_; }
  [[nodiscard]] std::uint64_t train_seed() const noexcept { return train_seed_; }

  /// Row-major C×D.
  [[nodiscard]] std::span<const double> weights() const noexcept { return weights_; }
  [[nodiscard]] std::span<double> weights() noexcept { return weights_; }
  [[nodiscard]] std::span<const double> bias() const noexcept { return bias_; }
  [[nodiscard]] std::span<double> bias() noexcept { return bias_; }

  [[nodiscard]] std::vector<double> logits(std::span<const double> x) const;
  void logits_into(std::span<const double> x, std::span<double> out) const;

  friend bool operator==(const LinearModel&, const LinearModel&) = default;

 private:
  std::size_t step_count_;
  std::size_t feature_dim_;
  std::uint64_t train_seed_;
  std::vector<double> weights_;
  std::vector<double> bias_;
};

struct TrainConfig {
  double learning_rate = 0.1;
  std::size_t epochs = 200;
  std::size_t batch_size = 64;
  double l2 = 1e-4;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Dense row-major design matrix with integer class labels.
struct TrainingSet {
  std::size_t feature_dim = 0;
  std::vector<double> features;
  std::vector<std::uint32_t> labels;

  [[nodiscard]] std::size_t size() const noexcept { return labels.size(); }
  [[nodiscard]] std::span<const double> row(std::size_t i) const {
    return std::span<const double>(features).subspan(i * feature_dim, feature_dim);
  }
  void push_back(std::span<const double> x, std::uint32_t label);
};

/// Every clip of every Labeled video, in ascending (video id, clip_index) order.
[[nodiscard]] TrainingSet collect_labeled(const DatasetPool& pool);

struct LossGradient {
  double loss = 0.0;
  std::vector<double> grad_weights;
  std::vector<double> grad_bias;
};

/// Mean cross-entropy over `rows` (all rows when empty) plus (l2/2)·‖W‖².
[[nodiscard]] LossGradient loss_and_gradient(const LinearModel& model, const TrainingSet& data, double l2,
                                             std::span<const std::size_t> rows = {});
[[nodiscard]] double loss(const LinearModel& model, const TrainingSet& data, double l2);

struct TrainResult {
  LinearModel model;
  double initial_loss = 0.0;
  double final_loss = 0.0;
  std::vector<std::string> warnings;
};

/// Mini-batch gradient descent from a zero model. Each epoch reshuffles the
/// rows with a generator seeded from cfg.seed; batches are contiguous slices of
/// that order. With batch_size >= |data| every step is a full-batch step.
///
/// Throws NoLabeledData on an empty set. A single-class set trains anyway and
/// reports a SingleClassData warning.
[[nodiscard]] TrainResult train(const TrainingSet& data, std::size_t step_count, const TrainConfig& cfg);
[[nodiscard]] TrainResult train(const DatasetPool& pool, const TrainConfig& cfg);

/// Fills logits and pseudo-labels on every clip. Features are left untouched.
void infer_in_place(const LinearModel& model, DatasetPool& pool);
[[nodiscard]] DatasetPool infer(const LinearModel& model, DatasetPool pool);

/// Max relative error between the analytic gradient and central differences
/// with step h. Relative error is |a − n| / max(|a|, |n|, 1e-6).
[[nodiscard]] double grad_check(const LinearModel& model, const TrainingSet& batch, double l2 = 0.0, double h = 1e-5);

/// Flat little-endian binary: "SALM", u32 version, u64 C, u64 D, then C·D
/// row-major f64 weights and C f64 biases.
void save_model(const LinearModel& model, std::ostream& out);
[[nodiscard]] LinearModel load_model(std::istream& in);
void save_model(const LinearModel& model, const std::filesystem::path& path);
[[nodiscard]] LinearModel load_model(const std::filesystem::path& path);

}  // namespace stepal
