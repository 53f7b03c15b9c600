#include "stepal/learner.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <set>

#include "binary_io.hpp"
#include "stepal/error.hpp"

namespace stepal {

namespace {

constexpr char kModelMagic[4] = {'S', 'A', 'L', 'M'};
constexpr std::uint32_t kModelVersion = 1;

// Softmax of logits in place; returns log-sum-exp.
double softmax_in_place(std::span<double> z) {
  const double top = *std::max_element(z.begin(), z.end());
  double sum = 0.0;
  for (double& v : z) {
    v = std::exp(v - top);
    sum += v;
  }
  for (double& v : z) v /= sum;
  return top + std::log(sum);
}

}  // namespace

LinearModel::LinearModel(std::size_t step_count, std::size_t feature_dim, std::uint64_t train_seed)
    : step_count_(step_count),
      feature_dim_(feature_dim),
      train_seed_(train_seed),
      weights_(step_count * feature_dim, 0.0),
      bias_(step_count, 0.0) {
  if (step_count < 2 || feature_dim < 1) throw Error(ErrorCode::InvalidConfig, "model needs C >= 2 and D >= 1");
}

std::vector<double> LinearModel::logits(std::span<const double> x) const {
  std::vector<double> out(step_count_);
  logits_into(x, out);
  return out;
}

void LinearModel::logits_into(std::span<const double> x, std::span<double> out) const {
  if (x.size() != feature_dim_) {
    throw Error(ErrorCode::DimensionMismatch,
                "input length " + std::to_string(x.size()) + " != D=" + std::to_string(feature_dim_));
  }
  for (std::size_t c = 0; c < step_count_; ++c) {
    const double* w = weights_.data() + c * feature_dim_;
    double s = bias_[c];
    for (std::size_t d = 0; d < feature_dim_; ++d) s += w[d] * x[d];
    out[c] = s;
  }
}

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw Error(ErrorCode::InvalidConfig, "learning_rate must be positive");
  }
  if (batch_size == 0) throw Error(ErrorCode::InvalidConfig, "batch_size must be positive");
  if (!(l2 >= 0.0) || !std::isfinite(l2)) throw Error(ErrorCode::InvalidConfig, "l2 must be >= 0");
}

void TrainingSet::push_back(std::span<const double> x, std::uint32_t label) {
  if (x.size() != feature_dim) throw Error(ErrorCode::DimensionMismatch, "training row has wrong length");
  features.insert(features.end(), x.begin(), x.end());
  labels.push_back(label);
}

TrainingSet collect_labeled(const DatasetPool& pool) {
  TrainingSet data;
  data.feature_dim = pool.feature_dim();
  for (const auto& [id, video] : pool.videos()) {
    if (video.state != PoolState::Labeled) continue;
    for (const auto& clip : video.clips) {
      if (!clip.true_step) throw Error(ErrorCode::InvalidVideo, "labeled video '" + id + "' has a clip without a label");
      data.push_back(clip.features, clip.true_step->value);
    }
  }
  return data;
}

LossGradient loss_and_gradient(const LinearModel& model, const TrainingSet& data, double l2,
                               std::span<const std::size_t> rows) {
  const std::size_t C = model.step_count();
  const std::size_t D = model.feature_dim();
  if (data.feature_dim != D) throw Error(ErrorCode::DimensionMismatch, "training set D differs from model D");

  LossGradient out;
  out.grad_weights.assign(C * D, 0.0);
  out.grad_bias.assign(C, 0.0);
  std::vector<double> z(C);

  const std::size_t n = rows.empty() ? data.size() : rows.size();
  if (n == 0) throw Error(ErrorCode::NoLabeledData, "empty batch");
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t i = rows.empty() ? k : rows[k];
    const auto x = data.row(i);
    const std::uint32_t y = data.labels[i];
    if (y >= C) throw Error(ErrorCode::InvalidConfig, "label out of range");
    model.logits_into(x, z);
    const double logit_y = z[y];
    out.loss += softmax_in_place(z) - logit_y;
    z[y] -= 1.0;
    for (std::size_t c = 0; c < C; ++c) {
      const double g = z[c];
      if (g == 0.0) continue;
      double* gw = out.grad_weights.data() + c * D;
      for (std::size_t d = 0; d < D; ++d) gw[d] += g * x[d];
      out.grad_bias[c] += g;
    }
  }

  const double inv = 1.0 / static_cast<double>(n);
  out.loss *= inv;
  for (double& g : out.grad_bias) g *= inv;
  const auto w = model.weights();
  double sq = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) {
    out.grad_weights[j] = out.grad_weights[j] * inv + l2 * w[j];
    sq += w[j] * w[j];
  }
  out.loss += 0.5 * l2 * sq;
  return out;
}

double loss(const LinearModel& model, const TrainingSet& data, double l2) {
  return loss_and_gradient(model, data, l2).loss;
}

TrainResult train(const TrainingSet& data, std::size_t step_count, const TrainConfig& cfg) {
  cfg.validate();
  if (data.size() == 0) throw Error(ErrorCode::NoLabeledData, "no labeled clips to train on");

  TrainResult result{LinearModel(step_count, data.feature_dim, cfg.seed), 0.0, 0.0, {}};
  const std::set<std::uint32_t> classes(data.labels.begin(), data.labels.end());
  if (classes.size() < 2) {
    result.warnings.push_back("SingleClassData: only class " + std::to_string(*classes.begin()) +
                              " present; the model will predict it everywhere");
  }

  LinearModel& model = result.model;
  result.initial_loss = loss(model, data, cfg.l2);

  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(cfg.seed);
  const std::size_t batch = std::min(cfg.batch_size, data.size());
  auto w = model.weights();
  auto b = model.bias();

  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    if (batch < data.size()) std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t start = 0; start < order.size(); start += batch) {
      const std::size_t len = std::min(batch, order.size() - start);
      const auto lg = loss_and_gradient(model, data, cfg.l2, std::span<const std::size_t>(order).subspan(start, len));
      for (std::size_t j = 0; j < w.size(); ++j) w[j] -= cfg.learning_rate * lg.grad_weights[j];
      for (std::size_t c = 0; c < b.size(); ++c) b[c] -= cfg.learning_rate * lg.grad_bias[c];
    }
  }
  result.final_loss = loss(model, data, cfg.l2);
  return result;
}

TrainResult train(const DatasetPool& pool, const TrainConfig& cfg) {
  return train(collect_labeled(pool), pool.step_count(), cfg);
}

void infer_in_place(const LinearModel& model, DatasetPool& pool) {
  if (model.step_count() != pool.step_count() || model.feature_dim() != pool.feature_dim()) {
    throw Error(ErrorCode::DimensionMismatch, "model shape (C=" + std::to_string(model.step_count()) +
                                                  ", D=" + std::to_string(model.feature_dim()) +
                                                  ") does not match pool shape");
  }
  std::vector<std::string> ids;
  ids.reserve(pool.size());
  for (const auto& [id, video] : pool.videos()) ids.push_back(id);
  for (const auto& id : ids) {
    const auto& clips = pool.video(id).clips;
    for (std::size_t t = 0; t < clips.size(); ++t) pool.set_logits(id, t, model.logits(clips[t].features));
  }
}

DatasetPool infer(const LinearModel& model, DatasetPool pool) {
  infer_in_place(model, pool);
  return pool;
}

double grad_check(const LinearModel& model, const TrainingSet& batch, double l2, double h) {
  const auto analytic = loss_and_gradient(model, batch, l2);
  LinearModel probe = model;
  double worst = 0.0;

  auto check = [&](std::span<double> params, std::span<const double> grads) {
    for (std::size_t j = 0; j < params.size(); ++j) {
      const double saved = params[j];
      params[j] = saved + h;
      const double up = loss(probe, batch, l2);
      params[j] = saved - h;
      const double down = loss(probe, batch, l2);
      params[j] = saved;
      const double numeric = (up - down) / (2.0 * h);
      const double denom = std::max({std::abs(grads[j]), std::abs(numeric), 1e-6});
      worst = std::max(worst, std::abs(grads[j] - numeric) / denom);
    }
  };
  check(probe.weights(), analytic.grad_weights);
  check(probe.bias(), analytic.grad_bias);
  return worst;
}

void save_model(const LinearModel& model, std::ostream& out) {
  out.write(kModelMagic, 4);
  detail::write_le<std::uint32_t>(out, kModelVersion);
  detail::write_le<std::uint64_t>(out, model.step_count());
  detail::write_le<std::uint64_t>(out, model.feature_dim());
  for (double w : model.weights()) detail::write_le(out, w);
  for (double b : model.bias()) detail::write_le(out, b);
  if (!out) throw Error(ErrorCode::IoError, "failed writing model");
}

LinearModel load_model(std::istream& in) {
  detail::ByteReader reader(in);
  std::string magic;
  if (!reader.read_bytes(magic, 4) || magic != std::string(kModelMagic, 4)) {
    throw Error(ErrorCode::FormatError, "not a model file (bad magic)");
  }
  std::uint32_t version = 0;
  std::uint64_t C = 0;
  std::uint64_t D = 0;
  if (!reader.read_le(version)) throw Error(ErrorCode::ShapeMismatch, "truncated model header");
  if (version != kModelVersion) throw Error(ErrorCode::VersionError, "unsupported model version " + std::to_string(version));
  if (!reader.read_le(C) || !reader.read_le(D)) throw Error(ErrorCode::ShapeMismatch, "truncated model header");
  if (C < 2 || D < 1 || C > (1u << 20) || D > (1u << 24)) throw Error(ErrorCode::ShapeMismatch, "implausible model shape");
  LinearModel model(C, D);
  for (double& w : model.weights()) {
    if (!reader.read_le(w)) throw Error(ErrorCode::ShapeMismatch, "truncated weights at byte " + std::to_string(reader.offset()));
  }
  for (double& b : model.bias()) {
    if (!reader.read_le(b)) throw Error(ErrorCode::ShapeMismatch, "truncated bias at byte " + std::to_string(reader.offset()));
  }
  return model;
}

void save_model(const LinearModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  save_model(model, out);
}

LinearModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  return load_model(in);
}

}  // namespace stepal
