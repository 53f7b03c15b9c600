#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "../support/oracles.hpp"
#include "fixtures.hpp"
#include "stepal/learner.hpp"

namespace stepal {
namespace {

using testing::expect_code;

TrainingSet random_set(std::mt19937_64& rng, std::size_t n, std::size_t C, std::size_t D) {
  std::normal_distribution<double> nd;
  TrainingSet set{D, {}, {}};
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> x(D);
    for (auto& v : x) v = nd(rng);
    set.push_back(x, static_cast<std::uint32_t>(rng() % C));
  }
  return set;
}

LinearModel random_model(std::mt19937_64& rng, std::size_t C, std::size_t D, double scale) {
  std::normal_distribution<double> nd(0.0, scale);
  LinearModel m(C, D);
  for (auto& w : m.weights()) w = nd(rng);
  for (auto& b : m.bias()) b = nd(rng);
  return m;
}

TEST(Gradient, MatchesFiniteDifferences) {
  std::mt19937_64 rng(2024);
  for (int t = 0; t < 20; ++t) {
    const std::size_t C = 2 + rng() % 6;
    const std::size_t D = 1 + rng() % 10;
    const auto data = random_set(rng, 1 + rng() % 30, C, D);
    const auto model = random_model(rng, C, D, 0.5);
    const double l2 = t % 2 == 0 ? 0.0 : 1e-2;
    EXPECT_LT(oracle::finite_difference_error(model, data, l2), 1e-4);
    EXPECT_LT(grad_check(model, data, l2), 1e-4);
  }
}

TEST(Gradient, ZeroModelAndSingleSample) {
  std::mt19937_64 rng(1);
  const auto one = random_set(rng, 1, 3, 4);
  const LinearModel zero(3, 4);
  EXPECT_LT(oracle::finite_difference_error(zero, one, 0.0), 1e-4);
  EXPECT_NEAR(loss(zero, one, 0.0), std::log(3.0), 1e-12);
}

TEST(Loss, MatchesDefinition) {
  std::mt19937_64 rng(8);
  const auto data = random_set(rng, 25, 5, 6);
  const auto model = random_model(rng, 5, 6, 1.0);
  EXPECT_NEAR(loss(model, data, 0.3), oracle::naive_loss(model.weights(), model.bias(), 5, 6, data, 0.3), 1e-10);
}

TEST(Train, SeparableDataIsLearned) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> nd(0.0, 0.2);
  const std::vector<std::vector<double>> centers = {{3, 0, 0}, {0, 3, 0}, {0, 0, 3}, {-3, -3, 0}};
  TrainingSet data{3, {}, {}};
  for (int i = 0; i < 200; ++i) {
    const auto c = static_cast<std::uint32_t>(i % 4);
    std::vector<double> x = centers[c];
    for (auto& v : x) v += nd(rng);
    data.push_back(x, c);
  }
  const TrainResult r = train(data, 4, TrainConfig{});
  EXPECT_LT(r.final_loss, r.initial_loss);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto z = r.model.logits(data.row(i));
    correct += static_cast<std::size_t>(std::max_element(z.begin(), z.end()) - z.begin()) == data.labels[i];
  }
  EXPECT_GE(static_cast<double>(correct) / static_cast<double>(data.size()), 0.99);
}

TEST(Train, ZeroEpochsGivesZeroModel) {
  std::mt19937_64 rng(3);
  const auto data = random_set(rng, 10, 3, 2);
  TrainConfig cfg;
  cfg.epochs = 0;
  const auto r = train(data, 3, cfg);
  for (double w : r.model.weights()) EXPECT_EQ(w, 0.0);
  for (double b : r.model.bias()) EXPECT_EQ(b, 0.0);
}

TEST(Train, DuplicatedDataGivesSameModelInFullBatch) {
  std::mt19937_64 rng(12);
  const auto data = random_set(rng, 20, 3, 4);
  TrainingSet doubled = data;
  for (std::size_t i = 0; i < data.size(); ++i) doubled.push_back(data.row(i), data.labels[i]);
  TrainConfig cfg;
  cfg.batch_size = 1000;
  cfg.epochs = 50;
  const auto a = train(data, 3, cfg).model;
  const auto b = train(doubled, 3, cfg).model;
  for (std::size_t i = 0; i < a.weights().size(); ++i) EXPECT_NEAR(a.weights()[i], b.weights()[i], 1e-10);
  for (std::size_t i = 0; i < a.bias().size(); ++i) EXPECT_NEAR(a.bias()[i], b.bias()[i], 1e-10);
}

TEST(Train, DeterministicForSeed) {
  std::mt19937_64 rng(12);
  const auto data = random_set(rng, 150, 4, 5);
  TrainConfig cfg;
  cfg.epochs = 10;
  cfg.seed = 77;
  EXPECT_EQ(train(data, 4, cfg).model, train(data, 4, cfg).model);
}

TEST(Train, ErrorsAndWarnings) {
  expect_code(ErrorCode::NoLabeledData, [] { (void)train(TrainingSet{2, {}, {}}, 3, TrainConfig{}); });
  DatasetPool pool(3, 1);
  pool.add(testing::point_video("a", {1.0}, {}));
  expect_code(ErrorCode::NoLabeledData, [&] { (void)train(pool, TrainConfig{}); });

  TrainingSet one_class{1, {}, {}};
  one_class.push_back(std::vector<double>{1.0}, 2);
  one_class.push_back(std::vector<double>{2.0}, 2);
  const auto r = train(one_class, 3, TrainConfig{});
  ASSERT_FALSE(r.warnings.empty());
  EXPECT_NE(r.warnings.front().find("SingleClassData"), std::string::npos);

  TrainConfig bad;
  bad.learning_rate = 0.0;
  expect_code(ErrorCode::InvalidConfig, [&] { bad.validate(); });
}

TEST(Infer, FillsPredictionsIdempotently) {
  DatasetPool pool(3, 2);
  pool.add(testing::make_video("v", {{{1.0, 0.0}, {}, 0}, {{0.0, 1.0}, {}, 1}}));
  const LinearModel zero(3, 2);
  const DatasetPool once = infer(zero, pool);
  for (const auto& c : once.video("v").clips) {
    ASSERT_TRUE(c.logits.has_value());
    EXPECT_EQ(c.pseudo_step->value, 0u);
  }
  EXPECT_EQ(infer(zero, once), once);
  EXPECT_EQ(once.video("v").clips[0].features, pool.video("v").clips[0].features);
}

TEST(ModelFile, RoundTrip) {
  std::mt19937_64 rng(5);
  const auto model = random_model(rng, 4, 7, 1.0);
  std::stringstream buf;
  save_model(model, buf);
  const LinearModel back = load_model(buf);
  EXPECT_TRUE(std::equal(model.weights().begin(), model.weights().end(), back.weights().begin()));
  EXPECT_TRUE(std::equal(model.bias().begin(), model.bias().end(), back.bias().begin()));

  std::stringstream bad("XXXX");
  expect_code(ErrorCode::FormatError, [&] { (void)load_model(bad); });
  std::string bytes;
  {
    std::stringstream full;
    save_model(model, full);
    bytes = full.str();
  }
  std::stringstream cut(bytes.substr(0, bytes.size() - 3));
  expect_code(ErrorCode::ShapeMismatch, [&] { (void)load_model(cut); });
}

}  // namespace
}  // namespace stepal
