#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "stepal/uncertainty.hpp"

using namespace stepal;
using stepal::testing::expect_code;
using stepal::testing::make_video;

TEST(Softmax, SymmetricPair) {
  const std::vector<double> z{0.0, 0.0};
  const auto p = softmax(z);
  EXPECT_DOUBLE_EQ(p[0], 0.5);
  EXPECT_DOUBLE_EQ(p[1], 0.5);
}

TEST(Softmax, HandEvaluatedValues) {
  // exp(1), exp(2), exp(3) over their sum.
  const double e1 = 2.718281828459045, e2 = 7.38905609893065, e3 = 20.085536923187668;
  const double s = e1 + e2 + e3;
  const std::vector<double> z{1.0, 2.0, 3.0};
  const auto p = softmax(z);
  EXPECT_NEAR(p[0], e1 / s, 1e-12);
  EXPECT_NEAR(p[1], e2 / s, 1e-12);
  EXPECT_NEAR(p[2], e3 / s, 1e-12);
  EXPECT_NEAR(p[0], 0.09003, 5e-6);
  EXPECT_NEAR(p[1], 0.24473, 5e-6);
  EXPECT_NEAR(p[2], 0.66524, 5e-6);
}

TEST(Softmax, ShiftInvariance) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> n(0.0, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> z(2 + trial % 12);
    for (double& x : z) x = n(rng);
    const double shift = n(rng) * 100.0;
    auto shifted = z;
    for (double& x : shifted) x += shift;
    const auto a = softmax(z);
    const auto b = softmax(shifted);
    for (std::size_t i = 0; i < z.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-12);
  }
}

TEST(Softmax, LargeLogitsStayFinite) {
  const std::vector<double> z{1000.0, 999.0, -1000.0};
  const auto p = softmax(z);
  double sum = 0.0;
  for (double v : p.values()) {
    EXPECT_TRUE(std::isfinite(v));
    sum += v;
  }
  EXPECT_NEAR(sum, 1.0, 1e-12);
}

TEST(Softmax, Errors) {
  const std::vector<double> one{1.0};
  expect_code(ErrorCode::InvalidConfig, [&] { (void)softmax(one); });
  const std::vector<double> bad{1.0, INFINITY};
  expect_code(ErrorCode::NonFiniteInput, [&] { (void)softmax(bad); });
}

TEST(ProbVector, Validation) {
  EXPECT_NO_THROW((void)ProbVector::checked({0.25, 0.75}));
  expect_code(ErrorCode::InvalidConfig, [] { (void)ProbVector::checked({0.5, 0.6}); });
  expect_code(ErrorCode::InvalidConfig, [] { (void)ProbVector::checked({-0.1, 1.1}); });
  expect_code(ErrorCode::NonFiniteInput, [] { (void)ProbVector::checked({NAN, 1.0}); });
}

TEST(PseudoLabel, ArgmaxWithLowestIndexTies) {
  EXPECT_EQ(pseudo_label(std::vector<double>{0.1, 0.9}), StepId{1});
  EXPECT_EQ(pseudo_label(std::vector<double>{0.5, 0.5}), StepId{0});
  EXPECT_EQ(pseudo_label(std::vector<double>{3.0, 1.0, 2.0}), StepId{0});
  const std::vector<double> z{3.0, 1.0, 2.0};
  EXPECT_EQ(pseudo_label(softmax(z).values()), pseudo_label(z));
}

TEST(ClipEntropy, UniformIsLogC) {
  for (std::size_t C : {2u, 4u, 13u}) {
    const auto p = ProbVector::checked(std::vector<double>(C, 1.0 / static_cast<double>(C)));
    EXPECT_NEAR(clip_entropy(p), std::log(static_cast<double>(C)), 1e-6) << C;
  }
}

TEST(ClipEntropy, OneHotIsNearZero) {
  const auto p = ProbVector::checked({0.0, 1.0, 0.0});
  EXPECT_LE(std::abs(clip_entropy(p)), 2e-8);
}

TEST(ClipEntropy, HandEvaluated) {
  // -(0.7 ln 0.7 + 0.2 ln 0.2 + 0.1 ln 0.1)
  const double exact = -(0.7 * std::log(0.7) + 0.2 * std::log(0.2) + 0.1 * std::log(0.1));
  const auto p = ProbVector::checked({0.7, 0.2, 0.1});
  EXPECT_NEAR(clip_entropy(p), 0.801819, 1e-5);
  EXPECT_NEAR(clip_entropy(p), exact, 1e-7);
}

TEST(Epsilon, Range) {
  EXPECT_DOUBLE_EQ(Epsilon().value(), 1e-8);
  EXPECT_NO_THROW(Epsilon(1e-6));
  expect_code(ErrorCode::InvalidConfig, [] { Epsilon(0.0); });
  expect_code(ErrorCode::InvalidConfig, [] { Epsilon(1e-3); });
}

TEST(VideoEntropy, MeanOfClipEntropies) {
  const auto uniform = make_video("u", {{{0.0}, {0.0, 0.0}, 0}, {{0.0}, {1.0, 1.0}, 0}});
  EXPECT_NEAR(video_entropy(uniform), std::log(2.0), 1e-6);

  const std::vector<double> z1{0.3, -1.2, 2.0};
  const std::vector<double> z2{4.0, 0.0, 0.1};
  const auto one = make_video("one", {{{0.0}, z1, 0}});
  EXPECT_DOUBLE_EQ(video_entropy(one), clip_entropy(softmax(z1)));

  const auto two = make_video("two", {{{0.0}, z1, 0}, {{0.0}, z2, 0}});
  EXPECT_NEAR(video_entropy(two), 0.5 * (clip_entropy(softmax(z1)) + clip_entropy(softmax(z2))), 1e-15);
}

TEST(VideoEntropy, MissingLogits) {
  const auto v = make_video("x", {{{0.0}, {0.0, 1.0}, 0}, {{0.0}, {}, 0}});
  expect_code(ErrorCode::MissingLogits, [&] { (void)video_entropy(v); });
  expect_code(ErrorCode::MissingLogits, [&] { (void)video_margin(v); });
  expect_code(ErrorCode::MissingLogits, [&] { (void)mean_prob_entropy(v); });
}

TEST(MeanProbEntropy, DiffersFromMeanOfEntropies) {
  // Two confident clips that disagree: each clip entropy is small, the mean distribution is uniform.
  const auto v = make_video("x", {{{0.0}, {20.0, 0.0}, 0}, {{0.0}, {0.0, 20.0}, 0}});
  EXPECT_LT(video_entropy(v), 1e-6);
  EXPECT_NEAR(mean_prob_entropy(v), std::log(2.0), 1e-6);
}

TEST(Margin, Examples) {
  EXPECT_DOUBLE_EQ(margin_score(ProbVector::checked({0.5, 0.5})), 0.0);
  EXPECT_DOUBLE_EQ(margin_score(ProbVector::checked({0.0, 1.0})), 1.0);
  EXPECT_NEAR(margin_score(ProbVector::checked({0.6, 0.3, 0.1})), 0.3, 1e-12);
}
