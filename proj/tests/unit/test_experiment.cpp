#include <gtest/gtest.h>

#include <algorithm>
#include <sstream>

#include "fixtures.hpp"
#include "stepal/config.hpp"
#include "stepal/experiment.hpp"
#include "stepal/report.hpp"

namespace stepal {
namespace {

using testing::expect_code;

ExperimentConfig tiny_config() {
  ExperimentConfig cfg;
  cfg.gen = benchmark_suite("tiny");
  cfg.initial_label_frac = 0.2;
  cfg.budget_frac = 0.2;
  cfg.cycles = 2;
  cfg.seeds = {0, 1, 2};
  cfg.train.epochs = 30;
  cfg.restarts = 3;
  return cfg;
}

std::string results_csv(const ExperimentResult& r) {
  std::ostringstream out;
  write_results_csv(r, out);
  write_selections_csv(r, out);
  return out.str();
}

bool has_warning(const CycleReport& r, std::string_view text) {
  return std::any_of(r.warnings.begin(), r.warnings.end(),
                     [&](const std::string& w) { return w.find(text) != std::string::npos; });
}

TEST(Experiment, ZeroCyclesGivesOneReportPerSeed) {
  ExperimentConfig cfg = tiny_config();
  cfg.cycles = 0;
  const auto r = run_experiment(cfg);
  EXPECT_TRUE(r.failures.empty());
  ASSERT_EQ(r.reports.size(), 3u);
  for (const auto& rep : r.reports) {
    EXPECT_EQ(rep.cycle, 0u);
    EXPECT_TRUE(rep.chosen.empty());
  }
}

TEST(Experiment, LabeledCountGrowsByBudget) {
  const ExperimentConfig cfg = tiny_config();
  const auto r = run_experiment(cfg);
  ASSERT_TRUE(r.failures.empty());
  ASSERT_EQ(r.reports.size(), 9u);
  for (std::size_t s = 0; s < 3; ++s) {
    EXPECT_EQ(r.reports[3 * s].labeled_count, 2u);
    EXPECT_EQ(r.reports[3 * s + 1].labeled_count, 4u);
    EXPECT_EQ(r.reports[3 * s + 2].labeled_count, 6u);
    EXPECT_EQ(r.reports[3 * s].chosen.size(), 2u);
    EXPECT_TRUE(r.reports[3 * s + 2].chosen.empty());
  }
}

TEST(Experiment, DeterministicAcrossWorkerCounts) {
  ExperimentConfig cfg = tiny_config();
  const std::vector<std::string> strategies = {"random", "entropy", "stepal", "ewc"};
  const std::string one = results_csv(compare_strategies(cfg, strategies));
  EXPECT_EQ(results_csv(compare_strategies(cfg, strategies)), one);
  cfg.workers = 3;
  EXPECT_EQ(results_csv(compare_strategies(cfg, strategies)), one);
}

TEST(Experiment, StrategiesSharePoolsAndInitialModel) {
  const ExperimentConfig cfg = tiny_config();
  const std::vector<std::string> strategies = {"random", "coreset", "stepal"};
  const auto r = compare_strategies(cfg, strategies);
  ASSERT_TRUE(r.failures.empty());
  std::map<std::uint64_t, double> initial;
  for (const auto& rep : r.reports) {
    if (rep.cycle != 0) continue;
    const auto [it, inserted] = initial.emplace(rep.seed, rep.test.accuracy);
    if (!inserted) {
      EXPECT_EQ(it->second, rep.test.accuracy);
    }
  }
  EXPECT_EQ(prepare_seed(cfg, 1).splits.train, prepare_seed(cfg, 1).splits.train);
  EXPECT_EQ(prepare_seed(cfg, 1).initial_labeled, prepare_seed(cfg, 1).initial_labeled);
}

TEST(Experiment, ExhaustedPoolSkipsSelection) {
  ExperimentConfig cfg = tiny_config();
  cfg.gen.n_videos = 16;
  cfg.cycles = 4;
  cfg.seeds = {0};
  const auto r = run_experiment(cfg);
  ASSERT_TRUE(r.failures.empty());
  ASSERT_EQ(r.reports.size(), 5u);
  EXPECT_EQ(r.reports[3].labeled_count, 8u);
  EXPECT_TRUE(has_warning(r.reports[3], "selection skipped"));
  EXPECT_FALSE(has_warning(r.reports[2], "selection skipped"));
}

TEST(Experiment, ConfigValidation) {
  const ExperimentConfig good = tiny_config();
  expect_code(ErrorCode::InvalidConfig, [&] { (void)compare_strategies(good, {}); });
  expect_code(ErrorCode::UnknownStrategy,
              [&] { (void)compare_strategies(good, std::vector<std::string>{"coregcn"}); });
  auto bad = [&](auto mutate) {
    ExperimentConfig cfg = good;
    mutate(cfg);
    expect_code(ErrorCode::InvalidConfig, [&] { cfg.validate(); });
  };
  bad([](ExperimentConfig& c) { c.cycles = 10; });
  bad([](ExperimentConfig& c) { c.seeds.clear(); });
  bad([](ExperimentConfig& c) { c.budget_frac = 0.0; });
  bad([](ExperimentConfig& c) { c.workers = 0; });
}

TEST(Experiment, FractionCount) {
  EXPECT_EQ(fraction_count(0.1, 60), 6u);
  EXPECT_EQ(fraction_count(0.2, 8), 2u);
  EXPECT_EQ(fraction_count(0.01, 10), 1u);
}

TEST(Summary, MeanAndSampleStd) {
  ExperimentResult r;
  for (std::uint64_t s = 0; s < 3; ++s) {
    CycleReport rep;
    rep.seed = s;
    rep.strategy = "x";
    rep.test.accuracy = 0.5 + 0.1 * static_cast<double>(s);
    r.reports.push_back(rep);
  }
  const auto rows = summarize(r);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0].metric, "accuracy");
  EXPECT_NEAR(rows[0].mean, 0.6, 1e-12);
  EXPECT_NEAR(rows[0].stddev, 0.1, 1e-12);
  EXPECT_EQ(rows[0].n, 3u);
}

TEST(Config, ParsesAndRejects) {
  const auto loaded = parse_config(R"({"benchmark": "tiny", "gen": {"n_videos": 30}, "strategies": ["random", "stepal"],
                                       "cycles": 2, "seeds": [4, 5], "train": {"epochs": 7}})");
  EXPECT_EQ(loaded.experiment.gen.n_videos, 30u);
  EXPECT_EQ(loaded.experiment.gen.steps, 4u);
  EXPECT_EQ(loaded.experiment.train.epochs, 7u);
  EXPECT_EQ(loaded.strategies, (std::vector<std::string>{"random", "stepal"}));
  EXPECT_EQ(loaded.experiment.seeds, (std::vector<std::uint64_t>{4, 5}));

  expect_code(ErrorCode::InvalidConfig, [] { (void)parse_config(R"({"cycle": 2})"); });
  expect_code(ErrorCode::InvalidConfig, [] { (void)parse_config(R"({"gen": {"colour": 1}})"); });
  expect_code(ErrorCode::InvalidConfig, [] { (void)parse_config("{"); });
  expect_code(ErrorCode::InvalidConfig, [] { (void)parse_config(R"({"cycles": "four"})"); });
  expect_code(ErrorCode::UnknownPreset, [] { (void)parse_config(R"({"benchmark": "huge"})"); });
}

TEST(Config, GenRoundTripsThroughJson) {
  GenConfig gen = benchmark_suite("default");
  gen.seed = 12;
  gen.canonical_order = gen.order();
  const auto loaded = parse_config(std::string(R"({"gen": )") + gen_config_json(gen) + "}");
  EXPECT_EQ(loaded.experiment.gen, gen);
}

}  // namespace
}  // namespace stepal
