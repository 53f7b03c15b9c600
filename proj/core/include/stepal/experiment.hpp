#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "stepal/error.hpp"
#include "stepal/learner.hpp"
#include "stepal/metrics.hpp"
#include "stepal/synthgen.hpp"
#include "stepal/uncertainty.hpp"

namespace stepal {

/// One active-learning study: data source, acquisition strategy, schedule and learner.
struct ExperimentConfig {
  GenConfig gen = benchmark_suite("default");
  /// When set, videos come from this manifest instead of the generator.
  std::optional<std::filesystem::path> manifest;
  std::string strategy = "stepal";
  double initial_label_frac = 0.10;
  double budget_frac = 0.10;
  std::size_t cycles = 4;
  TrainConfig train;
  std::vector<std::uint64_t> seeds{0};
  Epsilon eps;
  std::size_t restarts = 10;
  std::size_t max_iter = 100;
  double tol = 1e-6;
  std::filesystem::path output_dir = "results";
  std::size_t workers = 1;

  /// Throws InvalidConfig.
  void validate() const;
};

struct CycleReport {
  std::uint64_t seed = 0;
  std::string strategy;
  std::size_t cycle = 0;
  std::size_t labeled_count = 0;
  /// Videos annotated at the end of this cycle (empty for the last cycle).
  std::vector<std::string> chosen;
  MetricReport test;
  double wall_time_s = 0.0;
  std::vector<std::string> warnings;
};

struct RunFailure {
  std::uint64_t seed = 0;
  std::string strategy;
  std::size_t cycle = 0;
  ErrorCode code = ErrorCode::InvalidConfig;
  std::string message;
};

struct ExperimentResult {
  /// Sorted by (strategy position, seed position, cycle).
  std::vector<CycleReport> reports;
  std::vector<RunFailure> failures;
};

/// Per-seed derived quantities, exposed for the pairing checks.
struct SeedSetup {
  std::uint64_t seed = 0;
  SplitPools splits;
  std::vector<std::string> initial_labeled;
  std::size_t budget = 0;
};

/// Pool generation/loading, split and initial labeled draw for one seed.
[[nodiscard]] SeedSetup prepare_seed(const ExperimentConfig& cfg, std::uint64_t seed);

/// round(frac × n), at least 1.
[[nodiscard]] std::size_t fraction_count(double frac, std::size_t n);

/// Runs cfg.strategy for every seed: cycles r = 0..R, each training a fresh
/// model on the labeled videos and evaluating on the test split, then (r < R)
/// selecting and annotating a batch. Failures abort only the affected seed.
[[nodiscard]] ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Paired comparison: every strategy sees the same pools, splits, initial
/// labeled sets and training seeds. Throws InvalidConfig for an empty list.
[[nodiscard]] ExperimentResult compare_strategies(const ExperimentConfig& cfg, std::span<const std::string> strategies);

struct SummaryRow {
  std::string strategy;
  std::size_t cycle = 0;
  std::string metric;
  double mean = 0.0;
  double stddev = 0.0;
  std::size_t n = 0;
};

/// Names of the four reported metrics, in output order.
[[nodiscard]] std::span<const std::string_view> metric_names() noexcept;
[[nodiscard]] double metric_value(const MetricReport& report, std::string_view metric);

/// Mean and sample standard deviation over seeds per (strategy, cycle, metric).
[[nodiscard]] std::vector<SummaryRow> summarize(const ExperimentResult& result);

}  // namespace stepal
