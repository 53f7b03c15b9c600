#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "stepal/pool.hpp"
#include "stepal/uncertainty.hpp"

namespace stepal {

struct SelectionRequest {
  /// Label-blind view of the pool; strategies never see true_step.
  PoolView pool;
  std::size_t budget = 1;
  std::uint64_t seed = 0;
  Epsilon eps{};
  // Clustering knobs shared by the k-means family.
  std::size_t restarts = 10;
  std::size_t max_iter = 100;
  double tol = 1e-6;
};

/// Per-video scores a strategy used. Fields a strategy does not compute stay empty.
struct VideoDiagnostics {
  std::string id;
  std::optional<double> entropy;
  std::optional<double> margin;
  std::optional<double> z_norm;
  std::optional<std::size_t> cluster;
  /// Distance to the assigned cluster center, or to the covered set for coreset.
  std::optional<double> distance;
};

struct SelectionResult {
  std::vector<std::string> chosen;
  /// One entry per scored candidate, ascending id.
  std::vector<VideoDiagnostics> diagnostics;
  std::vector<std::string> warnings;
  /// How clip-level quantities were aggregated to the video level.
  std::string aggregation;
  std::optional<double> cluster_objective;
};

[[nodiscard]] SelectionResult select_random(const SelectionRequest& req);
[[nodiscard]] SelectionResult select_entropy(const SelectionRequest& req);
[[nodiscard]] SelectionResult select_mean_prob_entropy(const SelectionRequest& req);
[[nodiscard]] SelectionResult select_margin(const SelectionRequest& req);
[[nodiscard]] SelectionResult select_coreset(const SelectionRequest& req);
[[nodiscard]] SelectionResult select_kmeans(const SelectionRequest& req);
[[nodiscard]] SelectionResult select_me_kmeans(const SelectionRequest& req);
[[nodiscard]] SelectionResult select_ewc(const SelectionRequest& req);
[[nodiscard]] SelectionResult select_stepal(const SelectionRequest& req);

using StrategyFn = SelectionResult (*)(const SelectionRequest&);

struct StrategyHandle {
  std::string_view name;
  StrategyFn fn = nullptr;

  SelectionResult operator()(const SelectionRequest& req) const { return fn(req); }
};

/// Case-insensitive lookup. Unknown names (including "coregcn") throw
/// UnknownStrategy with the list of valid names.
[[nodiscard]] StrategyHandle strategy_registry(std::string_view name);
[[nodiscard]] std::span<const std::string_view> strategy_names() noexcept;

}  // namespace stepal
