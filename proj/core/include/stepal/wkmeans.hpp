#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace stepal {

struct WeightedPoint {
  std::string id;
  std::vector<double> vector;
  double weight = 1.0;
};

struct KMeansOptions {
  std::size_t k = 1;
  std::uint64_t seed = 0;
  std::size_t restarts = 10;
  std::size_t max_iter = 100;
  /// Stop when the relative objective improvement of one Lloyd step drops below this.
  double tol = 1e-6;
};

struct ClusterModel {
  std::vector<std::vector<double>> centers;
  std::map<std::string, std::size_t> assignment;
  double objective = 0.0;
  std::size_t iterations_run = 0;
  /// k after clamping to the number of distinct points.
  std::size_t effective_k = 0;
  /// Objective after every assignment and every update of the winning restart.
  std::vector<double> objective_trace;
  std::size_t best_restart = 0;
  std::vector<std::string> warnings;
};

/// Minimizes Σ w·‖x − c_assigned‖² with Lloyd iterations.
///
/// Each restart r seeds a std::mt19937_64 with derive_seed(seed, {r}) and runs
/// weighted k-means++: every center is drawn by u ~ U[0,1) and taking the first
/// point whose running sum of scores exceeds u·Σscores, where the score is the
/// weight for the first center and weight × squared distance to the nearest
/// chosen center afterwards. If every score is zero the squared distance alone
/// is used. The restart with the lowest objective wins (ties: lowest restart).
///
/// Assignments go to the nearest center, ties to the lowest cluster index. A
/// cluster left with no members is reseeded at the point with the largest
/// weighted squared distance to its center; a cluster whose members all have
/// zero weight keeps its previous center.
///
/// Throws EmptyInput for no points or k == 0, InvalidConfig for negative or
/// non-finite weights or ragged vectors. All-zero weights fall back to uniform
/// weights with a warning; k larger than the number of distinct points is clamped.
[[nodiscard]] ClusterModel weighted_kmeans(std::span<const WeightedPoint> points, const KMeansOptions& options);

/// Σ w·‖x − c_{a(x)}‖² for a given assignment (indexed like points).
[[nodiscard]] double weighted_objective(std::span<const WeightedPoint> points,
                                        const std::vector<std::vector<double>>& centers,
                                        std::span<const std::size_t> assignment);

[[nodiscard]] double squared_distance(std::span<const double> a, std::span<const double> b);

/// For each cluster in index order, the eligible point closest to its center
/// that no earlier cluster has taken. Ties go to the lowest id. Returns at most k ids.
[[nodiscard]] std::vector<std::string> nearest_to_centers(const ClusterModel& model,
                                                          std::span<const WeightedPoint> points,
                                                          const std::set<std::string>& eligible);

}  // namespace stepal
