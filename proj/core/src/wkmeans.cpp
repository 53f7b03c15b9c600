#include "stepal/wkmeans.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <random>

#include "stepal/error.hpp"
#include "stepal/seed.hpp"

namespace stepal {

namespace {

using Centers = std::vector<std::vector<double>>;

struct RunResult {
  Centers centers;
  std::vector<std::size_t> assignment;
  double objective = std::numeric_limits<double>::infinity();
  std::size_t iterations = 0;
  std::vector<double> trace;
};

// Index drawn with probability proportional to scores; nullopt when all scores are zero.
std::optional<std::size_t> draw_proportional(std::span<const double> scores, std::mt19937_64& rng) {
  double total = 0.0;
  for (double s : scores) total += s;
  // The draw is consumed even if unused so that RNG streams stay aligned.
  const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  if (!(total > 0.0)) return std::nullopt;
  const double target = u * total;
  double running = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (scores[i] <= 0.0) continue;
    running += scores[i];
    last_positive = i;
    if (running > target) return i;
  }
  return last_positive;
}

Centers seed_centers(std::span<const WeightedPoint> points, std::span<const double> w, std::size_t k,
                     std::mt19937_64& rng) {
  const std::size_t n = points.size();
  Centers centers;
  centers.reserve(k);
  std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
  std::vector<double> scores(w.begin(), w.end());

  auto add_center = [&](std::size_t idx) {
    centers.push_back(points[idx].vector);
    for (std::size_t i = 0; i < n; ++i) nearest[i] = std::min(nearest[i], squared_distance(points[i].vector, centers.back()));
  };

  add_center(draw_proportional(scores, rng).value_or(0));
  while (centers.size() < k) {
    for (std::size_t i = 0; i < n; ++i) scores[i] = w[i] * nearest[i];
    auto pick = draw_proportional(scores, rng);
    if (!pick) pick = draw_proportional(nearest, rng);
    if (!pick) break;
    add_center(*pick);
  }
  return centers;
}

double assign(std::span<const WeightedPoint> points, std::span<const double> w, const Centers& centers,
              std::vector<std::size_t>& assignment) {
  double objective = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    std::size_t best = 0;
    double best_d = squared_distance(points[i].vector, centers[0]);
    for (std::size_t j = 1; j < centers.size(); ++j) {
      const double d = squared_distance(points[i].vector, centers[j]);
      if (d < best_d) {
        best_d = d;
        best = j;
      }
    }
    assignment[i] = best;
    objective += w[i] * best_d;
  }
  return objective;
}

void update_centers(std::span<const WeightedPoint> points, std::span<const double> w, Centers& centers,
                    std::vector<std::size_t>& assignment) {
  const std::size_t k = centers.size();
  const std::size_t dim = centers.front().size();
  std::vector<std::vector<double>> sums(k, std::vector<double>(dim, 0.0));
  std::vector<double> mass(k, 0.0);
  std::vector<std::size_t> members(k, 0);
  for (std::size_t i = 0; i < points.size(); ++i) {
    const std::size_t j = assignment[i];
    ++members[j];
    mass[j] += w[i];
    for (std::size_t d = 0; d < dim; ++d) sums[j][d] += w[i] * points[i].vector[d];
  }
  for (std::size_t j = 0; j < k; ++j) {
    if (members[j] == 0 || !(mass[j] > 0.0)) continue;
    for (std::size_t d = 0; d < dim; ++d) centers[j][d] = sums[j][d] / mass[j];
  }

  // Reseed empty clusters at the worst-fitted point of a cluster that can spare one.
  for (std::size_t j = 0; j < k; ++j) {
    if (members[j] != 0) continue;
    std::size_t best = points.size();
    double best_score = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (members[assignment[i]] < 2) continue;
      const double score = w[i] * squared_distance(points[i].vector, centers[assignment[i]]);
      if (score > best_score) {
        best_score = score;
        best = i;
      }
    }
    if (best == points.size()) continue;
    --members[assignment[best]];
    assignment[best] = j;
    members[j] = 1;
    centers[j] = points[best].vector;
  }
}

RunResult run_once(std::span<const WeightedPoint> points, std::span<const double> w, std::size_t k,
                   std::uint64_t seed, const KMeansOptions& options) {
  std::mt19937_64 rng(seed);
  RunResult run;
  run.centers = seed_centers(points, w, k, rng);
  run.assignment.assign(points.size(), 0);
  double objective = assign(points, w, run.centers, run.assignment);
  run.trace.push_back(objective);

  for (std::size_t iter = 0; iter < options.max_iter; ++iter) {
    update_centers(points, w, run.centers, run.assignment);
    run.trace.push_back(weighted_objective(points, run.centers, run.assignment));
    const double next = assign(points, w, run.centers, run.assignment);
    run.trace.push_back(next);
    ++run.iterations;
    const double improvement = objective - next;
    objective = next;
    if (objective <= 0.0 || improvement <= options.tol * (objective + improvement)) break;
  }
  run.objective = objective;
  return run;
}

}  // namespace

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t d = 0; d < a.size(); ++d) {
    const double diff = a[d] - b[d];
    s += diff * diff;
  }
  return s;
}

double weighted_objective(std::span<const WeightedPoint> points, const std::vector<std::vector<double>>& centers,
                          std::span<const std::size_t> assignment) {
  double s = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    s += points[i].weight * squared_distance(points[i].vector, centers.at(assignment[i]));
  }
  return s;
}

ClusterModel weighted_kmeans(std::span<const WeightedPoint> points, const KMeansOptions& options) {
  if (points.empty()) throw Error(ErrorCode::EmptyInput, "weighted_kmeans: no points");
  if (options.k == 0) throw Error(ErrorCode::EmptyInput, "weighted_kmeans: k must be >= 1");
  if (options.restarts == 0) throw Error(ErrorCode::InvalidConfig, "weighted_kmeans: restarts must be >= 1");

  ClusterModel model;
  const std::size_t dim = points.front().vector.size();
  std::vector<double> w;
  w.reserve(points.size());
  double total = 0.0;
  for (const auto& p : points) {
    if (p.vector.size() != dim) throw Error(ErrorCode::InvalidConfig, "weighted_kmeans: ragged point vectors");
    for (double x : p.vector) {
      if (!std::isfinite(x)) throw Error(ErrorCode::NonFiniteInput, "weighted_kmeans: non-finite coordinate");
    }
    if (!std::isfinite(p.weight) || p.weight < 0.0) {
      throw Error(ErrorCode::InvalidConfig, "weighted_kmeans: weights must be finite and >= 0");
    }
    w.push_back(p.weight);
    total += p.weight;
  }

  // Work on a private copy so the uniform fallback is visible to the objective.
  std::vector<WeightedPoint> work(points.begin(), points.end());
  if (!(total > 0.0)) {
    model.warnings.emplace_back("AllWeightsZero: falling back to uniform weights");
    for (auto& p : work) p.weight = 1.0;
    std::fill(w.begin(), w.end(), 1.0);
  }

  std::set<std::vector<double>> distinct;
  for (const auto& p : work) distinct.insert(p.vector);
  std::size_t k = options.k;
  if (k > distinct.size()) {
    model.warnings.push_back("k=" + std::to_string(k) + " exceeds " + std::to_string(distinct.size()) +
                             " distinct points; clamped");
    k = distinct.size();
  }

  RunResult best;
  for (std::size_t r = 0; r < options.restarts; ++r) {
    RunResult run = run_once(work, w, k, derive_seed(options.seed, {r}), options);
    if (run.objective < best.objective) {
      best = std::move(run);
      model.best_restart = r;
    }
  }

  model.centers = std::move(best.centers);
  model.effective_k = model.centers.size();
  model.objective = best.objective;
  model.iterations_run = best.iterations;
  model.objective_trace = std::move(best.trace);
  for (std::size_t i = 0; i < work.size(); ++i) model.assignment[work[i].id] = best.assignment[i];
  return model;
}

std::vector<std::string> nearest_to_centers(const ClusterModel& model, std::span<const WeightedPoint> points,
                                            const std::set<std::string>& eligible) {
  std::vector<std::string> chosen;
  std::set<std::string> taken;
  for (const auto& center : model.centers) {
    const WeightedPoint* best = nullptr;
    double best_d = std::numeric_limits<double>::infinity();
    for (const auto& p : points) {
      if (!eligible.contains(p.id) || taken.contains(p.id)) continue;
      const double d = squared_distance(p.vector, center);
      if (best == nullptr || d < best_d || (d == best_d && p.id < best->id)) {
        best = &p;
        best_d = d;
      }
    }
    if (best == nullptr) continue;
    taken.insert(best->id);
    chosen.push_back(best->id);
  }
  return chosen;
}

}  // namespace stepal
