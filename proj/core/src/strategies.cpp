#include "stepal/strategies.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <set>

#include "stepal/error.hpp"
#include "stepal/step_repr.hpp"
#include "stepal/wkmeans.hpp"

namespace stepal {

namespace {

constexpr std::array<std::string_view, 9> kNames = {"random", "margin",  "entropy", "coreset",          "kmeans",
                                                    "me-kmeans", "ewc", "stepal", "mean-prob-entropy"};

constexpr std::string_view kMeanRule =
    "video score = mean over clips (entropy/margin); video vector = mean clip feature (coreset/kmeans)";

struct Candidates {
  std::vector<std::string> ids;  // ascending
  std::size_t budget = 0;
};

// Unlabeled ids that are eligible, with the budget clamped to their number.
Candidates candidates(const SelectionRequest& req, SelectionResult& result, bool need_logits) {
  if (req.budget == 0) throw Error(ErrorCode::InvalidConfig, "budget must be >= 1");
  const Partition part = req.pool.partition();
  if (part.unlabeled.empty()) throw Error(ErrorCode::EmptyPool, "no unlabeled videos to select from");

  Candidates out;
  if (need_logits) {
    std::size_t skipped = 0;
    for (const auto& id : part.unlabeled) {
      if (req.pool.video(id).has_all_logits()) {
        out.ids.push_back(id);
      } else {
        ++skipped;
      }
    }
    if (out.ids.empty()) throw Error(ErrorCode::MissingLogits, "no unlabeled video carries logits");
    if (skipped > 0) {
      result.warnings.push_back(std::to_string(skipped) + " unlabeled videos lack logits and were excluded");
    }
  } else {
    out.ids = part.unlabeled;
  }
  out.budget = req.budget;
  if (out.budget > out.ids.size()) {
    result.warnings.push_back("budget " + std::to_string(req.budget) + " clamped to " +
                              std::to_string(out.ids.size()) + " available videos");
    out.budget = out.ids.size();
  }
  return out;
}

// Top `budget` ids by score; `descending` picks the largest. Ties keep ascending id order.
std::vector<std::string> top_by_score(const std::vector<std::string>& ids, const std::vector<double>& scores,
                                      std::size_t budget, bool descending) {
  std::vector<std::size_t> order(ids.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return descending ? scores[a] > scores[b] : scores[a] < scores[b];
  });
  std::vector<std::string> chosen;
  for (std::size_t i = 0; i < budget; ++i) chosen.push_back(ids[order[i]]);
  return chosen;
}

std::vector<double> entropies(const SelectionRequest& req, const std::vector<std::string>& ids) {
  std::vector<double> out;
  out.reserve(ids.size());
  for (const auto& id : ids) out.push_back(video_entropy(req.pool.video(id), req.eps));
  return out;
}

KMeansOptions kmeans_options(const SelectionRequest& req, std::size_t k) {
  return KMeansOptions{k, req.seed, req.restarts, req.max_iter, req.tol};
}

// Clamping k to the number of distinct vectors can leave fewer picks than the
// budget; remaining slots go to the unchosen points closest to their own center.
void top_up(std::vector<std::string>& chosen, const ClusterModel& model, const std::vector<WeightedPoint>& points,
            std::size_t budget) {
  if (chosen.size() >= budget) return;
  std::set<std::string> taken(chosen.begin(), chosen.end());
  std::vector<std::pair<double, std::string>> rest;
  for (const auto& p : points) {
    if (taken.contains(p.id)) continue;
    rest.emplace_back(squared_distance(p.vector, model.centers[model.assignment.at(p.id)]), p.id);
  }
  std::sort(rest.begin(), rest.end());
  for (std::size_t i = 0; chosen.size() < budget && i < rest.size(); ++i) chosen.push_back(rest[i].second);
}

void fill_cluster_diagnostics(SelectionResult& result, const ClusterModel& model,
                              const std::vector<WeightedPoint>& points) {
  for (std::size_t i = 0; i < points.size(); ++i) {
    auto& d = result.diagnostics[i];
    const std::size_t c = model.assignment.at(points[i].id);
    d.cluster = c;
    d.distance = std::sqrt(squared_distance(points[i].vector, model.centers[c]));
  }
  result.cluster_objective = model.objective;
  for (const auto& w : model.warnings) result.warnings.push_back(w);
}

enum class Weighting { Uniform, Entropy };
enum class Pick { NearestCenter, MaxEntropy };

// KMeans on mean clip features: the KMeans, EWC and ME-KMeans ablations.
SelectionResult cluster_mean_features(const SelectionRequest& req, Weighting weighting, Pick pick) {
  SelectionResult result;
  result.aggregation = std::string(kMeanRule);
  const bool need_logits = weighting == Weighting::Entropy || pick == Pick::MaxEntropy;
  const Candidates cand = candidates(req, result, need_logits);

  std::vector<double> ent;
  if (need_logits) ent = entropies(req, cand.ids);

  std::vector<WeightedPoint> points;
  for (std::size_t i = 0; i < cand.ids.size(); ++i) {
    const double w = weighting == Weighting::Entropy ? std::max(ent[i], 0.0) : 1.0;
    points.push_back({cand.ids[i], global_average(req.pool.video(cand.ids[i])), w});
    VideoDiagnostics d{cand.ids[i], {}, {}, {}, {}, {}};
    if (need_logits) d.entropy = ent[i];
    result.diagnostics.push_back(std::move(d));
  }

  const ClusterModel model = weighted_kmeans(points, kmeans_options(req, cand.budget));
  fill_cluster_diagnostics(result, model, points);

  if (pick == Pick::NearestCenter) {
    const std::set<std::string> eligible(cand.ids.begin(), cand.ids.end());
    result.chosen = nearest_to_centers(model, points, eligible);
  } else {
    for (std::size_t c = 0; c < model.centers.size(); ++c) {
      std::optional<std::size_t> best;
      for (std::size_t i = 0; i < points.size(); ++i) {
        if (model.assignment.at(points[i].id) != c) continue;
        if (!best || ent[i] > ent[*best]) best = i;
      }
      if (best) result.chosen.push_back(points[*best].id);
    }
  }
  top_up(result.chosen, model, points, cand.budget);
  return result;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace

SelectionResult select_random(const SelectionRequest& req) {
  SelectionResult result;
  result.aggregation = "uniform draw without replacement";
  Candidates cand = candidates(req, result, false);
  std::mt19937_64 rng(req.seed);
  std::shuffle(cand.ids.begin(), cand.ids.end(), rng);
  result.chosen.assign(cand.ids.begin(), cand.ids.begin() + static_cast<std::ptrdiff_t>(cand.budget));
  return result;
}

SelectionResult select_entropy(const SelectionRequest& req) {
  SelectionResult result;
  result.aggregation = "video score = mean clip entropy";
  const Candidates cand = candidates(req, result, true);
  const auto ent = entropies(req, cand.ids);
  for (std::size_t i = 0; i < cand.ids.size(); ++i) result.diagnostics.push_back({cand.ids[i], ent[i], {}, {}, {}, {}});
  result.chosen = top_by_score(cand.ids, ent, cand.budget, true);
  return result;
}

SelectionResult select_mean_prob_entropy(const SelectionRequest& req) {
  SelectionResult result;
  result.aggregation = "video score = entropy of the mean clip distribution";
  const Candidates cand = candidates(req, result, true);
  std::vector<double> scores;
  for (const auto& id : cand.ids) {
    scores.push_back(mean_prob_entropy(req.pool.video(id), req.eps));
    result.diagnostics.push_back({id, scores.back(), {}, {}, {}, {}});
  }
  result.chosen = top_by_score(cand.ids, scores, cand.budget, true);
  return result;
}

SelectionResult select_margin(const SelectionRequest& req) {
  SelectionResult result;
  result.aggregation = std::string(kMeanRule);
  const Candidates cand = candidates(req, result, true);
  std::vector<double> scores;
  for (const auto& id : cand.ids) {
    scores.push_back(video_margin(req.pool.video(id)));
    result.diagnostics.push_back({id, {}, scores.back(), {}, {}, {}});
  }
  result.chosen = top_by_score(cand.ids, scores, cand.budget, false);
  return result;
}

SelectionResult select_coreset(const SelectionRequest& req) {
  SelectionResult result;
  result.aggregation = std::string(kMeanRule);
  const Candidates cand = candidates(req, result, false);
  const Partition part = req.pool.partition();

  std::vector<std::vector<double>> vectors;
  for (const auto& id : cand.ids) vectors.push_back(global_average(req.pool.video(id)));
  std::vector<double> nearest(cand.ids.size(), std::numeric_limits<double>::infinity());
  auto cover = [&](const std::vector<double>& v) {
    for (std::size_t i = 0; i < vectors.size(); ++i) nearest[i] = std::min(nearest[i], squared_distance(vectors[i], v));
  };
  for (const auto& id : part.labeled) cover(global_average(req.pool.video(id)));

  std::vector<bool> taken(cand.ids.size(), false);
  for (std::size_t round = 0; round < cand.budget; ++round) {
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < cand.ids.size(); ++i) {
      if (taken[i]) continue;
      if (!best || nearest[i] > nearest[*best]) best = i;
    }
    taken[*best] = true;
    result.chosen.push_back(cand.ids[*best]);
    cover(vectors[*best]);
  }
  for (std::size_t i = 0; i < cand.ids.size(); ++i) {
    VideoDiagnostics d{cand.ids[i], {}, {}, {}, {}, {}};
    if (std::isfinite(nearest[i])) d.distance = std::sqrt(nearest[i]);
    result.diagnostics.push_back(std::move(d));
  }
  return result;
}

SelectionResult select_kmeans(const SelectionRequest& req) {
  return cluster_mean_features(req, Weighting::Uniform, Pick::NearestCenter);
}

SelectionResult select_me_kmeans(const SelectionRequest& req) {
  return cluster_mean_features(req, Weighting::Uniform, Pick::MaxEntropy);
}

SelectionResult select_ewc(const SelectionRequest& req) {
  return cluster_mean_features(req, Weighting::Entropy, Pick::NearestCenter);
}

SelectionResult select_stepal(const SelectionRequest& req) {
  SelectionResult result;
  result.aggregation = "step-aware representation weighted by mean clip entropy";
  const Candidates cand = candidates(req, result, true);
  const std::size_t C = req.pool.step_count();

  std::vector<WeightedPoint> points;
  points.reserve(cand.ids.size());
  for (const auto& id : cand.ids) {
    const VideoView video = req.pool.video(id);
    StepAwareRepr z = build_repr(video, C, req.eps);
    const double e = video_entropy(video, req.eps);
    double sq = 0.0;
    for (double x : z.flattened()) sq += x * x;
    VideoDiagnostics d{id, e, {}, std::sqrt(sq), {}, {}};
    if (z.zero_blocks() > 0) {
      result.warnings.push_back("video '" + id + "' has " + std::to_string(z.zero_blocks()) + " zero prototype blocks");
    }
    result.diagnostics.push_back(std::move(d));
    points.push_back({id, z.flattened(), std::max(e, 0.0)});
  }

  const ClusterModel model = weighted_kmeans(points, kmeans_options(req, cand.budget));
  fill_cluster_diagnostics(result, model, points);
  const std::set<std::string> eligible(cand.ids.begin(), cand.ids.end());
  result.chosen = nearest_to_centers(model, points, eligible);
  top_up(result.chosen, model, points, cand.budget);
  return result;
}

StrategyHandle strategy_registry(std::string_view name) {
  static const std::map<std::string, StrategyFn, std::less<>> table = {
      {"random", &select_random},   {"margin", &select_margin},       {"entropy", &select_entropy},
      {"coreset", &select_coreset}, {"kmeans", &select_kmeans},       {"me-kmeans", &select_me_kmeans},
      {"ewc", &select_ewc},         {"stepal", &select_stepal},       {"mean-prob-entropy", &select_mean_prob_entropy},
  };
  const std::string key = lower(name);
  const auto it = table.find(key);
  if (it == table.end()) {
    std::string valid;
    for (auto n : kNames) valid += (valid.empty() ? "" : ", ") + std::string(n);
    throw Error(ErrorCode::UnknownStrategy, "unknown strategy '" + std::string(name) + "'; valid: " + valid);
  }
  const auto canonical = std::find(kNames.begin(), kNames.end(), key);
  return StrategyHandle{*canonical, it->second};
}

std::span<const std::string_view> strategy_names() noexcept { return kNames; }

}  // namespace stepal
