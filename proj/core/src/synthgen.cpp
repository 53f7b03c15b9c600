#include "stepal/synthgen.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "stepal/error.hpp"
#include "stepal/seed.hpp"

namespace stepal {

namespace {

constexpr std::array<std::string_view, 3> kPresets = {"default", "easy", "tiny"};

std::string video_name(std::size_t index, std::size_t total) {
  std::string digits = std::to_string(index);
  const std::size_t width = std::max<std::size_t>(3, std::to_string(total > 0 ? total - 1 : 0).size());
  if (digits.size() < width) digits.insert(0, width - digits.size(), '0');
  return "v" + digits;
}

}  // namespace

void GenConfig::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::InvalidConfig, msg); };
  if (n_videos == 0) fail("n_videos must be >= 1");
  if (steps < 2) fail("steps must be >= 2");
  if (feature_dim < 1) fail("feature_dim must be >= 1");
  if (segment_min < 1 || segment_max < segment_min) fail("segment range must satisfy 1 <= min <= max");
  if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) fail("noise_sigma must be >= 0");
  if (!(prototype_scale > 0.0) || !std::isfinite(prototype_scale)) fail("prototype_scale must be > 0");
  if (!(style_sigma >= 0.0) || !std::isfinite(style_sigma)) fail("style_sigma must be >= 0");
  if (style_steps > steps) fail("style_steps must be <= steps");
  if (skip_prob.size() != 1 && skip_prob.size() != steps) fail("skip_prob needs 1 or C entries");
  for (double p : skip_prob) {
    if (!(p >= 0.0 && p < 1.0)) fail("skip_prob entries must lie in [0,1)");
  }
  if (!canonical_order.empty()) {
    if (canonical_order.size() != steps) fail("canonical_order must list every step once");
    std::vector<bool> seen(steps, false);
    for (StepId s : canonical_order) {
      if (s.value >= steps || seen[s.value]) fail("canonical_order must be a permutation of 0..C-1");
      seen[s.value] = true;
    }
  }
  for (const auto& pair : confusable_pairs) {
    if (pair.first.value >= steps || pair.second.value >= steps || pair.first == pair.second) {
      fail("confusable pair must name two distinct steps");
    }
    if (!(pair.mix >= 0.0 && pair.mix < 0.5)) fail("confusable mix must lie in [0, 0.5)");
  }
}

double GenConfig::skip_probability(std::size_t step) const {
  return skip_prob.size() == 1 ? skip_prob.front() : skip_prob.at(step);
}

std::vector<StepId> GenConfig::order() const {
  if (!canonical_order.empty()) return canonical_order;
  std::vector<StepId> out(steps);
  for (std::size_t c = 0; c < steps; ++c) out[c] = StepId{static_cast<std::uint32_t>(c)};
  return out;
}

StepPrototypeBank make_prototypes(const GenConfig& cfg) {
  cfg.validate();
  std::mt19937_64 rng(derive_seed(cfg.seed, {0}));
  std::normal_distribution<double> normal(0.0, 1.0);
  const std::size_t C = cfg.steps;
  const std::size_t D = cfg.feature_dim;

  StepPrototypeBank bank;
  bank.prototypes.reserve(C);
  for (std::size_t c = 0; c < C; ++c) {
    std::vector<double> v(D);
    for (;;) {
      for (double& x : v) x = normal(rng);
      if (D >= C) {
        for (const auto& prev : bank.prototypes) {
          double dot = 0.0;
          for (std::size_t d = 0; d < D; ++d) dot += v[d] * prev[d];
          for (std::size_t d = 0; d < D; ++d) v[d] -= dot * prev[d];
        }
      }
      double norm = 0.0;
      for (double x : v) norm += x * x;
      norm = std::sqrt(norm);
      if (norm > 1e-6) {
        for (double& x : v) x /= norm;
        break;
      }
    }
    bank.prototypes.push_back(std::move(v));
  }
  for (auto& p : bank.prototypes) {
    for (double& x : p) x *= cfg.prototype_scale;
  }

  bank.min_distance = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < C; ++a) {
    for (std::size_t b = a + 1; b < C; ++b) {
      double sq = 0.0;
      for (std::size_t d = 0; d < D; ++d) {
        const double diff = bank.prototypes[a][d] - bank.prototypes[b][d];
        sq += diff * diff;
      }
      bank.min_distance = std::min(bank.min_distance, std::sqrt(sq));
    }
  }
  bank.separable = bank.min_distance > 4.0 * cfg.noise_sigma / std::sqrt(static_cast<double>(D));
  return bank;
}

DatasetPool generate(const GenConfig& cfg) {
  cfg.validate();
  const StepPrototypeBank bank = make_prototypes(cfg);
  const std::size_t D = cfg.feature_dim;
  const auto order = cfg.order();

  // Class means: own prototype plus the mixed-in partner prototypes.
  std::vector<std::vector<double>> means = bank.prototypes;
  for (const auto& pair : cfg.confusable_pairs) {
    for (std::size_t d = 0; d < D; ++d) {
      means[pair.first.value][d] += pair.mix * bank.prototypes[pair.second.value][d];
      means[pair.second.value][d] += pair.mix * bank.prototypes[pair.first.value][d];
    }
  }

  // style_offsets[g][c] is added to the mean of step c in videos of style g.
  std::vector<std::vector<std::vector<double>>> style_offsets(cfg.style_groups);
  for (std::size_t g = 0; g < cfg.style_groups; ++g) {
    std::mt19937_64 rng(derive_seed(cfg.seed, {4, g}));
    std::normal_distribution<double> noise(0.0, 1.0);
    style_offsets[g].assign(cfg.steps, std::vector<double>(D));
    std::vector<std::size_t> affected(cfg.steps);
    std::iota(affected.begin(), affected.end(), std::size_t{0});
    if (cfg.style_steps > 0 && cfg.style_steps < cfg.steps) {
      std::shuffle(affected.begin(), affected.end(), rng);
      affected.resize(cfg.style_steps);
    }
    for (std::size_t c : affected) {
      for (double& x : style_offsets[g][c]) x = cfg.style_sigma * noise(rng);
    }
  }

  DatasetPool pool(cfg.steps, D);
  for (std::size_t v = 0; v < cfg.n_videos; ++v) {
    std::mt19937_64 rng(derive_seed(cfg.seed, {1, v}));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<std::size_t> seg_len(cfg.segment_min, cfg.segment_max);
    std::normal_distribution<double> noise(0.0, 1.0);

    const std::size_t style =
        cfg.style_groups > 0 ? std::uniform_int_distribution<std::size_t>(0, cfg.style_groups - 1)(rng) : 0;
    std::vector<StepId> present;
    while (present.empty()) {
      for (StepId s : order) {
        if (unit(rng) >= cfg.skip_probability(s.value)) present.push_back(s);
      }
    }

    VideoRecord video{video_name(v, cfg.n_videos), {}, PoolState::Unlabeled};
    for (StepId s : present) {
      std::vector<double> center = means[s.value];
      if (cfg.style_groups > 0) {
        for (std::size_t d = 0; d < D; ++d) center[d] += style_offsets[style][s.value][d];
      }
      const std::size_t len = seg_len(rng);
      for (std::size_t i = 0; i < len; ++i) {
        ClipRecord clip;
        clip.clip_index = video.clips.size();
        clip.features = center;
        if (cfg.noise_sigma > 0.0) {
          for (double& x : clip.features) x += cfg.noise_sigma * noise(rng);
        }
        clip.true_step = s;
        video.clips.push_back(std::move(clip));
      }
    }
    pool.add(std::move(video));
  }
  return pool;
}

GenConfig benchmark_suite(std::string_view name) {
  GenConfig cfg;
  if (name == "default") {
    cfg.confusable_pairs = {{StepId{1}, StepId{2}, 0.3}, {StepId{5}, StepId{6}, 0.3}};
    cfg.style_groups = 10;
    cfg.style_sigma = 1.2;
    cfg.style_steps = 2;
    return cfg;
  }
  if (name == "easy") {
    cfg.noise_sigma = 0.2;
    return cfg;
  }
  if (name == "tiny") {
    cfg.n_videos = 20;
    cfg.steps = 4;
    cfg.feature_dim = 8;
    cfg.segment_min = 2;
    cfg.segment_max = 4;
    cfg.noise_sigma = 0.3;
    cfg.confusable_pairs = {{StepId{0}, StepId{1}, 0.2}};
    return cfg;
  }
  std::string valid;
  for (auto p : kPresets) valid += (valid.empty() ? "" : ", ") + std::string(p);
  throw Error(ErrorCode::UnknownPreset, "unknown benchmark '" + std::string(name) + "'; valid presets: " + valid);
}

std::span<const std::string_view> benchmark_names() noexcept { return kPresets; }

SplitPools split_pool(const DatasetPool& pool, std::uint64_t seed) {
  std::vector<std::string> ids;
  ids.reserve(pool.size());
  for (const auto& [id, video] : pool.videos()) ids.push_back(id);
  std::mt19937_64 rng(derive_seed(seed, {2}));
  std::shuffle(ids.begin(), ids.end(), rng);

  const auto n = static_cast<double>(ids.size());
  auto n_train = static_cast<std::size_t>(std::llround(0.5 * n));
  auto n_val = static_cast<std::size_t>(std::llround(0.1 * n));
  if (ids.size() >= 2 && n_train + n_val >= ids.size()) {
    n_val = 0;
    n_train = std::min(n_train, ids.size() - 1);
  }
  if (n_train == 0 || n_train >= ids.size()) {
    throw Error(ErrorCode::InvalidConfig, "pool too small to split into train and test videos");
  }
  const auto begin = ids.begin();
  std::vector<std::string> train(begin, begin + static_cast<std::ptrdiff_t>(n_train));
  std::vector<std::string> val(begin + static_cast<std::ptrdiff_t>(n_train),
                               begin + static_cast<std::ptrdiff_t>(n_train + n_val));
  std::vector<std::string> test(begin + static_cast<std::ptrdiff_t>(n_train + n_val), ids.end());
  return SplitPools{subset(pool, train), subset(pool, val), subset(pool, test)};
}

}  // namespace stepal
