#include "stepal/experiment.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <map>
#include <mutex>
#include <random>
#include <thread>

#include "stepal/manifest.hpp"
#include "stepal/seed.hpp"
#include "stepal/strategies.hpp"

namespace stepal {

namespace {

constexpr std::array<std::string_view, 4> kMetrics = {"accuracy", "macro_precision", "macro_recall", "macro_jaccard"};

// Runs fn(i) for i in [0, n) on up to `workers` threads. Results must be written by index.
template <typename Fn>
void parallel_for(std::size_t n, std::size_t workers, Fn&& fn) {
  workers = std::max<std::size_t>(1, std::min(workers, n));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
  }
}

TrainConfig cycle_train_config(const ExperimentConfig& cfg, std::uint64_t seed, std::size_t cycle) {
  TrainConfig t = cfg.train;
  t.seed = derive_seed(cfg.train.seed, {seed, cycle});
  return t;
}

struct SeedState {
  std::optional<SeedSetup> setup;
  std::optional<LinearModel> initial_model;
  std::optional<MetricReport> initial_metrics;
  std::vector<std::string> initial_warnings;
  std::optional<RunFailure> failure;
};

struct Task {
  std::vector<CycleReport> reports;
  std::optional<RunFailure> failure;
};

Task run_strategy(const ExperimentConfig& cfg, const SeedState& state, const std::string& strategy_name) {
  Task task;
  const SeedSetup& setup = *state.setup;
  std::size_t cycle = 0;
  try {
    const StrategyHandle strategy = strategy_registry(strategy_name);
    DatasetPool pool = setup.splits.train;
    pool.mark_labeled(setup.initial_labeled);

    for (cycle = 0; cycle <= cfg.cycles; ++cycle) {
      const auto start = std::chrono::steady_clock::now();
      CycleReport report;
      report.seed = setup.seed;
      report.strategy = std::string(strategy.name);
      report.cycle = cycle;
      report.labeled_count = pool.count(PoolState::Labeled);

      std::optional<LinearModel> trained;
      if (cycle == 0) {
        report.test = *state.initial_metrics;
        report.warnings = state.initial_warnings;
      } else {
        TrainResult tr = train(pool, cycle_train_config(cfg, setup.seed, cycle));
        report.warnings = tr.warnings;
        report.test = evaluate(setup.splits.test, tr.model);
        trained = std::move(tr.model);
      }

      if (cycle < cfg.cycles) {
        if (pool.count(PoolState::Unlabeled) == 0) {
          report.warnings.emplace_back("unlabeled pool exhausted; selection skipped");
        } else {
          infer_in_place(trained ? *trained : *state.initial_model, pool);
          SelectionRequest req{pool, setup.budget, derive_seed(setup.seed, {cycle, 0x5e1ec7}), cfg.eps,
                               cfg.restarts, cfg.max_iter, cfg.tol};
          SelectionResult sel = strategy(req);
          report.warnings.insert(report.warnings.end(), sel.warnings.begin(), sel.warnings.end());
          pool.mark_labeled(sel.chosen);
          report.chosen = std::move(sel.chosen);
        }
      }
      report.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      task.reports.push_back(std::move(report));
    }
  } catch (const Error& e) {
    task.failure = RunFailure{setup.seed, strategy_name, cycle, e.code(), e.what()};
  } catch (const std::exception& e) {
    task.failure = RunFailure{setup.seed, strategy_name, cycle, ErrorCode::InvalidConfig, e.what()};
  }
  return task;
}

}  // namespace

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::InvalidConfig, msg); };
  if (!manifest) gen.validate();
  if (!(initial_label_frac > 0.0 && initial_label_frac <= 1.0)) fail("initial_label_frac must lie in (0,1]");
  if (!(budget_frac > 0.0 && budget_frac <= 1.0)) fail("budget_frac must lie in (0,1]");
  if (initial_label_frac + static_cast<double>(cycles) * budget_frac > 1.0 + 1e-12) {
    fail("initial_label_frac + cycles * budget_frac must not exceed 1");
  }
  if (seeds.empty()) fail("at least one seed is required");
  if (restarts == 0) fail("restarts must be >= 1");
  if (workers == 0) fail("workers must be >= 1");
  train.validate();
  (void)strategy_registry(strategy);
}

std::size_t fraction_count(double frac, std::size_t n) {
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(frac * static_cast<double>(n))));
}

SeedSetup prepare_seed(const ExperimentConfig& cfg, std::uint64_t seed) {
  DatasetPool all = [&] {
    if (cfg.manifest) return read_manifest(*cfg.manifest);
    GenConfig gen = cfg.gen;
    gen.seed = derive_seed(cfg.gen.seed, {seed});
    return generate(gen);
  }();
  // Imported pools may carry states and predictions; every run starts unlabeled and uninferred.
  DatasetPool fresh(all.step_count(), all.feature_dim());
  for (const auto& [id, video] : all.videos()) {
    VideoRecord copy = video;
    copy.state = PoolState::Unlabeled;
    for (auto& clip : copy.clips) {
      clip.logits.reset();
      clip.pseudo_step.reset();
    }
    fresh.add(std::move(copy));
  }

  SeedSetup setup{seed, split_pool(fresh, seed), {}, 0};
  const std::size_t n_train = setup.splits.train.size();
  std::vector<std::string> ids = partition(setup.splits.train).unlabeled;
  std::mt19937_64 rng(derive_seed(seed, {3}));
  std::shuffle(ids.begin(), ids.end(), rng);
  ids.resize(std::min(fraction_count(cfg.initial_label_frac, n_train), ids.size()));
  std::sort(ids.begin(), ids.end());
  setup.initial_labeled = std::move(ids);
  setup.budget = fraction_count(cfg.budget_frac, n_train);
  return setup;
}

ExperimentResult compare_strategies(const ExperimentConfig& cfg, std::span<const std::string> strategies) {
  if (strategies.empty()) throw Error(ErrorCode::InvalidConfig, "no strategies given");
  cfg.validate();
  for (const auto& s : strategies) (void)strategy_registry(s);

  const std::size_t n_seeds = cfg.seeds.size();
  std::vector<SeedState> states(n_seeds);
  parallel_for(n_seeds, cfg.workers, [&](std::size_t i) {
    SeedState& st = states[i];
    const std::uint64_t seed = cfg.seeds[i];
    try {
      st.setup = prepare_seed(cfg, seed);
      DatasetPool pool = st.setup->splits.train;
      pool.mark_labeled(st.setup->initial_labeled);
      TrainResult tr = train(pool, cycle_train_config(cfg, seed, 0));
      st.initial_metrics = evaluate(st.setup->splits.test, tr.model);
      st.initial_warnings = std::move(tr.warnings);
      st.initial_model = std::move(tr.model);
    } catch (const Error& e) {
      st.failure = RunFailure{seed, "", 0, e.code(), e.what()};
    }
  });

  const std::size_t n_tasks = n_seeds * strategies.size();
  std::vector<Task> tasks(n_tasks);
  parallel_for(n_tasks, cfg.workers, [&](std::size_t t) {
    const std::size_t s = t / n_seeds;
    const std::size_t i = t % n_seeds;
    if (states[i].failure) {
      RunFailure f = *states[i].failure;
      f.strategy = strategies[s];
      tasks[t].failure = std::move(f);
      return;
    }
    tasks[t] = run_strategy(cfg, states[i], strategies[s]);
  });

  ExperimentResult out;
  for (auto& task : tasks) {
    for (auto& r : task.reports) out.reports.push_back(std::move(r));
    if (task.failure) out.failures.push_back(std::move(*task.failure));
  }
  return out;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  const std::string strategy = cfg.strategy;
  return compare_strategies(cfg, std::span<const std::string>(&strategy, 1));
}

std::span<const std::string_view> metric_names() noexcept { return kMetrics; }

double metric_value(const MetricReport& report, std::string_view metric) {
  if (metric == "accuracy") return report.accuracy;
  if (metric == "macro_precision") return report.macro_precision;
  if (metric == "macro_recall") return report.macro_recall;
  if (metric == "macro_jaccard") return report.macro_jaccard;
  throw Error(ErrorCode::InvalidConfig, "unknown metric '" + std::string(metric) + "'");
}

std::vector<SummaryRow> summarize(const ExperimentResult& result) {
  // Keep first-appearance order of strategies; cycles and metrics ascending/in output order.
  std::vector<std::string> order;
  std::map<std::pair<std::string, std::size_t>, std::vector<const CycleReport*>> groups;
  for (const auto& r : result.reports) {
    if (std::find(order.begin(), order.end(), r.strategy) == order.end()) order.push_back(r.strategy);
    groups[{r.strategy, r.cycle}].push_back(&r);
  }
  std::vector<SummaryRow> rows;
  for (const auto& strategy : order) {
    for (const auto& [key, members] : groups) {
      if (key.first != strategy) continue;
      for (auto metric : kMetrics) {
        SummaryRow row{strategy, key.second, std::string(metric), 0.0, 0.0, members.size()};
        for (const auto* r : members) row.mean += metric_value(r->test, metric);
        row.mean /= static_cast<double>(row.n);
        if (row.n > 1) {
          double ss = 0.0;
          for (const auto* r : members) {
            const double d = metric_value(r->test, metric) - row.mean;
            ss += d * d;
          }
          row.stddev = std::sqrt(ss / static_cast<double>(row.n - 1));
        }
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

}  // namespace stepal
