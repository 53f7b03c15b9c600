#include <benchmark/benchmark.h>

#include <random>

#include "stepal/learner.hpp"
#include "stepal/step_repr.hpp"
#include "stepal/strategies.hpp"
#include "stepal/synthgen.hpp"
#include "stepal/wkmeans.hpp"

namespace {

using namespace stepal;

// Default pool with a few labeled videos and a trained model's predictions.
DatasetPool inferred_pool() {
  DatasetPool pool = generate(benchmark_suite("default"));
  const auto ids = partition(pool).unlabeled;
  pool.mark_labeled(std::vector<std::string>(ids.begin(), ids.begin() + 12));
  infer_in_place(train(pool, TrainConfig{}).model, pool);
  return pool;
}

void BM_WeightedKMeans(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(1);
  std::normal_distribution<double> nd;
  std::vector<WeightedPoint> pts;
  for (std::size_t i = 0; i < n; ++i) {
    WeightedPoint p{std::to_string(i), std::vector<double>(256), 0.5 + (i % 7) * 0.1};
    for (auto& x : p.vector) x = nd(rng);
    pts.push_back(std::move(p));
  }
  KMeansOptions opts;
  opts.k = 12;
  for (auto _ : state) benchmark::DoNotOptimize(weighted_kmeans(pts, opts));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_WeightedKMeans)->Arg(60)->Arg(240)->Unit(benchmark::kMillisecond);

void BM_BuildRepr(benchmark::State& state) {
  const DatasetPool pool = inferred_pool();
  const PoolView view(pool);
  const auto ids = partition(pool).unlabeled;
  for (auto _ : state) {
    for (const auto& id : ids) benchmark::DoNotOptimize(build_repr(view.video(id), pool.step_count()));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(ids.size()));
}
BENCHMARK(BM_BuildRepr)->Unit(benchmark::kMillisecond);

void BM_Train(benchmark::State& state) {
  DatasetPool pool = generate(benchmark_suite("default"));
  const auto ids = partition(pool).unlabeled;
  pool.mark_labeled(std::vector<std::string>(ids.begin(), ids.begin() + state.range(0)));
  TrainConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(train(pool, cfg));
}
BENCHMARK(BM_Train)->Arg(6)->Arg(30)->Unit(benchmark::kMillisecond);

void BM_Select(benchmark::State& state, const char* name) {
  const DatasetPool pool = inferred_pool();
  const StrategyHandle strategy = strategy_registry(name);
  SelectionRequest req{pool};
  req.budget = 12;
  for (auto _ : state) benchmark::DoNotOptimize(strategy(req));
}
BENCHMARK_CAPTURE(BM_Select, stepal, "stepal")->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Select, ewc, "ewc")->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Select, coreset, "coreset")->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Select, entropy, "entropy")->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
