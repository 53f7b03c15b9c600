#include <fmt/format.h>

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stepal/config.hpp"
#include "stepal/experiment.hpp"
#include "stepal/manifest.hpp"
#include "stepal/report.hpp"
#include "stepal/strategies.hpp"
#include "stepal/synthgen.hpp"

namespace {

using namespace stepal;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

// Command-line values override the config file only when given.
struct Overrides {
  std::optional<std::string> config_path;
  std::optional<std::string> benchmark;
  std::optional<std::size_t> n_videos, steps, feature_dim, segment_min, segment_max, style_groups, style_steps;
  std::optional<double> noise_sigma, prototype_scale, style_sigma;
  std::vector<double> skip_prob;
  std::optional<std::uint64_t> gen_seed;

  std::optional<std::string> manifest;
  std::optional<std::string> strategy;
  std::vector<std::string> strategies;
  std::optional<double> initial_label_frac, budget_frac, eps, tol;
  std::optional<std::size_t> cycles, restarts, max_iter, workers;
  std::vector<std::uint64_t> seeds;
  std::optional<std::string> output_dir;

  std::optional<double> learning_rate, l2;
  std::optional<std::size_t> epochs, batch_size;
  std::optional<std::uint64_t> train_seed;
};

void add_gen_flags(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--benchmark", o.benchmark, "Generator preset")->group("Data");
  cmd->add_option("--n-videos", o.n_videos)->group("Data");
  cmd->add_option("--steps", o.steps, "Step count C")->group("Data");
  cmd->add_option("--feature-dim", o.feature_dim, "Feature dimension D")->group("Data");
  cmd->add_option("--segment-min", o.segment_min)->group("Data");
  cmd->add_option("--segment-max", o.segment_max)->group("Data");
  cmd->add_option("--noise-sigma", o.noise_sigma)->group("Data");
  cmd->add_option("--prototype-scale", o.prototype_scale)->group("Data");
  cmd->add_option("--style-groups", o.style_groups)->group("Data");
  cmd->add_option("--style-sigma", o.style_sigma)->group("Data");
  cmd->add_option("--style-steps", o.style_steps)->group("Data");
  cmd->add_option("--skip-prob", o.skip_prob, "One value, or one per step")->group("Data");
  cmd->add_option("--gen-seed", o.gen_seed, "Base generator seed")->group("Data");
}

void add_experiment_flags(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config_path, "JSON config file; flags override it")->check(CLI::ExistingFile);
  add_gen_flags(cmd, o);
  cmd->add_option("--manifest", o.manifest, "Read videos from a manifest instead of generating")->group("Data");
  cmd->add_option("--initial-label-frac", o.initial_label_frac)->group("Schedule");
  cmd->add_option("--budget-frac", o.budget_frac)->group("Schedule");
  cmd->add_option("--cycles", o.cycles)->group("Schedule");
  cmd->add_option("--seeds", o.seeds, "Run seeds")->group("Schedule");
  cmd->add_option("--eps", o.eps)->group("Selection");
  cmd->add_option("--restarts", o.restarts)->group("Selection");
  cmd->add_option("--max-iter", o.max_iter)->group("Selection");
  cmd->add_option("--tol", o.tol)->group("Selection");
  cmd->add_option("--lr", o.learning_rate)->group("Training");
  cmd->add_option("--epochs", o.epochs)->group("Training");
  cmd->add_option("--batch-size", o.batch_size)->group("Training");
  cmd->add_option("--l2", o.l2)->group("Training");
  cmd->add_option("--train-seed", o.train_seed)->group("Training");
  cmd->add_option("--output-dir", o.output_dir);
  cmd->add_option("--workers", o.workers, "Parallel seed workers");
}

template <typename T>
void set_if(const std::optional<T>& value, T& target) {
  if (value) target = *value;
}

void apply_gen(const Overrides& o, GenConfig& gen) {
  if (o.benchmark) {
    const std::uint64_t seed = gen.seed;
    gen = benchmark_suite(*o.benchmark);
    gen.seed = seed;
  }
  set_if(o.n_videos, gen.n_videos);
  set_if(o.steps, gen.steps);
  set_if(o.feature_dim, gen.feature_dim);
  set_if(o.segment_min, gen.segment_min);
  set_if(o.segment_max, gen.segment_max);
  set_if(o.noise_sigma, gen.noise_sigma);
  set_if(o.prototype_scale, gen.prototype_scale);
  set_if(o.style_groups, gen.style_groups);
  set_if(o.style_sigma, gen.style_sigma);
  set_if(o.style_steps, gen.style_steps);
  set_if(o.gen_seed, gen.seed);
  if (!o.skip_prob.empty()) gen.skip_prob = o.skip_prob;
}

LoadedConfig resolve(const Overrides& o) {
  LoadedConfig loaded;
  if (o.config_path) loaded = load_config(*o.config_path);
  ExperimentConfig& cfg = loaded.experiment;
  apply_gen(o, cfg.gen);
  if (o.manifest) cfg.manifest = *o.manifest;
  set_if(o.strategy, cfg.strategy);
  if (!o.strategies.empty()) loaded.strategies = o.strategies;
  set_if(o.initial_label_frac, cfg.initial_label_frac);
  set_if(o.budget_frac, cfg.budget_frac);
  set_if(o.cycles, cfg.cycles);
  if (!o.seeds.empty()) cfg.seeds = o.seeds;
  if (o.eps) cfg.eps = Epsilon(*o.eps);
  set_if(o.restarts, cfg.restarts);
  set_if(o.max_iter, cfg.max_iter);
  set_if(o.tol, cfg.tol);
  set_if(o.workers, cfg.workers);
  if (o.output_dir) cfg.output_dir = *o.output_dir;
  set_if(o.learning_rate, cfg.train.learning_rate);
  set_if(o.epochs, cfg.train.epochs);
  set_if(o.batch_size, cfg.train.batch_size);
  set_if(o.l2, cfg.train.l2);
  set_if(o.train_seed, cfg.train.seed);
  cfg.validate();
  return loaded;
}

int report_failures(const ExperimentResult& result) {
  for (const auto& f : result.failures) {
    fmt::print(stderr, "seed {} strategy {} cycle {}: {}\n", f.seed, f.strategy, f.cycle, f.message);
  }
  return result.failures.empty() ? kExitOk : kExitRuntime;
}

int finish(const ExperimentConfig& cfg, const ExperimentResult& result) {
  const auto written = write_outputs(cfg, result, cfg.output_dir);
  const auto summary = summarize(result);
  fmt::print("{}", format_table(summary));
  for (const auto& path : written) fmt::print("wrote {}\n", path.string());
  return report_failures(result);
}

int cmd_generate(const Overrides& o, const std::string& out) {
  GenConfig gen;
  if (o.config_path) gen = load_config(*o.config_path).experiment.gen;
  apply_gen(o, gen);
  const DatasetPool pool = generate(gen);
  write_manifest(pool, out);
  std::size_t clips = 0;
  for (const auto& [id, v] : pool.videos()) clips += v.clips.size();
  fmt::print("wrote {}: {} videos, {} clips, C={}, D={}\n", out, pool.size(), clips, pool.step_count(),
             pool.feature_dim());
  return kExitOk;
}

int cmd_inspect(const std::string& path) {
  const DatasetPool pool = read_manifest(path);
  std::size_t clips = 0;
  std::size_t labeled_clips = 0;
  std::size_t logit_clips = 0;
  std::size_t min_t = SIZE_MAX;
  std::size_t max_t = 0;
  std::map<std::uint32_t, std::size_t> per_step;
  for (const auto& [id, v] : pool.videos()) {
    clips += v.clips.size();
    min_t = std::min(min_t, v.clips.size());
    max_t = std::max(max_t, v.clips.size());
    for (const auto& c : v.clips) {
      if (c.true_step) {
        ++labeled_clips;
        ++per_step[c.true_step->value];
      }
      if (c.logits) ++logit_clips;
    }
  }
  fmt::print("manifest   {}\nversion    {}\nsteps (C)  {}\nfeature D  {}\nvideos     {} ({} labeled, {} unlabeled)\n", path,
             kManifestVersion, pool.step_count(), pool.feature_dim(), pool.size(), pool.count(PoolState::Labeled),
             pool.count(PoolState::Unlabeled));
  if (pool.size() > 0) fmt::print("clips      {} (per video {}..{})\n", clips, min_t, max_t);
  fmt::print("with label {}\nwith logits {}\n", labeled_clips, logit_clips);
  for (const auto& [step, n] : per_step) fmt::print("  step {:>3}: {} clips\n", step, n);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Step-aware active learning experiments on clip-feature video pools"};
  app.require_subcommand(1);
  Overrides o;

  auto* gen_cmd = app.add_subcommand("generate", "Generate a synthetic pool and write it as a manifest");
  std::string gen_out;
  gen_cmd->add_option("--config", o.config_path, "JSON config file; only its gen/benchmark part is used")
      ->check(CLI::ExistingFile);
  add_gen_flags(gen_cmd, o);
  gen_cmd->add_option("-o,--out", gen_out, "Output manifest path")->required();

  auto* run_cmd = app.add_subcommand("run", "Run one strategy over all seeds and cycles");
  add_experiment_flags(run_cmd, o);
  run_cmd->add_option("--strategy", o.strategy, "Acquisition strategy")->group("Selection");

  auto* cmp_cmd = app.add_subcommand("compare", "Paired comparison of several strategies");
  add_experiment_flags(cmp_cmd, o);
  cmp_cmd->add_option("--strategies", o.strategies, "Strategies to compare")->delimiter(',')->group("Selection");

  auto* inspect_cmd = app.add_subcommand("inspect-manifest", "Print the header and contents summary of a manifest");
  std::string inspect_path;
  inspect_cmd->add_option("path", inspect_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*gen_cmd) return cmd_generate(o, gen_out);
    if (*inspect_cmd) return cmd_inspect(inspect_path);
    const LoadedConfig loaded = resolve(o);
    if (*run_cmd) return finish(loaded.experiment, run_experiment(loaded.experiment));
    std::vector<std::string> strategies = loaded.strategies;
    if (strategies.empty()) {
      for (auto name : strategy_names()) strategies.emplace_back(name);
    }
    return finish(loaded.experiment, compare_strategies(loaded.experiment, strategies));
  } catch (const Error& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    switch (e.code()) {
      case ErrorCode::InvalidConfig:
      case ErrorCode::UnknownPreset:
      case ErrorCode::UnknownStrategy:
        return kExitConfig;
      default:
        return kExitRuntime;
    }
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitRuntime;
  }
}
