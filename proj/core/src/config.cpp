#include "stepal/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "stepal/error.hpp"

namespace stepal {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& allowed, std::string_view where) {
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.contains(key)) {
      throw Error(ErrorCode::InvalidConfig, "unknown key '" + key + "' in " + std::string(where));
    }
  }
}

template <typename T>
void read_if(const json& obj, const char* key, T& target) {
  if (obj.contains(key)) target = obj.at(key).get<T>();
}

void apply_gen(const json& g, GenConfig& gen) {
  reject_unknown(g,
                 {"n_videos", "steps", "feature_dim", "canonical_order", "skip_prob", "segment_min", "segment_max",
                  "noise_sigma", "confusable_pairs", "prototype_scale", "style_groups", "style_sigma", "style_steps", "seed"},
                 "gen");
  read_if(g, "n_videos", gen.n_videos);
  read_if(g, "steps", gen.steps);
  read_if(g, "feature_dim", gen.feature_dim);
  read_if(g, "segment_min", gen.segment_min);
  read_if(g, "segment_max", gen.segment_max);
  read_if(g, "noise_sigma", gen.noise_sigma);
  read_if(g, "prototype_scale", gen.prototype_scale);
  read_if(g, "style_groups", gen.style_groups);
  read_if(g, "style_sigma", gen.style_sigma);
  read_if(g, "style_steps", gen.style_steps);
  read_if(g, "seed", gen.seed);
  if (g.contains("skip_prob")) {
    const auto& s = g.at("skip_prob");
    gen.skip_prob = s.is_array() ? s.get<std::vector<double>>() : std::vector<double>{s.get<double>()};
  }
  if (g.contains("canonical_order")) {
    gen.canonical_order.clear();
    for (auto v : g.at("canonical_order").get<std::vector<std::uint32_t>>()) gen.canonical_order.push_back(StepId{v});
  }
  if (g.contains("confusable_pairs")) {
    gen.confusable_pairs.clear();
    for (const auto& p : g.at("confusable_pairs")) {
      if (!p.is_array() || p.size() != 3) throw Error(ErrorCode::InvalidConfig, "confusable pair must be [a, b, mix]");
      gen.confusable_pairs.push_back({StepId{p[0].get<std::uint32_t>()}, StepId{p[1].get<std::uint32_t>()}, p[2].get<double>()});
    }
  }
}

}  // namespace

LoadedConfig parse_config(std::string_view json_text) {
  LoadedConfig out;
  ExperimentConfig& cfg = out.experiment;
  try {
    const json root = json::parse(json_text);
    if (!root.is_object()) throw Error(ErrorCode::InvalidConfig, "config root must be an object");
    reject_unknown(root,
                   {"benchmark", "gen", "manifest", "strategy", "strategies", "initial_label_frac", "budget_frac",
                    "cycles", "train", "seeds", "eps", "restarts", "max_iter", "tol", "output_dir", "workers"},
                   "config");
    if (root.contains("benchmark")) cfg.gen = benchmark_suite(root.at("benchmark").get<std::string>());
    if (root.contains("gen")) apply_gen(root.at("gen"), cfg.gen);
    if (root.contains("manifest")) cfg.manifest = root.at("manifest").get<std::string>();
    read_if(root, "strategy", cfg.strategy);
    read_if(root, "strategies", out.strategies);
    read_if(root, "initial_label_frac", cfg.initial_label_frac);
    read_if(root, "budget_frac", cfg.budget_frac);
    read_if(root, "cycles", cfg.cycles);
    read_if(root, "seeds", cfg.seeds);
    read_if(root, "restarts", cfg.restarts);
    read_if(root, "max_iter", cfg.max_iter);
    read_if(root, "tol", cfg.tol);
    read_if(root, "workers", cfg.workers);
    if (root.contains("output_dir")) cfg.output_dir = root.at("output_dir").get<std::string>();
    if (root.contains("eps")) cfg.eps = Epsilon(root.at("eps").get<double>());
    if (root.contains("train")) {
      const auto& t = root.at("train");
      reject_unknown(t, {"learning_rate", "epochs", "batch_size", "l2", "seed"}, "train");
      read_if(t, "learning_rate", cfg.train.learning_rate);
      read_if(t, "epochs", cfg.train.epochs);
      read_if(t, "batch_size", cfg.train.batch_size);
      read_if(t, "l2", cfg.train.l2);
      read_if(t, "seed", cfg.train.seed);
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, std::string("malformed config: ") + e.what());
  }
  cfg.validate();
  return out;
}

LoadedConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidConfig, "cannot read config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string gen_config_json(const GenConfig& gen) {
  nlohmann::ordered_json j;
  j["n_videos"] = gen.n_videos;
  j["steps"] = gen.steps;
  j["feature_dim"] = gen.feature_dim;
  std::vector<std::uint32_t> order;
  for (auto s : gen.order()) order.push_back(s.value);
  j["canonical_order"] = order;
  j["skip_prob"] = gen.skip_prob;
  j["segment_min"] = gen.segment_min;
  j["segment_max"] = gen.segment_max;
  j["noise_sigma"] = gen.noise_sigma;
  auto pairs = nlohmann::ordered_json::array();
  for (const auto& p : gen.confusable_pairs) pairs.push_back({p.first.value, p.second.value, p.mix});
  j["confusable_pairs"] = pairs;
  j["prototype_scale"] = gen.prototype_scale;
  j["style_groups"] = gen.style_groups;
  j["style_sigma"] = gen.style_sigma;
  j["style_steps"] = gen.style_steps;
  j["seed"] = gen.seed;
  return j.dump();
}

}  // namespace stepal
