#include "stepal/report.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "stepal/config.hpp"

namespace stepal {

namespace {

constexpr std::array<std::string_view, 9> kPalette = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                                      "#8c564b", "#e377c2", "#7f7f7f", "#17becf"};

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
  return out;
}

std::vector<std::string> strategies_in_order(std::span<const SummaryRow> rows) {
  std::vector<std::string> out;
  for (const auto& r : rows) {
    if (std::find(out.begin(), out.end(), r.strategy) == out.end()) out.push_back(r.strategy);
  }
  return out;
}

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

void write_results_csv(const ExperimentResult& result, std::ostream& out) {
  out << "seed,strategy,cycle,labeled_count,metric,value\n";
  for (const auto& r : result.reports) {
    for (auto metric : metric_names()) {
      out << fmt::format("{},{},{},{},{},{:.10f}\n", r.seed, r.strategy, r.cycle, r.labeled_count, metric,
                         metric_value(r.test, metric));
    }
  }
}

void write_summary_csv(std::span<const SummaryRow> rows, std::ostream& out) {
  out << "strategy,cycle,metric,mean,std,n\n";
  for (const auto& r : rows) {
    out << fmt::format("{},{},{},{:.10f},{:.10f},{}\n", r.strategy, r.cycle, r.metric, r.mean, r.stddev, r.n);
  }
}

void write_selections_csv(const ExperimentResult& result, std::ostream& out) {
  out << "seed,strategy,cycle,video_id\n";
  for (const auto& r : result.reports) {
    for (const auto& id : r.chosen) out << fmt::format("{},{},{},{}\n", r.seed, r.strategy, r.cycle, id);
  }
}

void write_curves_svg(std::span<const SummaryRow> rows, std::ostream& out) {
  constexpr double kPanelW = 420.0;
  constexpr double kPanelH = 280.0;
  constexpr double kMarginL = 60.0;
  constexpr double kMarginT = 40.0;
  constexpr double kPlotW = kPanelW - 90.0;
  constexpr double kPlotH = kPanelH - 80.0;
  const auto strategies = strategies_in_order(rows);
  std::size_t max_cycle = 0;
  for (const auto& r : rows) max_cycle = std::max(max_cycle, r.cycle);

  const double width = 2 * kPanelW + 40.0;
  const double height = 2 * kPanelH + 60.0 + 20.0 * static_cast<double>((strategies.size() + 3) / 4);
  out << fmt::format(R"(<svg xmlns="http://www.w3.org/2000/svg" width="{:.0f}" height="{:.0f}" font-family="sans-serif" font-size="11">)",
                     width, height)
      << "\n<!-- data\nstrategy,cycle,metric,mean,std,n\n";
  for (const auto& r : rows) {
    out << fmt::format("{},{},{},{:.10f},{:.10f},{}\n", r.strategy, r.cycle, r.metric, r.mean, r.stddev, r.n);
  }
  out << "-->\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  const auto metrics = metric_names();
  for (std::size_t m = 0; m < metrics.size(); ++m) {
    const double ox = 20.0 + static_cast<double>(m % 2) * kPanelW;
    const double oy = 10.0 + static_cast<double>(m / 2) * kPanelH;
    double lo = 1.0;
    double hi = 0.0;
    for (const auto& r : rows) {
      if (r.metric != metrics[m]) continue;
      lo = std::min(lo, r.mean);
      hi = std::max(hi, r.mean);
    }
    if (hi < lo) {
      lo = 0.0;
      hi = 1.0;
    }
    const double pad = std::max(0.01, 0.1 * (hi - lo));
    lo = std::max(0.0, lo - pad);
    hi = std::min(1.0, hi + pad);
    const double x0 = ox + kMarginL;
    const double y0 = oy + kMarginT;
    auto px = [&](std::size_t cycle) {
      return x0 + (max_cycle == 0 ? kPlotW / 2 : kPlotW * static_cast<double>(cycle) / static_cast<double>(max_cycle));
    };
    auto py = [&](double v) { return y0 + kPlotH * (1.0 - (v - lo) / (hi - lo)); };

    out << fmt::format(R"(<g><text x="{:.1f}" y="{:.1f}" font-size="13" font-weight="bold">{}</text>)", x0,
                       oy + 22.0, metrics[m])
        << "\n";
    out << fmt::format(R"(<rect x="{:.1f}" y="{:.1f}" width="{:.1f}" height="{:.1f}" fill="none" stroke="#444"/>)",
                       x0, y0, kPlotW, kPlotH)
        << "\n";
    for (int t = 0; t <= 4; ++t) {
      const double v = lo + (hi - lo) * t / 4.0;
      out << fmt::format(R"(<text x="{:.1f}" y="{:.1f}" text-anchor="end">{:.3f}</text>)", x0 - 5.0, py(v) + 4.0, v)
          << "\n";
    }
    for (std::size_t c = 0; c <= max_cycle; ++c) {
      out << fmt::format(R"(<text x="{:.1f}" y="{:.1f}" text-anchor="middle">{}</text>)", px(c), y0 + kPlotH + 15.0, c)
          << "\n";
    }
    out << fmt::format(R"(<text x="{:.1f}" y="{:.1f}" text-anchor="middle">AL cycle</text>)", x0 + kPlotW / 2,
                       y0 + kPlotH + 30.0)
        << "\n";
    for (std::size_t s = 0; s < strategies.size(); ++s) {
      std::string points;
      for (const auto& r : rows) {
        if (r.metric != metrics[m] || r.strategy != strategies[s]) continue;
        points += fmt::format("{:.1f},{:.1f} ", px(r.cycle), py(r.mean));
      }
      out << fmt::format(R"(<polyline fill="none" stroke-width="2" stroke="{}" points="{}"/>)",
                         kPalette[s % kPalette.size()], points)
          << "\n";
    }
    out << "</g>\n";
  }

  const double ly = 2 * kPanelH + 30.0;
  for (std::size_t s = 0; s < strategies.size(); ++s) {
    const double lx = 80.0 + static_cast<double>(s % 4) * 200.0;
    const double yy = ly + static_cast<double>(s / 4) * 20.0;
    out << fmt::format(R"(<line x1="{:.1f}" y1="{:.1f}" x2="{:.1f}" y2="{:.1f}" stroke="{}" stroke-width="3"/>)", lx,
                       yy, lx + 25.0, yy, kPalette[s % kPalette.size()])
        << fmt::format(R"(<text x="{:.1f}" y="{:.1f}">{}</text>)", lx + 30.0, yy + 4.0, xml_escape(strategies[s]))
        << "\n";
  }
  out << "</svg>\n";
}

std::string format_table(std::span<const SummaryRow> rows, long cycle) {
  std::string out = fmt::format("{:<18} {:>5}  {:>17} {:>17} {:>17} {:>17}\n", "strategy", "cycle", "accuracy",
                                "macro_precision", "macro_recall", "macro_jaccard");
  std::map<std::pair<std::string, std::size_t>, std::map<std::string, const SummaryRow*>> grid;
  std::vector<std::pair<std::string, std::size_t>> keys;
  for (const auto& r : rows) {
    if (cycle >= 0 && r.cycle != static_cast<std::size_t>(cycle)) continue;
    const auto key = std::make_pair(r.strategy, r.cycle);
    if (!grid.contains(key)) keys.push_back(key);
    grid[key][r.metric] = &r;
  }
  for (const auto& key : keys) {
    out += fmt::format("{:<18} {:>5}", key.first, key.second);
    for (auto metric : metric_names()) {
      const auto it = grid[key].find(std::string(metric));
      if (it == grid[key].end()) {
        out += fmt::format(" {:>17}", "-");
      } else {
        out += fmt::format("  {:>7.4f} ± {:<6.4f}", it->second->mean, it->second->stddev);
      }
    }
    out += "\n";
  }
  return out;
}

std::vector<std::filesystem::path> write_outputs(const ExperimentConfig& cfg, const ExperimentResult& result,
                                                 const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;
  const auto summary = summarize(result);

  auto emit = [&](const std::string& name, auto&& writer) {
    const auto path = dir / name;
    auto out = open_out(path);
    writer(out);
    written.push_back(path);
  };
  emit("results.csv", [&](std::ostream& o) { write_results_csv(result, o); });
  emit("summary.csv", [&](std::ostream& o) { write_summary_csv(summary, o); });
  emit("selections.csv", [&](std::ostream& o) { write_selections_csv(result, o); });
  emit("curves.svg", [&](std::ostream& o) { write_curves_svg(summary, o); });
  if (!result.failures.empty()) {
    emit("failures.csv", [&](std::ostream& o) {
      o << "seed,strategy,cycle,error,message\n";
      for (const auto& f : result.failures) {
        std::string msg = f.message;
        std::replace(msg.begin(), msg.end(), ',', ';');
        std::replace(msg.begin(), msg.end(), '\n', ' ');
        o << fmt::format("{},{},{},{},{}\n", f.seed, f.strategy, f.cycle, to_string(f.code), msg);
      }
    });
  }
  emit("metadata.json", [&](std::ostream& o) {
    nlohmann::ordered_json meta;
    meta["metric_averaging"] = "macro over classes with nonzero test support; zero denominators reported as 0";
    meta["metric_granularity"] = "clip-wise";
    meta["video_aggregation"] =
        "entropy and margin: mean over clips; coreset and kmeans family: mean clip feature vector";
    meta["initial_labeled_set"] = "seeded uniform random draw of round(initial_label_frac * train videos)";
    meta["budget_rule"] = "round(budget_frac * train videos), at least 1, clamped to the unlabeled pool";
    meta["training"] = "cold start every cycle";
    meta["data_source"] = cfg.manifest ? cfg.manifest->string() : std::string("synthetic generator");
    if (!cfg.manifest) meta["gen"] = nlohmann::ordered_json::parse(gen_config_json(cfg.gen));
    meta["initial_label_frac"] = cfg.initial_label_frac;
    meta["budget_frac"] = cfg.budget_frac;
    meta["cycles"] = cfg.cycles;
    meta["seeds"] = cfg.seeds;
    meta["eps"] = cfg.eps.value();
    meta["train"] = {{"learning_rate", cfg.train.learning_rate},
                     {"epochs", cfg.train.epochs},
                     {"batch_size", cfg.train.batch_size},
                     {"l2", cfg.train.l2},
                     {"seed", cfg.train.seed}};
    meta["clustering"] = {{"restarts", cfg.restarts}, {"max_iter", cfg.max_iter}, {"tol", cfg.tol}};
    o << meta.dump(2) << "\n";
  });
  return written;
}

}  // namespace stepal
