#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "stepal/experiment.hpp"

namespace stepal {

/// Long-format per-seed results: seed,strategy,cycle,labeled_count,metric,value.
/// Values are printed with 10 decimals; wall time is deliberately excluded so
/// the file is reproducible byte for byte.
void write_results_csv(const ExperimentResult& result, std::ostream& out);

/// strategy,cycle,metric,mean,std,n
void write_summary_csv(std::span<const SummaryRow> rows, std::ostream& out);

/// seed,strategy,cycle,video_id for every annotated video.
void write_selections_csv(const ExperimentResult& result, std::ostream& out);

/// Self-contained SVG: one panel per metric, one line per strategy (mean over
/// seeds against cycle). The plotted table is embedded as an XML comment.
void write_curves_svg(std::span<const SummaryRow> rows, std::ostream& out);

/// Human-readable mean±std table at the given cycle (all cycles when cycle < 0).
[[nodiscard]] std::string format_table(std::span<const SummaryRow> rows, long cycle = -1);

/// Writes results.csv, summary.csv, selections.csv, curves.svg, metadata.json
/// and failures.csv (if any) under dir. Returns the written paths.
std::vector<std::filesystem::path> write_outputs(const ExperimentConfig& cfg, const ExperimentResult& result,
                                                 const std::filesystem::path& dir);

}  // namespace stepal
