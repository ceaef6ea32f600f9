#pragma once

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cococrola/report/analysis.hpp"

namespace cococrola::report {

struct Thumbnail {
  std::string model_id;
  std::string language;
  std::string concept_id;
  std::string href;  // image path as seen from the report directory
};

struct ReportOptions {
  std::string title = "Concept coverage report";
  std::vector<std::string> language_order;
  std::size_t histogram_bins = 20;
  // Language pairs compared on xc; pairs with a missing language are skipped.
  std::vector<std::pair<std::string, std::string>> scatter_pairs = {
      {"es", "de"}, {"es", "id"}, {"de", "id"}, {"zh", "ja"}, {"ja", "es"}};
  Metric rank_metric = Metric::xc;
  std::size_t rank_k = 5;
};

struct ReportBundle {
  std::string title;
  ScoreTable table;
  AggregateTable aggregates;
  std::vector<Histogram> histograms;  // per metric: "all" group, then per language
  std::vector<Scatter> scatters;
  std::vector<Ranking> rankings;      // one per (model, language)
  std::size_t rank_k = 5;
  std::optional<AblationDiff> ablation;
  std::vector<Thumbnail> thumbnails;
};

// Throws if the table is empty. `second` adds an ablation diff against it.
ReportBundle build_bundle(const ScoreTable& table, const ReportOptions& options,
                          const std::optional<ScoreTable>& second = std::nullopt,
                          std::vector<Thumbnail> thumbnails = {});

enum class Format { csv, json, html };
std::string to_string(Format f);
Format parse_format(const std::string& s);

std::string render_aggregates_csv(const ReportBundle& bundle);
std::string render_histograms_csv(const ReportBundle& bundle);
std::string render_scatter_csv(const ReportBundle& bundle);
std::string render_rankings_csv(const ReportBundle& bundle);
std::string render_ablation_csv(const ReportBundle& bundle);
std::string render_json(const ReportBundle& bundle);
std::string render_html(const ReportBundle& bundle);

// Writes the requested formats into `out_dir` and returns the paths written.
std::vector<std::filesystem::path> emit_report(const ReportBundle& bundle, const std::set<Format>& formats,
                                               const std::filesystem::path& out_dir);

}  // namespace cococrola::report
