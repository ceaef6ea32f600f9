#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cococrola/scoring.hpp"

namespace cococrola::report {

using scoring::ConceptScores;
using scoring::ScoreTable;

enum class Metric { dt, sc, xc, wc };
inline constexpr Metric kAllMetrics[] = {Metric::dt, Metric::sc, Metric::xc, Metric::wc};
std::string to_string(Metric m);
Metric parse_metric(const std::string& s);
std::optional<double> metric_value(const ConceptScores& row, Metric m);

// Table-style integer: x100, rounded half away from zero.
long long percent(double raw);

struct LanguageAggregate {
  std::string model_id;
  std::string language;
  double mean_xc = 0.0;  // over rows that have xc; NaN if none
  double mean_wc = 0.0;
  std::size_t concept_count = 0;
  std::size_t xc_count = 0;
};

// Column averages (one per language, across models) and row averages (one per
// model, across languages) of the per-(model, language) means.
struct AggregateTable {
  std::vector<LanguageAggregate> cells;  // sorted by (model, language order)
  std::vector<std::string> models;
  std::vector<std::string> languages;
  std::vector<LanguageAggregate> column_means;  // model_id empty
  std::vector<LanguageAggregate> row_means;     // language empty
};

// Languages keep first-appearance order after sorting rows by key, unless
// `language_order` lists them.
AggregateTable aggregate_by_language(const ScoreTable& table, const std::vector<std::string>& language_order = {});

struct HistogramSpec {
  Metric metric = Metric::xc;
  std::size_t bin_count = 20;
  double lo = -1.0;
  double hi = 1.0;
};

struct Histogram {
  Metric metric = Metric::xc;
  std::string group;  // language, or "all"
  std::vector<double> edges;  // bin_count + 1
  std::vector<std::size_t> counts;
  std::size_t absent = 0;   // rows without a value for this metric
  bool empty = false;       // no values at all
};

// Bins are [e_i, e_{i+1}) except the last, which is closed; values outside the
// range are clamped into the end bins.
std::vector<Histogram> histogram(const ScoreTable& table, const HistogramSpec& spec, bool group_by_language,
                                 const std::vector<std::string>& language_order = {});

struct ScatterPoint {
  std::string model_id;
  std::string concept_id;
  double a = 0.0;
  double b = 0.0;
};

struct Scatter {
  std::string lang_a;
  std::string lang_b;
  Metric metric = Metric::xc;
  std::vector<ScatterPoint> points;
  double pearson_r = 0.0;  // NaN when either column has zero variance
};

Scatter cross_language_scatter(const ScoreTable& table, const std::string& lang_a, const std::string& lang_b,
                               Metric metric);

double pearson(const std::vector<double>& x, const std::vector<double>& y);

enum class Order { descending, ascending };

struct Ranking {
  std::string model_id;
  std::string language;
  Metric metric = Metric::xc;
  Order order = Order::descending;
  std::vector<ConceptScores> rows;  // full ranking; rows without the metric go last
};

Ranking rank_concepts(const ScoreTable& table, const std::string& model_id, const std::string& language, Metric key,
                      Order order);
std::vector<ConceptScores> top_k(const Ranking& ranking, std::size_t k);
std::vector<ConceptScores> bottom_k(const Ranking& ranking, std::size_t k);

struct ScoreDelta {
  std::string model_id;
  std::string language;
  std::string concept_id;
  std::optional<double> dt, sc, xc, wc;  // b - a; absent if either side lacks it
};

struct DeltaSummary {
  std::string language;
  std::optional<double> mean_abs_dt, mean_abs_sc, mean_abs_xc, mean_abs_wc;
  std::size_t rows = 0;
};

struct AblationDiff {
  std::string label_a;
  std::string label_b;
  std::vector<ScoreDelta> deltas;
  std::vector<DeltaSummary> summary;
};

// Both tables must cover the same (model, language, concept) keys; a
// mismatch throws with the missing keys listed.
AblationDiff template_ablation_diff(const ScoreTable& a, const ScoreTable& b, const std::string& label_a = "a",
                                    const std::string& label_b = "b");

}  // namespace cococrola::report
