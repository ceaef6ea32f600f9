#include "cococrola/report/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <tuple>

#include "cococrola/error.hpp"
#include "cococrola/text.hpp"

namespace cococrola::report {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<std::string> language_order_of(const ScoreTable& table, const std::vector<std::string>& preferred) {
  std::vector<std::string> out = preferred;
  std::set<std::string> seen(out.begin(), out.end());
  std::set<std::string> present;
  for (const auto& r : table.rows) present.insert(r.language);
  // Drop preferred languages that have no rows, then append the rest sorted.
  std::erase_if(out, [&](const std::string& l) { return !present.count(l); });
  for (const auto& l : present)
    if (!seen.count(l)) out.push_back(l);
  return out;
}

std::optional<double> mean_abs(const std::vector<double>& v) {
  if (v.empty()) return std::nullopt;
  double s = 0.0;
  for (double x : v) s += std::fabs(x);
  return s / static_cast<double>(v.size());
}

}  // namespace

std::string to_string(Metric m) {
  switch (m) {
    case Metric::dt: return "dt";
    case Metric::sc: return "sc";
    case Metric::xc: return "xc";
    case Metric::wc: return "wc";
  }
  return "?";
}

Metric parse_metric(const std::string& s) {
  for (Metric m : kAllMetrics)
    if (to_string(m) == s) return m;
  fail(ErrorKind::invalid_argument, "unknown metric '" + s + "' (expected dt, sc, xc or wc)");
}

std::optional<double> metric_value(const ConceptScores& row, Metric m) {
  switch (m) {
    case Metric::dt: return row.dt;
    case Metric::sc: return row.sc;
    case Metric::xc: return row.xc;
    case Metric::wc: return row.wc;
  }
  return std::nullopt;
}

long long percent(double raw) { return static_cast<long long>(std::round(raw * 100.0)); }

AggregateTable aggregate_by_language(const ScoreTable& table, const std::vector<std::string>& language_order) {
  if (table.rows.empty()) fail(ErrorKind::pipeline, "score table is empty");
  AggregateTable out;
  out.languages = language_order_of(table, language_order);

  struct Acc {
    double xc = 0.0, wc = 0.0;
    std::size_t n = 0, nxc = 0;
  };
  std::map<std::pair<std::string, std::string>, Acc> acc;
  std::set<std::string> models;
  for (const auto& r : table.rows) {
    auto& a = acc[{r.model_id, r.language}];
    a.wc += r.wc;
    ++a.n;
    if (r.xc) {
      a.xc += *r.xc;
      ++a.nxc;
    }
    models.insert(r.model_id);
  }
  out.models.assign(models.begin(), models.end());

  for (const auto& model : out.models) {
    for (const auto& lang : out.languages) {
      auto it = acc.find({model, lang});
      if (it == acc.end()) continue;
      const Acc& a = it->second;
      LanguageAggregate g{model, lang, a.nxc ? a.xc / static_cast<double>(a.nxc) : kNaN,
                          a.wc / static_cast<double>(a.n), a.n, a.nxc};
      out.cells.push_back(g);
    }
  }

  auto average = [](const std::vector<const LanguageAggregate*>& cells, LanguageAggregate g) {
    double xc = 0.0, wc = 0.0;
    std::size_t nxc = 0;
    for (const auto* c : cells) {
      wc += c->mean_wc;
      g.concept_count += c->concept_count;
      if (c->xc_count) {
        xc += c->mean_xc;
        ++nxc;
        g.xc_count += c->xc_count;
      }
    }
    g.mean_wc = wc / static_cast<double>(cells.size());
    g.mean_xc = nxc ? xc / static_cast<double>(nxc) : kNaN;
    return g;
  };

  for (const auto& lang : out.languages) {
    std::vector<const LanguageAggregate*> cells;
    for (const auto& c : out.cells)
      if (c.language == lang) cells.push_back(&c);
    if (!cells.empty()) out.column_means.push_back(average(cells, LanguageAggregate{"", lang}));
  }
  for (const auto& model : out.models) {
    std::vector<const LanguageAggregate*> cells;
    for (const auto& c : out.cells)
      if (c.model_id == model) cells.push_back(&c);
    if (!cells.empty()) out.row_means.push_back(average(cells, LanguageAggregate{model, ""}));
  }
  return out;
}

std::vector<Histogram> histogram(const ScoreTable& table, const HistogramSpec& spec, bool group_by_language,
                                 const std::vector<std::string>& language_order) {
  if (spec.bin_count < 2) fail(ErrorKind::invalid_argument, "histogram needs at least 2 bins");
  if (!(spec.hi > spec.lo)) fail(ErrorKind::invalid_argument, "histogram range is empty");

  std::vector<std::string> groups;
  if (group_by_language) groups = language_order_of(table, language_order);
  // Explicitly requested languages stay even without rows, so they show up as empty groups.
  if (group_by_language)
    for (const auto& l : language_order)
      if (std::find(groups.begin(), groups.end(), l) == groups.end()) groups.push_back(l);
  if (!group_by_language) groups.push_back("all");

  const double width = (spec.hi - spec.lo) / static_cast<double>(spec.bin_count);
  std::vector<Histogram> out;
  for (const auto& group : groups) {
    Histogram h;
    h.metric = spec.metric;
    h.group = group;
    h.counts.assign(spec.bin_count, 0);
    for (std::size_t i = 0; i <= spec.bin_count; ++i)
      h.edges.push_back(i == spec.bin_count ? spec.hi : spec.lo + width * static_cast<double>(i));
    std::size_t values = 0;
    for (const auto& r : table.rows) {
      if (group_by_language && r.language != group) continue;
      auto v = metric_value(r, spec.metric);
      if (!v) {
        ++h.absent;
        continue;
      }
      double pos = std::floor((*v - spec.lo) / width);
      std::size_t bin = pos < 0 ? 0 : std::min(static_cast<std::size_t>(pos), spec.bin_count - 1);
      ++h.counts[bin];
      ++values;
    }
    h.empty = values == 0;
    out.push_back(std::move(h));
  }
  return out;
}

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.empty()) fail(ErrorKind::invalid_argument, "pearson needs two equal, non-empty columns");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return kNaN;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

Scatter cross_language_scatter(const ScoreTable& table, const std::string& lang_a, const std::string& lang_b,
                               Metric metric) {
  std::map<std::pair<std::string, std::string>, double> a_vals, b_vals;
  bool has_a = false, has_b = false;
  for (const auto& r : table.rows) {
    has_a |= r.language == lang_a;
    has_b |= r.language == lang_b;
    auto v = metric_value(r, metric);
    if (!v) continue;
    if (r.language == lang_a) a_vals[{r.model_id, r.concept_id}] = *v;
    if (r.language == lang_b) b_vals[{r.model_id, r.concept_id}] = *v;
  }
  if (!has_a || !has_b)
    fail(ErrorKind::invalid_argument, "language " + (has_a ? lang_b : lang_a) + " has no rows in the table");

  Scatter s{lang_a, lang_b, metric, {}, kNaN};
  std::vector<double> xs, ys;
  for (const auto& [key, va] : a_vals) {
    auto it = b_vals.find(key);
    if (it == b_vals.end()) continue;
    s.points.push_back({key.first, key.second, va, it->second});
    xs.push_back(va);
    ys.push_back(it->second);
  }
  if (s.points.empty())
    fail(ErrorKind::pipeline, "no concepts scored in both " + lang_a + " and " + lang_b + " for " + to_string(metric));
  s.pearson_r = pearson(xs, ys);
  return s;
}

Ranking rank_concepts(const ScoreTable& table, const std::string& model_id, const std::string& language, Metric key,
                      Order order) {
  Ranking out{model_id, language, key, order, {}};
  for (const auto& r : table.rows)
    if (r.model_id == model_id && r.language == language) out.rows.push_back(r);
  if (out.rows.empty()) fail(ErrorKind::invalid_argument, "no rows for " + model_id + "/" + language);
  std::sort(out.rows.begin(), out.rows.end(),
            [](const ConceptScores& a, const ConceptScores& b) { return a.concept_id < b.concept_id; });
  std::stable_sort(out.rows.begin(), out.rows.end(), [&](const ConceptScores& a, const ConceptScores& b) {
    auto va = metric_value(a, key);
    auto vb = metric_value(b, key);
    if (!va || !vb) return va.has_value() && !vb.has_value();
    return order == Order::descending ? *va > *vb : *va < *vb;
  });
  return out;
}

std::vector<ConceptScores> top_k(const Ranking& ranking, std::size_t k) {
  k = std::min(k, ranking.rows.size());
  return {ranking.rows.begin(), ranking.rows.begin() + static_cast<std::ptrdiff_t>(k)};
}

std::vector<ConceptScores> bottom_k(const Ranking& ranking, std::size_t k) {
  k = std::min(k, ranking.rows.size());
  std::vector<ConceptScores> out(ranking.rows.end() - static_cast<std::ptrdiff_t>(k), ranking.rows.end());
  std::reverse(out.begin(), out.end());
  return out;
}

AblationDiff template_ablation_diff(const ScoreTable& a, const ScoreTable& b, const std::string& label_a,
                                    const std::string& label_b) {
  using Key = std::tuple<std::string, std::string, std::string>;
  auto index = [](const ScoreTable& t) {
    std::map<Key, const ConceptScores*> m;
    for (const auto& r : t.rows) m[{r.model_id, r.language, r.concept_id}] = &r;
    return m;
  };
  auto ia = index(a);
  auto ib = index(b);

  std::vector<std::string> missing;
  auto describe = [](const Key& k) { return std::get<0>(k) + "/" + std::get<1>(k) + "/" + std::get<2>(k); };
  for (const auto& [k, _] : ia)
    if (!ib.count(k)) missing.push_back(describe(k) + " missing from " + label_b);
  for (const auto& [k, _] : ib)
    if (!ia.count(k)) missing.push_back(describe(k) + " missing from " + label_a);
  if (!missing.empty()) {
    std::string msg = "ablation tables cover different keys:";
    for (const auto& m : missing) msg += "\n  " + m;
    fail(ErrorKind::pipeline, msg);
  }

  AblationDiff out{label_a, label_b, {}, {}};
  auto diff = [](std::optional<double> x, std::optional<double> y) -> std::optional<double> {
    if (!x || !y) return std::nullopt;
    return *y - *x;
  };
  std::map<std::string, std::array<std::vector<double>, 4>> per_language;
  for (const auto& [k, ra] : ia) {
    const ConceptScores* rb = ib.at(k);
    ScoreDelta d{ra->model_id, ra->language, ra->concept_id, diff(ra->dt, rb->dt), rb->sc - ra->sc,
                 diff(ra->xc, rb->xc), rb->wc - ra->wc};
    auto& cols = per_language[d.language];
    if (d.dt) cols[0].push_back(*d.dt);
    cols[1].push_back(*d.sc);
    if (d.xc) cols[2].push_back(*d.xc);
    cols[3].push_back(*d.wc);
    out.deltas.push_back(std::move(d));
  }
  for (const auto& [lang, cols] : per_language) {
    DeltaSummary s{lang, mean_abs(cols[0]), mean_abs(cols[1]), mean_abs(cols[2]), mean_abs(cols[3]), cols[1].size()};
    out.summary.push_back(s);
  }
  return out;
}

}  // namespace cococrola::report
