#include "cococrola/report/emit.hpp"

#include <cmath>
#include <map>

#include "cococrola/error.hpp"
#include "cococrola/json_io.hpp"
#include "cococrola/text.hpp"

namespace cococrola::report {

namespace fs = std::filesystem;
using io::Json;

namespace {

std::string num(double v) { return std::isnan(v) ? std::string() : text::format_double(v); }
std::string num(const std::optional<double>& v) { return v ? num(*v) : std::string(); }
std::string pct(double v) { return std::isnan(v) ? std::string("-") : std::to_string(percent(v)); }
std::string pct(const std::optional<double>& v) { return v ? pct(*v) : std::string("-"); }

Json jnum(double v) { return std::isnan(v) ? Json(nullptr) : Json(v); }
Json jnum(const std::optional<double>& v) { return v ? jnum(*v) : Json(nullptr); }

std::string order_name(Order o) { return o == Order::descending ? "descending" : "ascending"; }

std::string esc(const std::string& s) { return text::escape_html(s); }

const char* kStyle = R"(body{font-family:sans-serif;margin:2em;color:#222;max-width:1200px}
h1{font-size:1.5em}h2{font-size:1.2em;margin-top:2em;border-bottom:1px solid #ccc}
table{border-collapse:collapse;margin:.5em 0}td,th{border:1px solid #ccc;padding:2px 8px;text-align:right}
th{background:#f0f0f0}th.sortable{cursor:pointer}td.l,th.l{text-align:left}
.grid{display:flex;flex-wrap:wrap;gap:12px}.card{border:1px solid #ddd;padding:6px}
.card h3{font-size:.9em;margin:0 0 4px}svg text{font-size:10px;fill:#444}
.bar{fill:#4a78b5}.pt{fill:#c0504d;fill-opacity:.7}.thumb{width:64px;height:64px;object-fit:cover;vertical-align:middle}
.note{color:#777;font-size:.85em}
)";

const char* kScript = R"(document.querySelectorAll('table.sort').forEach(function(t){
t.querySelectorAll('th').forEach(function(th,i){th.classList.add('sortable');th.addEventListener('click',function(){
var b=t.tBodies[0],rows=Array.prototype.slice.call(b.rows),asc=th.dataset.asc!=='1';th.dataset.asc=asc?'1':'0';
rows.sort(function(x,y){var a=x.cells[i].textContent,c=y.cells[i].textContent,na=parseFloat(a),nc=parseFloat(c);
var r=(!isNaN(na)&&!isNaN(nc))?na-nc:a.localeCompare(c);return asc?r:-r;});rows.forEach(function(r){b.appendChild(r);});});});});
)";

std::string histogram_svg(const Histogram& h) {
  const double w = 220, hgt = 90, pad = 14;
  std::size_t peak = 1;
  for (auto c : h.counts) peak = std::max(peak, c);
  const double bw = (w - 2 * pad) / static_cast<double>(h.counts.size());
  std::string s = "<svg width=\"" + num(w) + "\" height=\"" + num(hgt + 16) + "\" xmlns=\"http://www.w3.org/2000/svg\">";
  for (std::size_t i = 0; i < h.counts.size(); ++i) {
    double bh = (hgt - pad) * static_cast<double>(h.counts[i]) / static_cast<double>(peak);
    s += "<rect class=\"bar\" x=\"" + text::format_fixed(pad + bw * static_cast<double>(i), 2) + "\" y=\"" +
         text::format_fixed(hgt - bh, 2) + "\" width=\"" + text::format_fixed(std::max(bw - 1, 1.0), 2) +
         "\" height=\"" + text::format_fixed(bh, 2) + "\"><title>[" + text::format_fixed(h.edges[i], 2) + ", " +
         text::format_fixed(h.edges[i + 1], 2) + "): " + std::to_string(h.counts[i]) + "</title></rect>";
  }
  s += "<line x1=\"" + num(pad) + "\" y1=\"" + num(hgt) + "\" x2=\"" + num(w - pad) + "\" y2=\"" + num(hgt) +
       "\" stroke=\"#888\"/>";
  s += "<text x=\"" + num(pad) + "\" y=\"" + num(hgt + 12) + "\">" + text::format_fixed(h.edges.front(), 1) + "</text>";
  s += "<text x=\"" + num(w - pad) + "\" y=\"" + num(hgt + 12) + "\" text-anchor=\"end\">" +
       text::format_fixed(h.edges.back(), 1) + "</text>";
  return s + "</svg>";
}

std::string scatter_svg(const Scatter& sc) {
  const double size = 200, pad = 20;
  auto px = [&](double v) { return pad + (std::clamp(v, -1.0, 1.0) + 1.0) / 2.0 * (size - 2 * pad); };
  auto py = [&](double v) { return size - px(v); };
  std::string s = "<svg width=\"" + num(size) + "\" height=\"" + num(size) + "\" xmlns=\"http://www.w3.org/2000/svg\">";
  s += "<rect x=\"" + num(pad) + "\" y=\"" + num(pad) + "\" width=\"" + num(size - 2 * pad) + "\" height=\"" +
       num(size - 2 * pad) + "\" fill=\"none\" stroke=\"#aaa\"/>";
  s += "<line x1=\"" + num(pad) + "\" y1=\"" + num(size - pad) + "\" x2=\"" + num(size - pad) + "\" y2=\"" + num(pad) +
       "\" stroke=\"#ddd\"/>";
  for (const auto& p : sc.points)
    s += "<circle class=\"pt\" r=\"2.5\" cx=\"" + text::format_fixed(px(p.a), 2) + "\" cy=\"" +
         text::format_fixed(py(p.b), 2) + "\"><title>" + esc(p.model_id + " " + p.concept_id) + "</title></circle>";
  s += "<text x=\"" + num(size / 2) + "\" y=\"" + num(size - 4) + "\" text-anchor=\"middle\">" + esc(sc.lang_a) +
       "</text>";
  s += "<text x=\"8\" y=\"" + num(size / 2) + "\">" + esc(sc.lang_b) + "</text>";
  return s + "</svg>";
}

}  // namespace

ReportBundle build_bundle(const ScoreTable& table, const ReportOptions& options, const std::optional<ScoreTable>& second,
                          std::vector<Thumbnail> thumbnails) {
  if (table.rows.empty()) fail(ErrorKind::pipeline, "score table is empty");
  ReportBundle b;
  b.title = options.title;
  b.table = table;
  std::sort(b.table.rows.begin(), b.table.rows.end(), [](const ConceptScores& x, const ConceptScores& y) {
    return std::tie(x.model_id, x.language, x.concept_id) < std::tie(y.model_id, y.language, y.concept_id);
  });
  b.aggregates = aggregate_by_language(b.table, options.language_order);
  const auto& langs = b.aggregates.languages;

  for (Metric m : kAllMetrics) {
    HistogramSpec spec{m, options.histogram_bins, -1.0, 1.0};
    for (auto& h : histogram(b.table, spec, false)) b.histograms.push_back(std::move(h));
    for (auto& h : histogram(b.table, spec, true, langs)) b.histograms.push_back(std::move(h));
  }

  auto has = [&](const std::string& l) { return std::find(langs.begin(), langs.end(), l) != langs.end(); };
  for (const auto& [la, lb] : options.scatter_pairs) {
    if (!has(la) || !has(lb)) continue;
    try {
      b.scatters.push_back(cross_language_scatter(b.table, la, lb, Metric::xc));
    } catch (const Error&) {
      // No common concepts with xc for this pair; nothing to plot.
    }
  }

  for (const auto& model : b.aggregates.models)
    for (const auto& lang : langs) {
      bool any = std::any_of(b.table.rows.begin(), b.table.rows.end(),
                             [&](const ConceptScores& r) { return r.model_id == model && r.language == lang; });
      if (any) b.rankings.push_back(rank_concepts(b.table, model, lang, options.rank_metric, Order::descending));
    }
  b.rank_k = options.rank_k;

  if (second) b.ablation = template_ablation_diff(table, *second, "a", "b");
  std::sort(thumbnails.begin(), thumbnails.end(), [](const Thumbnail& x, const Thumbnail& y) {
    return std::tie(x.model_id, x.language, x.concept_id, x.href) < std::tie(y.model_id, y.language, y.concept_id, y.href);
  });
  b.thumbnails = std::move(thumbnails);
  return b;
}

std::string to_string(Format f) {
  switch (f) {
    case Format::csv: return "csv";
    case Format::json: return "json";
    case Format::html: return "html";
  }
  return "?";
}

Format parse_format(const std::string& s) {
  for (Format f : {Format::csv, Format::json, Format::html})
    if (to_string(f) == s) return f;
  fail(ErrorKind::invalid_argument, "unknown report format '" + s + "' (expected csv, json or html)");
}

std::string render_aggregates_csv(const ReportBundle& b) {
  std::string out = "model,language,concept_count,xc_count,mean_xc,mean_wc,xc_pct,wc_pct\n";
  auto line = [&](const LanguageAggregate& g, const std::string& model, const std::string& lang) {
    out += model + "," + lang + "," + std::to_string(g.concept_count) + "," + std::to_string(g.xc_count) + "," +
           num(g.mean_xc) + "," + num(g.mean_wc) + "," + (std::isnan(g.mean_xc) ? "" : pct(g.mean_xc)) + "," +
           pct(g.mean_wc) + "\n";
  };
  for (const auto& g : b.aggregates.cells) line(g, g.model_id, g.language);
  for (const auto& g : b.aggregates.column_means) line(g, "*", g.language);
  for (const auto& g : b.aggregates.row_means) line(g, g.model_id, "*");
  return out;
}

std::string render_histograms_csv(const ReportBundle& b) {
  std::string out = "metric,group,bin,lo,hi,count\n";
  for (const auto& h : b.histograms)
    for (std::size_t i = 0; i < h.counts.size(); ++i)
      out += to_string(h.metric) + "," + h.group + "," + std::to_string(i) + "," + num(h.edges[i]) + "," +
             num(h.edges[i + 1]) + "," + std::to_string(h.counts[i]) + "\n";
  return out;
}

std::string render_scatter_csv(const ReportBundle& b) {
  std::string out = "metric,lang_a,lang_b,model,concept,a,b\n";
  for (const auto& s : b.scatters)
    for (const auto& p : s.points)
      out += to_string(s.metric) + "," + s.lang_a + "," + s.lang_b + "," + p.model_id + "," + p.concept_id + "," +
             num(p.a) + "," + num(p.b) + "\n";
  return out;
}

std::string render_rankings_csv(const ReportBundle& b) {
  std::string out = "model,language,metric,rank,concept,value\n";
  for (const auto& r : b.rankings)
    for (std::size_t i = 0; i < r.rows.size(); ++i)
      out += r.model_id + "," + r.language + "," + to_string(r.metric) + "," + std::to_string(i + 1) + "," +
             r.rows[i].concept_id + "," + num(metric_value(r.rows[i], r.metric)) + "\n";
  return out;
}

std::string render_ablation_csv(const ReportBundle& b) {
  std::string out = "model,language,concept,d_dt,d_sc,d_xc,d_wc\n";
  if (!b.ablation) return out;
  for (const auto& d : b.ablation->deltas)
    out += d.model_id + "," + d.language + "," + d.concept_id + "," + num(d.dt) + "," + num(d.sc) + "," + num(d.xc) +
           "," + num(d.wc) + "\n";
  return out;
}

std::string render_json(const ReportBundle& b) {
  Json j;
  j["title"] = b.title;
  j["languages"] = b.aggregates.languages;
  j["models"] = b.aggregates.models;

  auto agg = [](const LanguageAggregate& g) {
    return Json{{"model", g.model_id},
                {"language", g.language},
                {"concept_count", g.concept_count},
                {"xc_count", g.xc_count},
                {"mean_xc", jnum(g.mean_xc)},
                {"mean_wc", jnum(g.mean_wc)},
                {"xc_pct", std::isnan(g.mean_xc) ? Json(nullptr) : Json(percent(g.mean_xc))},
                {"wc_pct", percent(g.mean_wc)}};
  };
  Json aggregates = {{"cells", Json::array()}, {"column_means", Json::array()}, {"row_means", Json::array()}};
  for (const auto& g : b.aggregates.cells) aggregates["cells"].push_back(agg(g));
  for (const auto& g : b.aggregates.column_means) aggregates["column_means"].push_back(agg(g));
  for (const auto& g : b.aggregates.row_means) aggregates["row_means"].push_back(agg(g));
  j["aggregates"] = aggregates;

  j["histograms"] = Json::array();
  for (const auto& h : b.histograms)
    j["histograms"].push_back(Json{{"metric", to_string(h.metric)},
                                   {"group", h.group},
                                   {"edges", h.edges},
                                   {"counts", h.counts},
                                   {"absent", h.absent},
                                   {"empty", h.empty}});

  j["scatters"] = Json::array();
  for (const auto& s : b.scatters) {
    Json pts = Json::array();
    for (const auto& p : s.points) pts.push_back(Json{{"model", p.model_id}, {"concept", p.concept_id}, {"a", p.a}, {"b", p.b}});
    j["scatters"].push_back(Json{{"metric", to_string(s.metric)},
                                 {"lang_a", s.lang_a},
                                 {"lang_b", s.lang_b},
                                 {"pearson_r", jnum(s.pearson_r)},
                                 {"points", pts}});
  }

  j["rankings"] = Json::array();
  for (const auto& r : b.rankings) {
    Json concepts = Json::array();
    for (const auto& row : r.rows) concepts.push_back(Json{{"concept", row.concept_id}, {"value", jnum(metric_value(row, r.metric))}});
    j["rankings"].push_back(Json{{"model", r.model_id},
                                 {"language", r.language},
                                 {"metric", to_string(r.metric)},
                                 {"order", order_name(r.order)},
                                 {"concepts", concepts}});
  }
  j["rank_k"] = b.rank_k;

  if (b.ablation) {
    Json deltas = Json::array();
    for (const auto& d : b.ablation->deltas)
      deltas.push_back(Json{{"model", d.model_id}, {"language", d.language}, {"concept", d.concept_id},
                            {"dt", jnum(d.dt)},    {"sc", jnum(d.sc)},       {"xc", jnum(d.xc)},
                            {"wc", jnum(d.wc)}});
    Json summary = Json::array();
    for (const auto& s : b.ablation->summary)
      summary.push_back(Json{{"language", s.language},
                             {"rows", s.rows},
                             {"mean_abs_dt", jnum(s.mean_abs_dt)},
                             {"mean_abs_sc", jnum(s.mean_abs_sc)},
                             {"mean_abs_xc", jnum(s.mean_abs_xc)},
                             {"mean_abs_wc", jnum(s.mean_abs_wc)}});
    j["ablation"] = Json{{"a", b.ablation->label_a}, {"b", b.ablation->label_b}, {"deltas", deltas}, {"summary", summary}};
  } else {
    j["ablation"] = nullptr;
  }

  Json rows = io::Json::parse(scoring::to_json(b.table));
  j["scores"] = rows["rows"];
  return j.dump(2) + "\n";
}

std::string render_html(const ReportBundle& b) {
  std::map<std::tuple<std::string, std::string, std::string>, std::vector<const Thumbnail*>> thumbs;
  for (const auto& t : b.thumbnails) thumbs[{t.model_id, t.language, t.concept_id}].push_back(&t);

  std::string h = "<!DOCTYPE html>\n<html lang=\"en\"><head><meta charset=\"utf-8\"><title>" + esc(b.title) +
                  "</title>\n<style>" + kStyle + "</style></head><body>\n<h1>" + esc(b.title) + "</h1>\n";
  h += "<p class=\"note\">" + std::to_string(b.table.rows.size()) + " scored (concept, language) rows. Scores are x100.</p>\n";

  h += "<h2>Language averages (Xc / Wc)</h2>\n<table class=\"sort\"><thead><tr><th class=\"l\">model</th>";
  for (const auto& l : b.aggregates.languages) h += "<th>" + esc(l) + "</th>";
  h += "<th>avg</th></tr></thead><tbody>\n";
  auto cell = [](const LanguageAggregate* g) {
    return g ? "<td>" + pct(g->mean_xc) + " / " + pct(g->mean_wc) + "</td>" : std::string("<td>-</td>");
  };
  for (const auto& model : b.aggregates.models) {
    h += "<tr><td class=\"l\">" + esc(model) + "</td>";
    for (const auto& l : b.aggregates.languages) {
      const LanguageAggregate* found = nullptr;
      for (const auto& g : b.aggregates.cells)
        if (g.model_id == model && g.language == l) found = &g;
      h += cell(found);
    }
    const LanguageAggregate* rm = nullptr;
    for (const auto& g : b.aggregates.row_means)
      if (g.model_id == model) rm = &g;
    h += cell(rm) + "</tr>\n";
  }
  h += "</tbody><tfoot><tr><td class=\"l\">avg</td>";
  for (const auto& l : b.aggregates.languages) {
    const LanguageAggregate* cm = nullptr;
    for (const auto& g : b.aggregates.column_means)
      if (g.language == l) cm = &g;
    h += cell(cm);
  }
  h += "<td></td></tr></tfoot></table>\n";

  for (Metric m : kAllMetrics) {
    h += "<h2>Distribution of " + to_string(m) + "</h2>\n<div class=\"grid\">";
    for (const auto& hist : b.histograms) {
      if (hist.metric != m) continue;
      std::size_t total = 0;
      for (auto c : hist.counts) total += c;
      h += "<div class=\"card\"><h3>" + esc(hist.group) + " (" + std::to_string(total) + ")</h3>" +
           (hist.empty ? std::string("<p class=\"note\">no values</p>") : histogram_svg(hist)) + "</div>";
    }
    h += "</div>\n";
  }

  if (!b.scatters.empty()) {
    h += "<h2>Cross-language xc</h2>\n<div class=\"grid\">";
    for (const auto& s : b.scatters)
      h += "<div class=\"card\"><h3>" + esc(s.lang_a) + " vs " + esc(s.lang_b) + ", r = " +
           (std::isnan(s.pearson_r) ? std::string("n/a") : text::format_fixed(s.pearson_r, 3)) + "</h3>" +
           scatter_svg(s) + "</div>";
    h += "</div>\n";
  }

  h += "<h2>Concept rankings by " + (b.rankings.empty() ? std::string("xc") : to_string(b.rankings.front().metric)) +
       "</h2>\n<div class=\"grid\">";
  auto list = [&](const Ranking& r, const std::vector<ConceptScores>& rows) {
    std::string s = "<ol>";
    for (const auto& row : rows) {
      s += "<li>" + esc(row.concept_id) + " " + pct(metric_value(row, r.metric));
      auto it = thumbs.find({r.model_id, r.language, row.concept_id});
      if (it != thumbs.end())
        for (const auto* t : it->second)
          s += " <a href=\"" + esc(t->href) + "\"><img class=\"thumb\" alt=\"\" src=\"" + esc(t->href) + "\"></a>";
      s += "</li>";
    }
    return s + "</ol>";
  };
  for (const auto& r : b.rankings) {
    h += "<div class=\"card\"><h3>" + esc(r.model_id) + " / " + esc(r.language) + "</h3><b>top</b>" +
         list(r, top_k(r, b.rank_k)) + "<b>bottom</b>" + list(r, bottom_k(r, b.rank_k)) + "</div>";
  }
  h += "</div>\n";

  if (b.ablation) {
    h += "<h2>Template ablation (mean |b - a|, x100)</h2>\n<table class=\"sort\"><thead><tr><th class=\"l\">language</th>"
         "<th>rows</th><th>dt</th><th>sc</th><th>xc</th><th>wc</th></tr></thead><tbody>\n";
    for (const auto& s : b.ablation->summary)
      h += "<tr><td class=\"l\">" + esc(s.language) + "</td><td>" + std::to_string(s.rows) + "</td><td>" +
           pct(s.mean_abs_dt) + "</td><td>" + pct(s.mean_abs_sc) + "</td><td>" + pct(s.mean_abs_xc) + "</td><td>" +
           pct(s.mean_abs_wc) + "</td></tr>\n";
    h += "</tbody></table>\n";
  }

  h += "<h2>All scores</h2>\n<table class=\"sort\"><thead><tr><th class=\"l\">model</th><th class=\"l\">language</th>"
       "<th class=\"l\">concept</th><th>dt</th><th>sc</th><th>xc</th><th>wc</th><th>n</th><th>possessed</th></tr></thead><tbody>\n";
  for (const auto& r : b.table.rows)
    h += "<tr><td class=\"l\">" + esc(r.model_id) + "</td><td class=\"l\">" + esc(r.language) + "</td><td class=\"l\">" +
         esc(r.concept_id) + "</td><td>" + pct(r.dt) + "</td><td>" + pct(r.sc) + "</td><td>" + pct(r.xc) + "</td><td>" +
         pct(r.wc) + "</td><td>" + std::to_string(r.n_effective) + "</td><td>" +
         (r.possessed ? (*r.possessed ? "yes" : "no") : "-") + "</td></tr>\n";
  h += "</tbody></table>\n<script>" + std::string(kScript) + "</script>\n</body></html>\n";
  return h;
}

std::vector<fs::path> emit_report(const ReportBundle& bundle, const std::set<Format>& formats, const fs::path& out_dir) {
  if (formats.empty()) fail(ErrorKind::invalid_argument, "no report formats requested");
  std::vector<fs::path> written;
  auto put = [&](const std::string& name, const std::string& body) {
    fs::path p = out_dir / name;
    io::write_file_atomic(p, body);
    written.push_back(p);
  };
  if (formats.count(Format::csv)) {
    put("aggregates.csv", render_aggregates_csv(bundle));
    put("histograms.csv", render_histograms_csv(bundle));
    put("scatter.csv", render_scatter_csv(bundle));
    put("rankings.csv", render_rankings_csv(bundle));
    put("scores.csv", scoring::to_csv(bundle.table));
    if (bundle.ablation) put("ablation.csv", render_ablation_csv(bundle));
  }
  if (formats.count(Format::json)) put("report.json", render_json(bundle));
  if (formats.count(Format::html)) put("report.html", render_html(bundle));
  return written;
}

}  // namespace cococrola::report
