#include <doctest.h>

#include <cmath>
#include <fstream>
#include <random>

#include "cococrola/error.hpp"
#include "cococrola/report/emit.hpp"
#include "support/helpers.hpp"

using namespace cococrola;
using namespace cococrola::report;
using scoring::ConceptScores;

namespace {

ConceptScores row(std::string model, std::string lang, std::string concept_id, double xc, double wc = 0.3,
                  double sc = 0.5, std::optional<double> dt = 0.2) {
  ConceptScores r;
  r.model_id = std::move(model);
  r.language = std::move(lang);
  r.concept_id = std::move(concept_id);
  r.xc = xc;
  r.wc = wc;
  r.sc = sc;
  r.dt = dt;
  r.n_effective = 10;
  r.possessed = xc >= 0.5 || wc >= 0.25;
  return r;
}

ScoreTable sample_table() {
  ScoreTable t;
  const char* concepts[] = {"dog", "sea", "ship", "moon", "fire", "snow"};
  int k = 0;
  for (std::string model : {"m1", "m2"})
    for (std::string lang : {"en", "es", "ja"})
      for (const char* c : concepts) {
        double x = 0.3 + 0.1 * ((k * 7) % 6);
        t.rows.push_back(row(model, lang, c, x, x / 3.0, x * 0.8, x / 2));
        ++k;
      }
  return t;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_CASE("percent rounds half away from zero") {
  CHECK(percent(0.81) == 81);
  CHECK(percent(0.5) == 50);
  CHECK(percent(0.245) == 25);
  CHECK(percent(0.125) == 13);
  CHECK(percent(-0.125) == -13);
  CHECK(percent(0.004) == 0);
}

TEST_CASE("aggregate means per model and language") {
  ScoreTable t;
  for (std::string c : {"a", "b", "c"}) t.rows.push_back(row("m", "en", c, 0.81));
  t.rows.push_back(row("m", "es", "a", 0.4));
  t.rows.push_back(row("m", "es", "b", 0.6));
  auto agg = aggregate_by_language(t, {"en", "es"});
  REQUIRE(agg.cells.size() == 2);
  CHECK(agg.cells[0].language == "en");
  CHECK(percent(agg.cells[0].mean_xc) == 81);
  CHECK(agg.cells[0].concept_count == 3);
  CHECK(agg.cells[1].mean_xc == doctest::Approx(0.5));
  CHECK(percent(agg.cells[1].mean_xc) == 50);
  REQUIRE(agg.row_means.size() == 1);
  CHECK(agg.row_means[0].mean_xc == doctest::Approx((0.81 + 0.5) / 2));
  CHECK(agg.column_means.size() == 2);

  ScoreTable single;
  single.rows.push_back(row("m", "he", "x", 0.37, 0.21));
  auto one = aggregate_by_language(single);
  CHECK(one.cells[0].mean_xc == doctest::Approx(0.37));
  CHECK(one.cells[0].mean_wc == doctest::Approx(0.21));
  CHECK_THROWS_AS(aggregate_by_language(ScoreTable{}), Error);
}

TEST_CASE("aggregation ignores row order") {
  auto t = sample_table();
  auto shuffled = t;
  std::mt19937_64 rng(1);
  std::shuffle(shuffled.rows.begin(), shuffled.rows.end(), rng);
  auto a = aggregate_by_language(t, {"en", "es", "ja"});
  auto b = aggregate_by_language(shuffled, {"en", "es", "ja"});
  REQUIRE(a.cells.size() == b.cells.size());
  for (std::size_t i = 0; i < a.cells.size(); ++i) {
    CHECK(a.cells[i].model_id == b.cells[i].model_id);
    CHECK(a.cells[i].mean_xc == doctest::Approx(b.cells[i].mean_xc).epsilon(1e-12));
    CHECK(a.cells[i].mean_wc == doctest::Approx(b.cells[i].mean_wc).epsilon(1e-12));
  }
}

TEST_CASE("rows without xc are left out of the xc mean") {
  ScoreTable t;
  t.rows.push_back(row("m", "es", "a", 0.4));
  auto r = row("m", "es", "b", 0.0);
  r.xc.reset();
  t.rows.push_back(r);
  auto agg = aggregate_by_language(t);
  CHECK(agg.cells[0].concept_count == 2);
  CHECK(agg.cells[0].xc_count == 1);
  CHECK(agg.cells[0].mean_xc == doctest::Approx(0.4));
}

TEST_CASE("histogram of all-ones puts everything in the last bin") {
  ScoreTable t;
  for (int i = 0; i < 7; ++i) t.rows.push_back(row("m", "en", "c" + std::to_string(i), 1.0));
  auto h = histogram(t, {Metric::xc, 20, -1.0, 1.0}, false);
  REQUIRE(h.size() == 1);
  CHECK(h[0].group == "all");
  CHECK(h[0].edges.size() == 21);
  CHECK(h[0].counts.back() == 7);
}

TEST_CASE("uniform values give near-uniform counts") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  ScoreTable t;
  const int n = 20000;
  std::vector<std::size_t> direct(10, 0);
  for (int i = 0; i < n; ++i) {
    double v = u(rng);
    t.rows.push_back(row("m", "en", "c" + std::to_string(i), v));
    ++direct[std::min<std::size_t>(9, static_cast<std::size_t>((v + 1.0) / 0.2))];
  }
  auto h = histogram(t, {Metric::xc, 10, -1.0, 1.0}, false);
  CHECK(h[0].counts == direct);
  for (auto c : h[0].counts) CHECK(std::abs(static_cast<double>(c) - n / 10.0) < 0.1 * n / 10.0);
}

TEST_CASE("histogram groups sum to their row counts and flag empty groups") {
  auto t = sample_table();
  for (auto& r : t.rows)
    if (r.language == "ja") r.dt.reset();
  auto hs = histogram(t, {Metric::dt, 20, -1.0, 1.0}, true, {"en", "es", "ja"});
  REQUIRE(hs.size() == 3);
  for (const auto& h : hs) {
    std::size_t sum = 0;
    for (auto c : h.counts) sum += c;
    if (h.group == "ja") {
      CHECK(h.empty);
      CHECK(sum == 0);
      CHECK(h.absent == 12);
    } else {
      CHECK(sum == 12);
    }
  }
  CHECK_THROWS_AS(histogram(t, {Metric::xc, 1, -1.0, 1.0}, false), Error);
}

TEST_CASE("scatter correlation") {
  ScoreTable t;
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    double v = u(rng);
    std::string c = "c" + std::to_string(i);
    t.rows.push_back(row("m", "es", c, v));
    t.rows.push_back(row("m", "de", c, v));
    t.rows.push_back(row("m", "he", c, 1.0 - v));
  }
  auto same = cross_language_scatter(t, "es", "de", Metric::xc);
  CHECK(same.points.size() == 50);
  CHECK(same.pearson_r == doctest::Approx(1.0));
  CHECK(cross_language_scatter(t, "es", "he", Metric::xc).pearson_r == doctest::Approx(-1.0));
  CHECK_THROWS_AS(cross_language_scatter(t, "es", "zh", Metric::xc), Error);

  ScoreTable indep;
  for (int i = 0; i < 1000; ++i) {
    std::string c = "c" + std::to_string(i);
    indep.rows.push_back(row("m", "es", c, u(rng)));
    indep.rows.push_back(row("m", "id", c, u(rng)));
  }
  CHECK(std::abs(cross_language_scatter(indep, "es", "id", Metric::xc).pearson_r) < 0.1);
  CHECK(std::isnan(pearson({1, 1, 1}, {1, 2, 3})));
}

TEST_CASE("ranking order, ties and k") {
  ScoreTable t;
  for (std::string c : {"pear", "apple", "fig"}) t.rows.push_back(row("m", "en", c, 0.5));
  auto tied = rank_concepts(t, "m", "en", Metric::xc, Order::descending);
  REQUIRE(tied.rows.size() == 3);
  CHECK(tied.rows[0].concept_id == "apple");
  CHECK(tied.rows[1].concept_id == "fig");
  CHECK(tied.rows[2].concept_id == "pear");

  t.rows.push_back(row("m", "en", "zebra", 0.9));
  t.rows.push_back(row("m", "en", "ant", 0.1));
  auto missing = row("m", "en", "gap", 0.0);
  missing.xc.reset();
  t.rows.push_back(missing);
  t.rows.push_back(row("other", "en", "dog", 0.99));
  auto desc = rank_concepts(t, "m", "en", Metric::xc, Order::descending);
  CHECK(desc.rows.size() == 6);
  CHECK(desc.rows.front().concept_id == "zebra");
  CHECK(desc.rows.back().concept_id == "gap");
  auto asc = rank_concepts(t, "m", "en", Metric::xc, Order::ascending);
  CHECK(asc.rows.front().concept_id == "ant");
  CHECK(asc.rows.back().concept_id == "gap");
  CHECK(top_k(desc, 2).size() == 2);
  CHECK(top_k(desc, 2)[0].concept_id == "zebra");
  CHECK(top_k(desc, 100).size() == 6);
  CHECK(bottom_k(desc, 1).size() == 1);
}

TEST_CASE("ranking is a permutation of the pair's concepts") {
  auto t = sample_table();
  auto r = rank_concepts(t, "m2", "es", Metric::sc, Order::descending);
  std::set<std::string> got;
  for (const auto& x : r.rows) got.insert(x.concept_id);
  CHECK(got == std::set<std::string>{"dog", "sea", "ship", "moon", "fire", "snow"});
  CHECK(r.rows.size() == 6);
}

TEST_CASE("ablation diff") {
  auto a = sample_table();
  auto zero = template_ablation_diff(a, a);
  for (const auto& d : zero.deltas) CHECK(*d.xc == 0.0);

  auto b = a;
  for (auto& r : b.rows) *r.xc += 0.1;
  auto diff = template_ablation_diff(a, b, "default", "a-photo");
  CHECK(diff.label_b == "a-photo");
  REQUIRE(diff.summary.size() == 3);
  for (const auto& s : diff.summary) {
    CHECK(*s.mean_abs_xc == doctest::Approx(0.1));
    CHECK(*s.mean_abs_sc == doctest::Approx(0.0));
  }

  auto c = a;
  c.rows.pop_back();
  try {
    template_ablation_diff(a, c);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("snow") != std::string::npos);
  }
}

TEST_CASE("bundle rendering is deterministic and the HTML is self-contained") {
  auto t = sample_table();
  ReportOptions o;
  o.language_order = {"en", "es", "ja"};
  o.scatter_pairs = {{"es", "ja"}};
  std::vector<Thumbnail> thumbs{{"m1", "en", "dog", "../run/en/dog/0.png"}};
  auto b1 = build_bundle(t, o, std::nullopt, thumbs);
  auto b2 = build_bundle(t, o, std::nullopt, thumbs);
  CHECK(render_aggregates_csv(b1) == render_aggregates_csv(b2));
  CHECK(render_histograms_csv(b1) == render_histograms_csv(b2));
  CHECK(render_json(b1) == render_json(b2));
  CHECK(render_html(b1) == render_html(b2));

  auto agg = render_aggregates_csv(b1);
  CHECK(agg.substr(0, agg.find('\n')) == "model,language,concept_count,xc_count,mean_xc,mean_wc,xc_pct,wc_pct");
  auto hist = render_histograms_csv(b1);
  CHECK(hist.substr(0, hist.find('\n')) == "metric,group,bin,lo,hi,count");
  auto sc = render_scatter_csv(b1);
  CHECK(sc.substr(0, sc.find('\n')) == "metric,lang_a,lang_b,model,concept,a,b");
  auto rk = render_rankings_csv(b1);
  CHECK(rk.substr(0, rk.find('\n')) == "model,language,metric,rank,concept,value");

  auto html = render_html(b1);
  CHECK(html.find("<html") != std::string::npos);
  CHECK(html.find("<svg") != std::string::npos);
  CHECK(html.find("<script src") == std::string::npos);
  CHECK(html.find("<link") == std::string::npos);
  CHECK(html.find("https://") == std::string::npos);
  CHECK(html.find("@import") == std::string::npos);
  CHECK(html.find("../run/en/dog/0.png") != std::string::npos);

  CHECK_THROWS_AS(build_bundle(ScoreTable{}, o), Error);
}

TEST_CASE("histogram counts in a bundle sum to the row count") {
  auto t = sample_table();
  auto b = build_bundle(t, ReportOptions{});
  for (const auto& h : b.histograms) {
    std::size_t sum = 0;
    for (auto c : h.counts) sum += c;
    CHECK(sum + h.absent == (h.group == "all" ? t.rows.size() : 12));
  }
}

TEST_CASE("emit writes the requested formats") {
  auto t = sample_table();
  auto b = build_bundle(t, ReportOptions{}, sample_table());
  testing::TempDir dir("report");
  auto files = emit_report(b, {Format::csv, Format::json, Format::html}, dir.path());
  CHECK(std::filesystem::exists(dir / "ablation.csv"));
  CHECK(std::filesystem::exists(dir / "report.html"));
  CHECK(std::filesystem::exists(dir / "report.json"));
  CHECK(files.size() == 8);

  testing::TempDir only("report");
  auto html_only = emit_report(b, {Format::html}, only.path());
  CHECK(html_only.size() == 1);

  testing::TempDir again("report");
  emit_report(b, {Format::csv, Format::json}, again.path());
  CHECK(slurp(again / "aggregates.csv") == slurp(dir / "aggregates.csv"));
  CHECK(slurp(again / "report.json") == slurp(dir / "report.json"));
  CHECK(parse_format("html") == Format::html);
  CHECK_THROWS_AS(parse_format("pdf"), Error);
}
