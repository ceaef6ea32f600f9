#include <doctest.h>

#include <random>

#include "cococrola/error.hpp"
#include "cococrola/scoring.hpp"
#include "support/helpers.hpp"

using namespace cococrola;
using namespace cococrola::scoring;
using store::VectorBlock;
using testing::to_block;

namespace {

const std::vector<std::string> kConcepts{"dog", "sea", "ship", "moon"};
const std::vector<std::string> kLangs{"en", "es", "ja"};

struct World {
  std::map<std::pair<std::string, std::string>, oracle::Set> sets;
  std::map<std::string, oracle::Vec> text;
  std::map<PopulationKey, VectorBlock> populations;
  store::TextEmbeddingSet text_set;
};

World make_world(std::uint64_t seed, std::size_t n = 5, std::size_t dim = 12) {
  std::mt19937_64 rng(seed);
  World w;
  w.text_set.vectors = VectorBlock(dim, {});
  for (const auto& c : kConcepts) {
    w.text[c] = oracle::random_unit(rng, dim);
    w.text_set.vectors.push_back(w.text[c]);
    w.text_set.keys.push_back(c);
    for (const auto& l : kLangs) {
      w.sets[{c, l}] = oracle::clustered_set(rng, n, dim, 0.9f);
      w.populations[{c, l}] = to_block(w.sets[{c, l}]);
    }
  }
  return w;
}

ScoreOptions exhaustive_options() {
  ScoreOptions o;
  o.dt = metrics::DtConfig::exhaustive();
  return o;
}

}  // namespace

TEST_CASE("population scores match the oracle") {
  auto w = make_world(3);
  auto table = score_populations("m", w.populations, w.text_set, exhaustive_options());
  REQUIRE(table.rows.size() == 12);
  CHECK(table.rows[0].language == "en");
  CHECK(table.rows[0].concept_id == "dog");
  CHECK(table.rows[4].language == "es");
  for (const auto& r : table.rows) {
    const auto& e = w.sets.at({r.concept_id, r.language});
    CHECK(r.model_id == "m");
    CHECK(r.n_effective == 5);
    CHECK(r.sc == doctest::Approx(oracle::self_consistency(e)).epsilon(1e-9));
    REQUIRE(r.xc);
    CHECK(*r.xc == doctest::Approx(oracle::cross_consistency(e, w.sets.at({r.concept_id, "en"}))).epsilon(1e-9));
    CHECK(r.wc == doctest::Approx(oracle::word_correctness(w.text.at(r.concept_id), e)).epsilon(1e-9));
    std::vector<oracle::Set> others;
    for (const auto& c : kConcepts)
      if (c != r.concept_id) others.push_back(w.sets.at({c, r.language}));
    REQUIRE(r.dt);
    CHECK(*r.dt == doctest::Approx(oracle::inverse_distinctiveness(e, others)).epsilon(1e-9));
    REQUIRE(r.possessed);
    CHECK(*r.possessed == (*r.xc >= 0.5 || r.wc >= 0.25));
  }
}

TEST_CASE("source language switch changes the xc reference") {
  auto w = make_world(5);
  auto opts = exhaustive_options();
  opts.source_language = "ja";
  auto table = score_populations("m", w.populations, w.text_set, opts);
  for (const auto& r : table.rows)
    CHECK(*r.xc == doctest::Approx(oracle::cross_consistency(w.sets.at({r.concept_id, r.language}),
                                                             w.sets.at({r.concept_id, "ja"})))
                       .epsilon(1e-9));
}

TEST_CASE("threads do not change results") {
  auto w = make_world(7);
  ScoreOptions a;
  a.dt = metrics::DtConfig::sampled(40, 9);
  auto b = a;
  b.threads = 4;
  CHECK(to_csv(score_populations("m", w.populations, w.text_set, a)) ==
        to_csv(score_populations("m", w.populations, w.text_set, b)));
}

TEST_CASE("small populations are skipped and missing text is an error") {
  auto w = make_world(9);
  w.populations[{"dog", "ja"}] = to_block({w.sets.at({"dog", "ja"})[0]});
  std::vector<std::string> warnings;
  auto table = score_populations("m", w.populations, w.text_set, exhaustive_options(), &warnings);
  CHECK(table.rows.size() == 11);
  CHECK_FALSE(warnings.empty());

  w.populations.erase({"sea", "en"});
  auto no_src = score_populations("m", w.populations, w.text_set, exhaustive_options());
  for (const auto& r : no_src.rows)
    if (r.concept_id == "sea") {
      CHECK_FALSE(r.xc);
      CHECK_FALSE(r.possessed);
    }

  w.text_set.keys[0] = "cat";
  CHECK_THROWS_AS(score_populations("m", w.populations, w.text_set, exhaustive_options()), Error);
}

TEST_CASE("score_run uses ok entries only") {
  auto w = make_world(11, 3);
  generation::RunManifest m;
  m.plan.model_id = "stub";
  m.plan.languages = kLangs;
  m.plan.concept_ids = kConcepts;
  m.plan.images_per_concept = 3;
  store::EmbeddingSet emb;
  emb.vectors = VectorBlock(12, {});
  for (const auto& l : kLangs)
    for (const auto& c : kConcepts)
      for (std::uint32_t i = 0; i < 3; ++i) {
        generation::ManifestEntry e;
        e.concept_id = c;
        e.language = l;
        e.index = i;
        e.status = generation::EntryStatus::ok;
        if (c == "moon" && l == "es" && i == 2) {
          e.status = generation::EntryStatus::failed;
        } else {
          emb.vectors.push_back(w.sets.at({c, l})[i]);
          emb.keys.push_back({c, l, i});
        }
        m.entries.push_back(e);
      }
  auto table = score_run(m, {emb}, w.text_set, exhaustive_options());
  REQUIRE(table.rows.size() == 12);
  for (const auto& r : table.rows) {
    if (r.concept_id == "moon" && r.language == "es") {
      CHECK(r.n_effective == 2);
      oracle::Set two(w.sets.at({"moon", "es"}).begin(), w.sets.at({"moon", "es"}).begin() + 2);
      CHECK(r.sc == doctest::Approx(oracle::self_consistency(two)).epsilon(1e-9));
    } else {
      CHECK(r.n_effective == 3);
    }
  }

  auto opts = exhaustive_options();
  opts.source_language = "zh";
  try {
    score_run(m, {emb}, w.text_set, opts);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::config);
  }

  auto missing = emb;
  missing.keys.pop_back();
  missing.vectors = VectorBlock(12, std::vector<float>(missing.vectors.data().begin(), missing.vectors.data().end() - 12));
  CHECK_THROWS_AS(score_run(m, {missing}, w.text_set, exhaustive_options()), Error);
}

TEST_CASE("score tables round trip through CSV and JSON") {
  auto w = make_world(13);
  auto table = score_populations("m", w.populations, w.text_set, exhaustive_options());
  table.rows[1].xc.reset();
  table.rows[1].possessed.reset();
  table.rows[2].dt.reset();
  auto csv = to_csv(table);
  CHECK(csv.substr(0, csv.find('\n')) == kCsvHeader);
  auto back = parse_csv(csv, "mem");
  CHECK(to_csv(back) == csv);
  CHECK(back.rows[0].sc == table.rows[0].sc);
  CHECK_FALSE(back.rows[1].xc);
  CHECK_FALSE(back.rows[2].dt);
  auto json = to_json(table);
  CHECK(to_json(parse_json(json, "mem")) == json);
  CHECK(to_csv(parse_json(json, "mem")) == csv);

  testing::TempDir dir("scores");
  write_score_table(dir / "s.csv", table);
  CHECK(to_csv(read_score_table(dir / "s.csv")) == csv);
  CHECK(to_csv(read_score_table(dir / "s.json")) == csv);
  CHECK_THROWS_AS(parse_csv("wrong,header\n", "mem"), Error);
}
