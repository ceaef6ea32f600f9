#include "cococrola/scoring.hpp"

#include <algorithm>
#include <charconv>
#include <set>

#include "cococrola/error.hpp"
#include "cococrola/json_io.hpp"
#include "cococrola/parallel.hpp"
#include "cococrola/text.hpp"

namespace cococrola::scoring {

namespace fs = std::filesystem;
using io::Json;

namespace {

std::string opt_number(const std::optional<double>& v) { return v ? text::format_double(*v) : std::string(); }

std::optional<double> parse_opt_number(const std::string& s, const std::string& where) {
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) fail(ErrorKind::format, where + ": not a number: '" + s + "'");
  return v;
}

double parse_number(const std::string& s, const std::string& where) {
  auto v = parse_opt_number(s, where);
  if (!v) fail(ErrorKind::format, where + ": missing value");
  return *v;
}

void check_csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") != std::string::npos)
    fail(ErrorKind::invalid_argument, "identifier contains a CSV delimiter: '" + s + "'");
}

}  // namespace

std::string to_csv(const ScoreTable& table) {
  std::string out = std::string(kCsvHeader) + "\n";
  for (const auto& r : table.rows) {
    check_csv_field(r.model_id);
    check_csv_field(r.language);
    check_csv_field(r.concept_id);
    out += r.model_id + "," + r.language + "," + r.concept_id + "," + opt_number(r.dt) + "," + text::format_double(r.sc) +
           "," + opt_number(r.xc) + "," + text::format_double(r.wc) + "," + std::to_string(r.n_effective) + "," +
           (r.possessed ? (*r.possessed ? "true" : "false") : "") + "\n";
  }
  return out;
}

ScoreTable parse_csv(const std::string& body, const std::string& origin) {
  auto lines = text::split(body, '\n');
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty() || lines[0] != kCsvHeader) fail(ErrorKind::format, origin + ": missing or unexpected CSV header");
  ScoreTable table;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    std::string where = origin + ":" + std::to_string(i + 1);
    auto f = text::split(lines[i], ',');
    if (f.size() != 9) fail(ErrorKind::format, where + ": expected 9 fields");
    ConceptScores r;
    r.model_id = f[0];
    r.language = f[1];
    r.concept_id = f[2];
    r.dt = parse_opt_number(f[3], where);
    r.sc = parse_number(f[4], where);
    r.xc = parse_opt_number(f[5], where);
    r.wc = parse_number(f[6], where);
    r.n_effective = static_cast<std::size_t>(parse_number(f[7], where));
    if (f[8] == "true") r.possessed = true;
    else if (f[8] == "false") r.possessed = false;
    else if (!f[8].empty()) fail(ErrorKind::format, where + ": bad possessed value");
    table.rows.push_back(std::move(r));
  }
  return table;
}

std::string to_json(const ScoreTable& table) {
  Json rows = Json::array();
  for (const auto& r : table.rows) {
    Json j = {{"model", r.model_id}, {"language", r.language}, {"concept", r.concept_id},
              {"sc", r.sc},          {"wc", r.wc},             {"n_effective", r.n_effective}};
    j["dt"] = r.dt ? Json(*r.dt) : Json(nullptr);
    j["xc"] = r.xc ? Json(*r.xc) : Json(nullptr);
    j["possessed"] = r.possessed ? Json(*r.possessed) : Json(nullptr);
    rows.push_back(std::move(j));
  }
  return Json{{"rows", rows}}.dump(2) + "\n";
}

ScoreTable parse_json(const std::string& body, const std::string& origin) {
  ScoreTable table;
  try {
    auto j = Json::parse(body);
    for (const auto& jr : j.at("rows")) {
      ConceptScores r;
      r.model_id = jr.at("model").get<std::string>();
      r.language = jr.at("language").get<std::string>();
      r.concept_id = jr.at("concept").get<std::string>();
      if (!jr.at("dt").is_null()) r.dt = jr["dt"].get<double>();
      r.sc = jr.at("sc").get<double>();
      if (!jr.at("xc").is_null()) r.xc = jr["xc"].get<double>();
      r.wc = jr.at("wc").get<double>();
      r.n_effective = jr.at("n_effective").get<std::size_t>();
      if (!jr.at("possessed").is_null()) r.possessed = jr["possessed"].get<bool>();
      table.rows.push_back(std::move(r));
    }
  } catch (const Json::exception& e) {
    fail(ErrorKind::format, origin + ": " + e.what());
  }
  return table;
}

void write_score_table(const fs::path& csv_path, const ScoreTable& table) {
  io::write_file_atomic(csv_path, to_csv(table));
  fs::path json_path = csv_path;
  json_path.replace_extension(".json");
  io::write_file_atomic(json_path, to_json(table));
}

ScoreTable read_score_table(const fs::path& path) {
  std::string body = io::read_file(path);
  if (path.extension() == ".json") return parse_json(body, path.string());
  return parse_csv(body, path.string());
}

ScoreTable score_populations(const std::string& model_id, const std::map<PopulationKey, store::VectorBlock>& populations,
                             const store::TextEmbeddingSet& text_set, const ScoreOptions& options,
                             std::vector<std::string>* warnings) {
  std::map<std::string, std::size_t> text_index;
  for (std::size_t i = 0; i < text_set.keys.size(); ++i) text_index.emplace(text_set.keys[i], i);

  // Only populations with n >= 2 are scored.
  std::vector<PopulationKey> keys;
  for (const auto& [key, block] : populations) {
    if (block.size() >= 2) {
      keys.push_back(key);
    } else if (warnings) {
      warnings->push_back(key.first + "/" + key.second + ": only " + std::to_string(block.size()) +
                          " usable image(s), not scored");
    }
  }
  std::sort(keys.begin(), keys.end(), [](const PopulationKey& a, const PopulationKey& b) {
    return std::tie(a.second, a.first) < std::tie(b.second, b.first);
  });

  // Comparison pools per language: every other scored-or-not population with images.
  std::map<std::string, std::vector<metrics::PoolEntry>> by_language;
  for (const auto& [key, block] : populations)
    if (!block.empty()) by_language[key.second].push_back({key.first, &block});

  std::vector<ConceptScores> rows(keys.size());
  parallel_for(keys.size(), options.threads, [&](std::size_t i) {
    const auto& [concept_id, language] = keys[i];
    const auto& images = populations.at(keys[i]);
    ConceptScores r;
    r.model_id = model_id;
    r.language = language;
    r.concept_id = concept_id;
    r.n_effective = images.size();
    r.sc = metrics::self_consistency(images);

    auto src = populations.find({concept_id, options.source_language});
    if (src != populations.end() && !src->second.empty()) r.xc = metrics::cross_consistency(images, src->second);

    auto t = text_index.find(concept_id);
    if (t == text_index.end()) fail(ErrorKind::pipeline, "no text embedding for concept '" + concept_id + "'");
    r.wc = metrics::word_correctness(text_set.vectors.row(t->second), images, options.renormalize_wc);

    std::vector<metrics::PoolEntry> pool;
    for (const auto& entry : by_language[language])
      if (entry.concept_id != concept_id) pool.push_back(entry);
    if (!pool.empty()) {
      metrics::DtConfig cfg = options.dt;
      cfg.rng_seed = text::fnv1a64(concept_id + '\x1f' + language, options.dt.rng_seed ^ 0xcbf29ce484222325ull);
      r.dt = metrics::inverse_distinctiveness(images, pool, cfg);
    }
    if (r.xc) r.possessed = metrics::classify_possession(*r.xc, r.wc, options.thresholds).possessed;
    rows[i] = std::move(r);
  });

  if (warnings)
    for (const auto& r : rows)
      if (!r.xc) warnings->push_back(r.concept_id + "/" + r.language + ": no " + options.source_language + " population, xc absent");

  return ScoreTable{std::move(rows)};
}

ScoreTable score_run(const generation::RunManifest& manifest, const std::vector<store::EmbeddingSet>& embeddings,
                     const store::TextEmbeddingSet& text_set, const ScoreOptions& options,
                     std::vector<std::string>* warnings) {
  const auto& langs = manifest.plan.languages;
  if (std::find(langs.begin(), langs.end(), options.source_language) == langs.end())
    fail(ErrorKind::config, "source language " + options.source_language + " is not part of the run");

  std::map<store::ImageKey, std::pair<const store::EmbeddingSet*, std::size_t>> lookup;
  std::size_t dim = 0;
  for (const auto& set : embeddings) {
    if (set.size() == 0) continue;
    if (dim == 0) dim = set.dim();
    if (set.dim() != dim) fail(ErrorKind::format, "embedding files disagree on dimension");
    for (std::size_t i = 0; i < set.keys.size(); ++i) lookup[set.keys[i]] = {&set, i};
  }
  if (text_set.size() > 0 && dim != 0 && text_set.dim() != dim)
    fail(ErrorKind::format, "text embedding dim " + std::to_string(text_set.dim()) + " != image dim " + std::to_string(dim));

  std::map<PopulationKey, store::VectorBlock> populations;
  std::set<PopulationKey> planned;
  for (const auto& e : manifest.entries) {
    PopulationKey key{e.concept_id, e.language};
    planned.insert(key);
    if (e.status != generation::EntryStatus::ok) continue;
    auto it = lookup.find({e.concept_id, e.language, e.index});
    if (it == lookup.end())
      fail(ErrorKind::pipeline, "no embedding for ok entry " + e.concept_id + "/" + e.language + "/" + std::to_string(e.index));
    const auto& [set, row] = it->second;
    populations[key].push_back(set->vectors.row(row));
  }
  for (const auto& key : planned) populations.try_emplace(key);

  return score_populations(manifest.plan.model_id, populations, text_set, options, warnings);
}

}  // namespace cococrola::scoring
