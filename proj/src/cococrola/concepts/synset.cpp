#include "cococrola/concepts/synset.hpp"

#include <algorithm>
#include <cstdlib>
#include <set>

#include "cococrola/error.hpp"
#include "cococrola/http.hpp"
#include "cococrola/json_io.hpp"
#include "cococrola/text.hpp"

namespace cococrola::concepts {

namespace fs = std::filesystem;

SynsetEvidence parse_synset_evidence(const std::string& term, const std::string& json_body,
                                     const std::vector<LanguageCode>& languages) {
  SynsetEvidence ev;
  ev.source_term = term;
  auto body = io::Json::parse(json_body);
  ev.is_noun = body.at("is_noun").get<bool>();
  if (body.contains("linked_surfaces")) {
    for (const auto& [lang, list] : body.at("linked_surfaces").items()) {
      if (std::find(languages.begin(), languages.end(), lang) == languages.end()) continue;
      auto& bucket = ev.linked_surfaces[lang];
      for (const auto& s : list) bucket.insert(text::casefold(text::normalize_surface(s.get<std::string>())));
    }
  }
  return ev;
}

SynsetResult FixtureSynsetClient::fetch(const std::string& term, const std::vector<LanguageCode>& languages) {
  fs::path file = dir_ / (text::slug(term) + ".json");
  if (!fs::exists(file)) return SynsetFetchError{"no recorded synset evidence for '" + term + "'"};
  try {
    return parse_synset_evidence(term, io::read_file(file), languages);
  } catch (const std::exception& e) {
    return SynsetFetchError{file.string() + ": " + e.what()};
  }
}

HttpSynsetClient::HttpSynsetClient(std::string endpoint, std::string api_key_env, std::chrono::milliseconds timeout)
    : endpoint_(std::move(endpoint)), timeout_(timeout) {
  if (endpoint_.empty()) fail(ErrorKind::config, "synset service has no endpoint");
  if (!api_key_env.empty()) {
    const char* v = std::getenv(api_key_env.c_str());
    if (v == nullptr) fail(ErrorKind::config, "environment variable " + api_key_env + " is not set for the synset service");
    api_key_ = v;
  }
}

SynsetResult HttpSynsetClient::fetch(const std::string& term, const std::vector<LanguageCode>& languages) {
  http::Request req;
  req.url = endpoint_;
  req.timeout = timeout_;
  req.body = io::Json{{"term", term}, {"languages", languages}}.dump();
  if (!api_key_.empty()) req.headers["Authorization"] = api_key_;
  try {
    auto resp = http::post(req);
    if (resp.status < 200 || resp.status >= 300) return SynsetFetchError{"HTTP " + std::to_string(resp.status)};
    return parse_synset_evidence(term, resp.body, languages);
  } catch (const http::TransportError& e) {
    return SynsetFetchError{e.message};
  } catch (const std::exception& e) {
    return SynsetFetchError{e.what()};
  }
}

VerifyOutcome verify_against_synsets(const std::string& term, const std::map<LanguageCode, std::string>& melded,
                                     const std::map<LanguageCode, std::string>& provenance,
                                     const SynsetEvidence& evidence, const std::vector<LanguageCode>& languages) {
  if (!evidence.is_noun) return {std::nullopt, Discard{term, DiscardReason::non_noun, "not a noun"}};
  ConceptRow row;
  row.concept_id = text::slug(term);
  for (const auto& lang : languages) {
    auto m = melded.find(lang);
    if (m == melded.end())
      return {std::nullopt, Discard{term, DiscardReason::unfilled_language, "no surface for " + lang}};
    auto linked = evidence.linked_surfaces.find(lang);
    std::string folded = text::casefold(text::normalize_surface(m->second));
    if (linked == evidence.linked_surfaces.end() || linked->second.count(folded) == 0)
      return {std::nullopt, Discard{term, DiscardReason::synset_miss, lang + " surface '" + m->second + "' not linked"}};
    row.surfaces[lang] = m->second;
    auto p = provenance.find(lang);
    row.provenance[lang] = p == provenance.end() ? "synset" : p->second;
  }
  return {std::move(row), std::nullopt};
}

PostfilterResult postfilter(std::vector<ConceptRow> rows, const std::vector<std::string>& denylist) {
  std::set<std::string> deny;
  for (const auto& d : denylist) deny.insert(text::slug(d));
  PostfilterResult out;
  for (auto& row : rows) {
    if (deny.count(row.concept_id) != 0) {
      out.removed.push_back({row.concept_id, DiscardReason::denylist, "denylisted"});
      continue;
    }
    out.rows.push_back(std::move(row));
  }
  return out;
}

}  // namespace cococrola::concepts
