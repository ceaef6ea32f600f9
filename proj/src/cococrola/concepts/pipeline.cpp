#include "cococrola/concepts/pipeline.hpp"

#include <algorithm>

#include "cococrola/concepts/meld.hpp"
#include "cococrola/error.hpp"
#include "cococrola/text.hpp"

namespace cococrola::concepts {

std::size_t PipelineResult::discard_count(DiscardReason r) const {
  return static_cast<std::size_t>(
      std::count_if(meta.discards.begin(), meta.discards.end(), [r](const Discard& d) { return d.reason == r; }));
}

PipelineResult run_concept_pipeline(const PipelineInputs& inputs, const PipelineSettings& settings,
                                    std::span<TranslationClient* const> translators, SynsetClient& synsets) {
  const auto& langs = settings.languages;
  if (std::find(langs.begin(), langs.end(), settings.source_language) == langs.end())
    fail(ErrorKind::config, "source language " + settings.source_language + " is not a benchmark language");
  if (translators.empty()) fail(ErrorKind::config, "no translation clients configured");

  std::vector<LanguageCode> targets;
  for (const auto& l : langs)
    if (l != settings.source_language) targets.push_back(l);

  PipelineResult result;
  result.meta.source_language = settings.source_language;

  IngestResult ingested = ingest_frequency_lists(inputs.frequency_lists);
  result.meta.ingest = ingested.tally;
  auto selected = select_source_terms(ingested.candidates, settings.top_k, inputs.label_set);
  result.meta.input_terms = selected.size();

  std::vector<std::string> terms;
  terms.reserve(selected.size());
  for (const auto& c : selected) terms.push_back(c.surface);

  auto translations =
      query_all(terms, settings.source_language, targets, translators, settings.retry, settings.max_in_flight);

  std::vector<ConceptRow> verified;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const std::string& term = terms[i];
    const auto& cand = translations[i];
    if (cand.untranslatable()) {
      result.meta.discards.push_back({term, DiscardReason::untranslatable, "no service answered"});
      continue;
    }
    MeldResult melded = meld_translations(cand, targets, settings.service_priority);
    if (!melded.complete()) {
      std::string missing;
      for (const auto& l : melded.unfilled) missing += (missing.empty() ? "" : ",") + l;
      result.meta.discards.push_back({term, DiscardReason::unfilled_language, "missing " + missing});
      continue;
    }
    melded.surfaces[settings.source_language] = term;
    melded.provenance[settings.source_language] = "source";

    SynsetResult fetched = synsets.fetch(term, langs);
    if (auto* err = std::get_if<SynsetFetchError>(&fetched)) {
      result.meta.discards.push_back({term, DiscardReason::synset_miss, "evidence unavailable: " + err->message});
      continue;
    }
    VerifyOutcome outcome =
        verify_against_synsets(term, melded.surfaces, melded.provenance, std::get<SynsetEvidence>(fetched), langs);
    if (outcome.discard) {
      result.meta.discards.push_back(*outcome.discard);
      continue;
    }
    // Two source terms may slug to the same id; the first (better-ranked) wins.
    bool duplicate = std::any_of(verified.begin(), verified.end(),
                                 [&](const ConceptRow& r) { return r.concept_id == outcome.row->concept_id; });
    if (duplicate) {
      result.meta.discards.push_back({term, DiscardReason::denylist, "duplicate concept_id " + outcome.row->concept_id});
      continue;
    }
    verified.push_back(std::move(*outcome.row));
  }

  PostfilterResult filtered = postfilter(std::move(verified), inputs.denylist);
  for (auto& d : filtered.removed) result.meta.discards.push_back(std::move(d));

  result.list.languages = langs;
  result.list.rows = std::move(filtered.rows);
  result.list.version = settings.version_tag;
  return result;
}

}  // namespace cococrola::concepts
