#pragma once

#include <span>
#include <string>
#include <vector>

#include "cococrola/concepts/concept_list.hpp"
#include "cococrola/concepts/frequency.hpp"
#include "cococrola/concepts/synset.hpp"
#include "cococrola/concepts/translation.hpp"

namespace cococrola::concepts {

struct PipelineSettings {
  std::vector<LanguageCode> languages;  // includes the source language
  LanguageCode source_language = "en";
  std::size_t top_k = 2000;
  std::vector<std::string> service_priority;
  std::string version_tag = "1.0";
  std::size_t max_in_flight = 4;
  RetryPolicy retry;
};

struct PipelineInputs {
  std::vector<FrequencySource> frequency_lists;
  std::vector<std::string> label_set;
  std::vector<std::string> denylist;
};

struct PipelineResult {
  ConceptList list;
  ConceptListMeta meta;

  // input_terms == rows + discards, by construction; checked in tests.
  std::size_t discard_count(DiscardReason r) const;
};

// frequency lists -> term selection -> translator ensemble -> melding ->
// synset verification -> denylist.
PipelineResult run_concept_pipeline(const PipelineInputs& inputs, const PipelineSettings& settings,
                                    std::span<TranslationClient* const> translators, SynsetClient& synsets);

}  // namespace cococrola::concepts
