#pragma once

#include <map>
#include <string>
#include <vector>

#include "cococrola/concepts/types.hpp"

namespace cococrola::concepts {

struct MeldResult {
  std::map<LanguageCode, std::string> surfaces;
  std::map<LanguageCode, std::string> provenance;  // language -> service id
  std::vector<LanguageCode> unfilled;

  bool complete() const { return unfilled.empty(); }
};

// Orders services by returned-language count (descending), ties by
// `service_priority` (services missing from it follow, by id). The first
// service is the base. Each language the base lacks is filled from the
// service whose surfaces agree with the base on the most shared languages
// (case-folded exact match), ties again by priority.
MeldResult meld_translations(const TranslationCandidates& candidates, const std::vector<LanguageCode>& targets,
                             const std::vector<std::string>& service_priority);

}  // namespace cococrola::concepts
