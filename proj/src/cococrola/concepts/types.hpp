#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace cococrola::concepts {

using LanguageCode = std::string;

enum class TermSource { tv_captions, fiction, label_set };

std::string to_string(TermSource s);
TermSource parse_term_source(const std::string& s);

struct TermCandidate {
  std::string surface;              // lowercase, trimmed, NFC
  std::uint32_t frequency_rank = 0;  // >= 1; label-set terms carry 0
  TermSource source = TermSource::tv_captions;

  friend bool operator==(const TermCandidate&, const TermCandidate&) = default;
};

struct TranslationCandidates {
  std::string source_term;
  // service id -> language -> surface; absent services have no entry.
  std::map<std::string, std::map<LanguageCode, std::string>> per_service;
  std::map<std::string, int> service_language_counts;
  // Services that failed for this term, with the last error message.
  std::map<std::string, std::string> failures;

  bool untranslatable() const { return per_service.empty(); }
};

struct SynsetEvidence {
  std::string source_term;
  bool is_noun = false;
  std::map<LanguageCode, std::set<std::string>> linked_surfaces;
};

struct ConceptRow {
  std::string concept_id;
  std::map<LanguageCode, std::string> surfaces;
  // Per language: service id, "source" for the source-language term.
  std::map<LanguageCode, std::string> provenance;

  const std::string& surface(const LanguageCode& lang) const;
};

struct ConceptList {
  std::vector<LanguageCode> languages;
  std::vector<ConceptRow> rows;
  std::string version;

  const ConceptRow* find(const std::string& concept_id) const;
};

enum class DiscardReason { untranslatable, unfilled_language, non_noun, synset_miss, denylist };

std::string to_string(DiscardReason r);
inline constexpr DiscardReason kAllDiscardReasons[] = {DiscardReason::untranslatable, DiscardReason::unfilled_language,
                                                       DiscardReason::non_noun, DiscardReason::synset_miss,
                                                       DiscardReason::denylist};

struct Discard {
  std::string term;
  DiscardReason reason;
  std::string detail;
};

}  // namespace cococrola::concepts
