#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "cococrola/concepts/types.hpp"

namespace cococrola::prompts {

using concepts::ConceptRow;
using concepts::LanguageCode;

inline constexpr std::string_view kSlot = "{}";
inline constexpr std::string_view kDefaultVariant = "default";

struct PromptTemplate {
  LanguageCode language;
  std::string pattern;  // exactly one "{}"
  std::string variant_id;
};

struct RenderedPrompt {
  std::string concept_id;
  LanguageCode language;
  std::string variant_id;
  std::string text;

  friend bool operator==(const RenderedPrompt&, const RenderedPrompt&) = default;
};

class TemplateSet {
 public:
  void add(PromptTemplate t);  // validates the slot marker
  const PromptTemplate& get(const LanguageCode& lang, const std::string& variant) const;
  bool contains(const LanguageCode& lang, const std::string& variant) const;
  std::vector<std::string> variants(const LanguageCode& lang) const;  // sorted by variant id
  std::vector<LanguageCode> languages() const;
  std::size_t size() const { return templates_.size(); }

 private:
  std::map<std::pair<LanguageCode, std::string>, PromptTemplate> templates_;
};

std::size_t count_slots(std::string_view pattern);

// JSON: {"en": {"default": "a photograph of {}", ...}, ...}. Top-level keys
// starting with '$' are annotations and ignored. Every language in
// `required_languages` must have a "default" variant.
TemplateSet parse_template_set(const std::string& json_body, const std::vector<LanguageCode>& required_languages);
TemplateSet load_template_set(const std::filesystem::path& path, const std::vector<LanguageCode>& required_languages);

RenderedPrompt render_prompt(const PromptTemplate& t, const ConceptRow& row);

// Variants x rows, ordered by variant then concept.
std::vector<RenderedPrompt> enumerate_variants(const LanguageCode& lang, const std::vector<ConceptRow>& rows,
                                               const TemplateSet& templates);

}  // namespace cococrola::prompts
