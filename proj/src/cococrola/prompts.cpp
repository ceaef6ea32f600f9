#include "cococrola/prompts.hpp"

#include "cococrola/error.hpp"
#include "cococrola/json_io.hpp"

namespace cococrola::prompts {

std::size_t count_slots(std::string_view pattern) {
  std::size_t n = 0;
  for (std::size_t pos = pattern.find(kSlot); pos != std::string_view::npos; pos = pattern.find(kSlot, pos + kSlot.size()))
    ++n;
  return n;
}

void TemplateSet::add(PromptTemplate t) {
  if (t.pattern.empty()) fail(ErrorKind::config, "empty template for " + t.language + "/" + t.variant_id);
  std::size_t slots = count_slots(t.pattern);
  if (slots != 1)
    fail(ErrorKind::config, "template " + t.language + "/" + t.variant_id + " has " + std::to_string(slots) +
                                " slot markers, expected exactly one: \"" + t.pattern + "\"");
  auto key = std::make_pair(t.language, t.variant_id);
  templates_.insert_or_assign(std::move(key), std::move(t));
}

const PromptTemplate& TemplateSet::get(const LanguageCode& lang, const std::string& variant) const {
  auto it = templates_.find({lang, variant});
  if (it == templates_.end()) fail(ErrorKind::config, "no template " + lang + "/" + variant);
  return it->second;
}

bool TemplateSet::contains(const LanguageCode& lang, const std::string& variant) const {
  return templates_.count({lang, variant}) != 0;
}

std::vector<std::string> TemplateSet::variants(const LanguageCode& lang) const {
  std::vector<std::string> out;
  for (const auto& [key, _] : templates_)
    if (key.first == lang) out.push_back(key.second);
  return out;
}

std::vector<LanguageCode> TemplateSet::languages() const {
  std::vector<LanguageCode> out;
  for (const auto& [key, _] : templates_)
    if (out.empty() || out.back() != key.first) out.push_back(key.first);
  return out;
}

TemplateSet parse_template_set(const std::string& json_body, const std::vector<LanguageCode>& required_languages) {
  io::Json body;
  try {
    body = io::Json::parse(json_body);
  } catch (const io::Json::parse_error& e) {
    fail(ErrorKind::config, std::string("template file: ") + e.what());
  }
  if (!body.is_object()) fail(ErrorKind::config, "template file must be a JSON object");
  TemplateSet set;
  for (const auto& [lang, variants] : body.items()) {
    if (!lang.empty() && lang.front() == '$') continue;
    if (!variants.is_object()) fail(ErrorKind::config, "templates for " + lang + " must be an object");
    for (const auto& [variant, pattern] : variants.items()) {
      if (!pattern.is_string()) fail(ErrorKind::config, "template " + lang + "/" + variant + " must be a string");
      set.add({lang, pattern.get<std::string>(), variant});
    }
  }
  std::string missing;
  for (const auto& lang : required_languages)
    if (!set.contains(lang, std::string(kDefaultVariant))) missing += (missing.empty() ? "" : ", ") + lang;
  if (!missing.empty()) fail(ErrorKind::config, "missing default template for: " + missing);
  return set;
}

TemplateSet load_template_set(const std::filesystem::path& path, const std::vector<LanguageCode>& required_languages) {
  return parse_template_set(io::read_file(path), required_languages);
}

RenderedPrompt render_prompt(const PromptTemplate& t, const ConceptRow& row) {
  auto it = row.surfaces.find(t.language);
  if (it == row.surfaces.end())
    fail(ErrorKind::invalid_argument, "concept '" + row.concept_id + "' has no surface for language " + t.language);
  std::string text = t.pattern;
  auto pos = text.find(kSlot);
  if (pos == std::string::npos || count_slots(text) != 1)
    fail(ErrorKind::config, "template " + t.language + "/" + t.variant_id + " must contain exactly one slot");
  text.replace(pos, kSlot.size(), it->second);
  return {row.concept_id, t.language, t.variant_id, std::move(text)};
}

std::vector<RenderedPrompt> enumerate_variants(const LanguageCode& lang, const std::vector<ConceptRow>& rows,
                                               const TemplateSet& templates) {
  std::vector<RenderedPrompt> out;
  for (const auto& variant : templates.variants(lang)) {
    const auto& t = templates.get(lang, variant);
    for (const auto& row : rows) out.push_back(render_prompt(t, row));
  }
  return out;
}

}  // namespace cococrola::prompts
