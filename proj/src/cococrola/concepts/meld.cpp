#include "cococrola/concepts/meld.hpp"

#include <algorithm>

#include "cococrola/text.hpp"

namespace cococrola::concepts {

namespace {

std::size_t priority_of(const std::string& id, const std::vector<std::string>& priority) {
  auto it = std::find(priority.begin(), priority.end(), id);
  return static_cast<std::size_t>(it - priority.begin());
}

}  // namespace

MeldResult meld_translations(const TranslationCandidates& candidates, const std::vector<LanguageCode>& targets,
                             const std::vector<std::string>& service_priority) {
  MeldResult result;

  std::vector<std::string> services;
  for (const auto& [id, _] : candidates.per_service) services.push_back(id);  // map order: by id
  auto count_of = [&](const std::string& id) {
    auto it = candidates.service_language_counts.find(id);
    return it == candidates.service_language_counts.end() ? 0 : it->second;
  };
  auto by_priority = [&](const std::string& a, const std::string& b) {
    return priority_of(a, service_priority) < priority_of(b, service_priority);
  };
  std::stable_sort(services.begin(), services.end(), by_priority);
  std::stable_sort(services.begin(), services.end(),
                   [&](const std::string& a, const std::string& b) { return count_of(a) > count_of(b); });

  if (services.empty()) {
    result.unfilled = targets;
    return result;
  }

  const std::string& base_id = services.front();
  const auto& base = candidates.per_service.at(base_id);
  for (const auto& lang : targets) {
    auto it = base.find(lang);
    if (it != base.end()) {
      result.surfaces[lang] = it->second;
      result.provenance[lang] = base_id;
    }
  }

  // Agreement with the base on languages both services cover.
  auto agreement = [&](const std::map<LanguageCode, std::string>& other) {
    int n = 0;
    for (const auto& [lang, surface] : other) {
      auto b = base.find(lang);
      if (b != base.end() && text::surfaces_agree(surface, b->second)) ++n;
    }
    return n;
  };

  std::vector<std::string> fillers(services.begin() + 1, services.end());
  std::stable_sort(fillers.begin(), fillers.end(), by_priority);

  for (const auto& lang : targets) {
    if (result.surfaces.count(lang) != 0) continue;
    const std::string* winner = nullptr;
    int winner_agreement = -1;
    for (const auto& id : fillers) {
      const auto& other = candidates.per_service.at(id);
      if (other.count(lang) == 0) continue;
      int a = agreement(other);
      if (a > winner_agreement) {  // strict: earlier priority wins ties
        winner = &id;
        winner_agreement = a;
      }
    }
    if (winner == nullptr) {
      result.unfilled.push_back(lang);
      continue;
    }
    result.surfaces[lang] = candidates.per_service.at(*winner).at(lang);
    result.provenance[lang] = *winner;
  }
  return result;
}

}  // namespace cococrola::concepts
