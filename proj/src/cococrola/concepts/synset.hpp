#pragma once

#include <chrono>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cococrola/concepts/types.hpp"

namespace cococrola::concepts {

struct SynsetFetchError {
  std::string message;
};

using SynsetResult = std::variant<SynsetEvidence, SynsetFetchError>;

class SynsetClient {
 public:
  virtual ~SynsetClient() = default;
  virtual SynsetResult fetch(const std::string& term, const std::vector<LanguageCode>& languages) = 0;
};

// Replays `<root>/<slug(term)>.json`:
//   {"is_noun": true, "linked_surfaces": {"es": ["perro", ...], ...}}
class FixtureSynsetClient final : public SynsetClient {
 public:
  explicit FixtureSynsetClient(std::filesystem::path root) : dir_(std::move(root)) {}
  SynsetResult fetch(const std::string& term, const std::vector<LanguageCode>& languages) override;

 private:
  std::filesystem::path dir_;
};

// POST {"term": ..., "languages": [...]} -> the fixture schema above.
class HttpSynsetClient final : public SynsetClient {
 public:
  HttpSynsetClient(std::string endpoint, std::string api_key_env, std::chrono::milliseconds timeout);
  SynsetResult fetch(const std::string& term, const std::vector<LanguageCode>& languages) override;

 private:
  std::string endpoint_;
  std::string api_key_;
  std::chrono::milliseconds timeout_;
};

// Parses the evidence schema, keeping only `languages`.
SynsetEvidence parse_synset_evidence(const std::string& term, const std::string& json_body,
                                     const std::vector<LanguageCode>& languages);

struct VerifyOutcome {
  std::optional<ConceptRow> row;
  std::optional<Discard> discard;
};

// Accepts the row only if the term is a noun and every language's surface is
// linked (case-folded) in the evidence.
VerifyOutcome verify_against_synsets(const std::string& term, const std::map<LanguageCode, std::string>& melded,
                                     const std::map<LanguageCode, std::string>& provenance,
                                     const SynsetEvidence& evidence, const std::vector<LanguageCode>& languages);

struct PostfilterResult {
  std::vector<ConceptRow> rows;
  std::vector<Discard> removed;
};

PostfilterResult postfilter(std::vector<ConceptRow> rows, const std::vector<std::string>& denylist);

}  // namespace cococrola::concepts
