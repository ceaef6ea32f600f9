#pragma once

#include <filesystem>
#include <vector>

#include "cococrola/concepts/frequency.hpp"
#include "cococrola/concepts/types.hpp"

namespace cococrola::concepts {

// Discard accounting and provenance persisted next to the TSV as
// `<path>.meta.json`.
struct ConceptListMeta {
  std::string source_language;
  std::size_t input_terms = 0;
  std::vector<Discard> discards;
  IngestTally ingest;
};

std::filesystem::path meta_path(const std::filesystem::path& tsv_path);

// UTF-8 TSV: header `concept_id<TAB>lang1<TAB>...`, one row per concept.
std::string render_tsv(const ConceptList& list);
ConceptList parse_tsv(const std::string& body, const std::string& origin);

void write_concept_list(const std::filesystem::path& path, const ConceptList& list, const ConceptListMeta& meta);
// Version comes from the sidecar when present, else from the TSV hash.
ConceptList read_concept_list(const std::filesystem::path& path);

}  // namespace cococrola::concepts
