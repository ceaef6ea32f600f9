#pragma once

#include <string>
#include <vector>

#include "cococrola/concepts/types.hpp"

namespace cococrola::concepts {

struct FrequencySource {
  TermSource source;
  std::string text;  // UTF-8, one term per line, optional trailing count
};

struct IngestTally {
  std::size_t lines = 0;
  std::size_t malformed = 0;
};

struct IngestResult {
  std::vector<TermCandidate> candidates;
  IngestTally tally;
};

// Within a stream, terms with counts are ranked by descending count (stable
// on line order); streams without counts rank by line order. Across streams
// each surface keeps its best rank. Output is ordered by (rank, surface).
IngestResult ingest_frequency_lists(const std::vector<FrequencySource>& sources);

// The first `top_k` candidates plus every label-set term (rank 0), deduped by
// surface. Label terms already present keep their frequency entry.
std::vector<TermCandidate> select_source_terms(const std::vector<TermCandidate>& candidates, std::size_t top_k,
                                               const std::vector<std::string>& label_set);

// Reads a one-term-per-line file; blank lines and '#' comments are skipped.
std::vector<std::string> read_term_file(const std::string& text);

}  // namespace cococrola::concepts
